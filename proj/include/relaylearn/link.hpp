// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "relaylearn/errors.hpp"

namespace relaylearn {

// One candidate link: its channel-state features, its path loss and its
// strong(1)/weak(0) class. rx_power_dbm == tx_power_dbm - path_loss_db.
struct LinkSample {
  std::int64_t link_id = 0;
  double distance_m = 0.0;
  double freq_ghz = 0.0;
  double tx_power_dbm = 0.0;
  double rx_power_dbm = 0.0;
  double rms_delay_ns = 0.0;
  std::int64_t num_paths = 1;
  double aoa_spread_deg = 0.0;
  double aod_spread_deg = 0.0;
  double path_loss_db = 0.0;
  int label = 0;

  friend bool operator==(const LinkSample&, const LinkSample&) = default;
};

// Numeric columns usable as learning features. Label and link id are not.
enum class Feature {
  distance_m,
  freq_ghz,
  tx_power_dbm,
  rx_power_dbm,
  rms_delay_ns,
  num_paths,
  aoa_spread_deg,
  aod_spread_deg,
  path_loss_db,
};

inline constexpr std::array<std::pair<Feature, std::string_view>, 9> kFeatureNames{{
    {Feature::distance_m, "distance_m"},
    {Feature::freq_ghz, "freq_ghz"},
    {Feature::tx_power_dbm, "tx_power_dbm"},
    {Feature::rx_power_dbm, "rx_power_dbm"},
    {Feature::rms_delay_ns, "rms_delay_ns"},
    {Feature::num_paths, "num_paths"},
    {Feature::aoa_spread_deg, "aoa_spread_deg"},
    {Feature::aod_spread_deg, "aod_spread_deg"},
    {Feature::path_loss_db, "path_loss_db"},
}};

inline Feature parse_feature(std::string_view name) {
  for (const auto& [feature, text] : kFeatureNames) {
    if (text == name) return feature;
  }
  throw DataError("unknown feature '" + std::string(name) + "'");
}

inline std::string_view feature_name(Feature f) {
  return kFeatureNames[static_cast<std::size_t>(f)].second;
}

inline double feature_value(const LinkSample& s, Feature f) {
  switch (f) {
    case Feature::distance_m: return s.distance_m;
    case Feature::freq_ghz: return s.freq_ghz;
    case Feature::tx_power_dbm: return s.tx_power_dbm;
    case Feature::rx_power_dbm: return s.rx_power_dbm;
    case Feature::rms_delay_ns: return s.rms_delay_ns;
    case Feature::num_paths: return static_cast<double>(s.num_paths);
    case Feature::aoa_spread_deg: return s.aoa_spread_deg;
    case Feature::aod_spread_deg: return s.aod_spread_deg;
    case Feature::path_loss_db: return s.path_loss_db;
  }
  return 0.0;
}

}  // namespace relaylearn
