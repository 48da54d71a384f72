// SPDX-License-Identifier: Apache-2.0
//
// Synthetic mmWave link records from the Floating-Intercept path-loss model
//
//   PL(d) [dB] = alpha + 10 * beta * log10(d) + X_sigma,   X_sigma ~ N(0, sigma^2)
//
// plus auxiliary channel-state features whose distributions depend on the
// link distance:
//
//   distance_m      ~ Uniform[d_min, d_max]
//   num_paths       = 1 + Poisson(4)
//   rms_delay_ns    ~ Exponential(mean = 20 + 0.5 * distance_m)
//   aoa/aod spread  ~ Uniform[5, 60) degrees
//
// Sample i draws from its own engine seeded with rng::derive_seed(seed, i),
// so any subset of samples can be generated independently and in any order.
#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "relaylearn/dataset.hpp"
#include "relaylearn/errors.hpp"
#include "relaylearn/link.hpp"
#include "relaylearn/rng.hpp"

namespace relaylearn::channel {

// Defaults are a representative 28 GHz urban-microcell FI fit.
struct FIParams {
  double alpha = 72.0;  // dB
  double beta = 2.92;
  double sigma = 8.7;   // dB

  void validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
      throw ConfigError("FI parameters alpha and beta must be finite");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
      throw ConfigError("FI shadow-fading sigma must be finite and >= 0");
    }
  }

  friend bool operator==(const FIParams&, const FIParams&) = default;
};

struct ScenarioConfig {
  double d_min = 1.0;   // m
  double d_max = 40.0;  // m
  double freq_ghz = 28.0;
  double bandwidth_mhz = 800.0;
  double tx_power_dbm = 30.0;
  std::int64_t n_samples = 10000;
  std::int64_t n_candidates = 3;
  std::uint64_t seed = 42;
  FIParams fi;

  void validate() const {
    if (!(d_min > 0.0) || !(d_min <= d_max) || !std::isfinite(d_max)) {
      throw ConfigError("scenario requires 0 < d_min <= d_max");
    }
    if (!(freq_ghz > 0.0) || !std::isfinite(freq_ghz)) {
      throw ConfigError("scenario requires a positive carrier frequency");
    }
    if (!std::isfinite(tx_power_dbm)) throw ConfigError("tx_power_dbm must be finite");
    if (n_samples < 0) throw ConfigError("n_samples must be >= 0");
    if (n_candidates < 1) throw ConfigError("n_candidates must be >= 1");
    fi.validate();
  }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

inline double fi_path_loss(const FIParams& fi, double distance_m, double shadow_db) {
  if (!(distance_m > 0.0)) throw DomainError("fi_path_loss: distance must be > 0");
  return fi.alpha + 10.0 * fi.beta * std::log10(distance_m) + shadow_db;
}

// Two engine outputs per call (Box-Muller).
inline double sample_shadow(rng::Rng& gen, double sigma) {
  if (!(sigma >= 0.0)) throw DomainError("sample_shadow: sigma must be >= 0");
  return rng::gaussian(gen, sigma);
}

// The label is left at 0; gen_dataset fills it from the label rule.
inline LinkSample gen_link(rng::Rng& gen, const ScenarioConfig& cfg, std::int64_t link_id) {
  LinkSample s;
  s.link_id = link_id;
  s.freq_ghz = cfg.freq_ghz;
  s.tx_power_dbm = cfg.tx_power_dbm;
  s.distance_m = gen.uniform(cfg.d_min, cfg.d_max);
  const double shadow = sample_shadow(gen, cfg.fi.sigma);
  s.path_loss_db = fi_path_loss(cfg.fi, s.distance_m, shadow);
  s.rx_power_dbm = cfg.tx_power_dbm - s.path_loss_db;
  s.num_paths = 1 + static_cast<std::int64_t>(gen.poisson(4.0));
  s.rms_delay_ns = gen.exponential(20.0 + 0.5 * s.distance_m);
  s.aoa_spread_deg = gen.uniform(5.0, 60.0);
  s.aod_spread_deg = gen.uniform(5.0, 60.0);
  return s;
}

inline LinkSample gen_sample(const ScenarioConfig& cfg, std::int64_t index,
                             data::LabelRule rule = {}) {
  rng::Rng gen(rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(index)));
  auto s = gen_link(gen, cfg, index);
  s.label = data::label(s.path_loss_db, rule);
  return s;
}

inline std::vector<LinkSample> gen_dataset(const ScenarioConfig& cfg,
                                           data::LabelRule rule = {}) {
  cfg.validate();
  if (cfg.n_samples == 0) throw DataError("gen_dataset: n_samples is 0, dataset would be empty");
  std::vector<LinkSample> out;
  out.reserve(static_cast<std::size_t>(cfg.n_samples));
  for (std::int64_t i = 0; i < cfg.n_samples; ++i) out.push_back(gen_sample(cfg, i, rule));
  return out;
}

// Selection instance of the sample at `index` when records are grouped in
// consecutive runs of n_candidates.
inline std::int64_t instance_of(std::int64_t index, std::int64_t n_candidates) {
  return index / n_candidates;
}

// ---------------------------------------------------------------------------
// JSON: field names mirror the struct members; missing fields keep defaults.

inline void to_json(nlohmann::ordered_json& j, const FIParams& fi) {
  j = nlohmann::ordered_json{{"alpha", fi.alpha}, {"beta", fi.beta}, {"sigma", fi.sigma}};
}

inline void from_json(const nlohmann::ordered_json& j, FIParams& fi) {
  fi.alpha = j.value("alpha", fi.alpha);
  fi.beta = j.value("beta", fi.beta);
  fi.sigma = j.value("sigma", fi.sigma);
}

inline void to_json(nlohmann::ordered_json& j, const ScenarioConfig& c) {
  j = nlohmann::ordered_json{{"d_min", c.d_min},
                             {"d_max", c.d_max},
                             {"freq_ghz", c.freq_ghz},
                             {"bandwidth_mhz", c.bandwidth_mhz},
                             {"tx_power_dbm", c.tx_power_dbm},
                             {"n_samples", c.n_samples},
                             {"n_candidates", c.n_candidates},
                             {"seed", c.seed},
                             {"fi", c.fi}};
}

inline void from_json(const nlohmann::ordered_json& j, ScenarioConfig& c) {
  if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
  try {
    c.d_min = j.value("d_min", c.d_min);
    c.d_max = j.value("d_max", c.d_max);
    c.freq_ghz = j.value("freq_ghz", c.freq_ghz);
    c.bandwidth_mhz = j.value("bandwidth_mhz", c.bandwidth_mhz);
    c.tx_power_dbm = j.value("tx_power_dbm", c.tx_power_dbm);
    c.n_samples = j.value("n_samples", c.n_samples);
    c.n_candidates = j.value("n_candidates", c.n_candidates);
    c.seed = j.value("seed", c.seed);
    if (j.contains("fi")) c.fi = j.at("fi").get<FIParams>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario config: ") + e.what());
  }
}

}  // namespace relaylearn::channel
