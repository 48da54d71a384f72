// SPDX-License-Identifier: Apache-2.0
//
// Labeling, splitting, normalization and CSV persistence of link datasets.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relaylearn/errors.hpp"
#include "relaylearn/format.hpp"
#include "relaylearn/link.hpp"
#include "relaylearn/rng.hpp"

namespace relaylearn::data {

// Samples are rows, features are columns.
using FeatureMatrix = Eigen::MatrixXd;

// Path loss is carried as a positive dB attenuation; a link is strong (1)
// when its loss is strictly below the threshold.
struct LabelRule {
  double threshold_db = 120.0;
};

inline int label(double path_loss_db, LabelRule rule = {}) {
  if (std::isnan(path_loss_db)) throw DomainError("label: path loss is NaN");
  if (!std::isfinite(rule.threshold_db)) throw DomainError("label: threshold must be finite");
  return path_loss_db < rule.threshold_db ? 1 : 0;
}

// path_loss_db is left out: it alone determines the label.
inline std::vector<std::string> default_feature_names() {
  return {"distance_m", "rx_power_dbm", "rms_delay_ns",
          "num_paths",  "aoa_spread_deg", "aod_spread_deg"};
}

struct Dataset {
  std::vector<LinkSample> samples;
  std::vector<std::string> feature_names = default_feature_names();

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

inline std::vector<Feature> resolve_features(const std::vector<std::string>& names) {
  std::vector<Feature> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(parse_feature(n));
  return out;
}

inline FeatureMatrix feature_matrix(const std::vector<LinkSample>& samples,
                                    const std::vector<std::string>& names) {
  const auto features = resolve_features(names);
  FeatureMatrix x(static_cast<Eigen::Index>(samples.size()),
                  static_cast<Eigen::Index>(features.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = 0; j < features.size(); ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          feature_value(samples[i], features[j]);
    }
  }
  return x;
}

inline FeatureMatrix feature_matrix(const Dataset& ds) {
  return feature_matrix(ds.samples, ds.feature_names);
}

inline std::vector<int> labels(const Dataset& ds) {
  std::vector<int> y;
  y.reserve(ds.size());
  for (const auto& s : ds.samples) y.push_back(s.label);
  return y;
}

inline Eigen::VectorXd label_vector(const std::vector<int>& y) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v(static_cast<Eigen::Index>(i)) = y[i];
  return v;
}

// ---------------------------------------------------------------------------
// Train/test split

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Train size is round(n * fraction) with ties to even; the rest is test.
inline std::size_t train_size(std::size_t n, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("split: train fraction must lie in (0, 1)");
  }
  const double exact = static_cast<double>(n) * train_fraction;
  double rounded = std::floor(exact);
  const double rem = exact - rounded;
  if (rem > 0.5 || (rem == 0.5 && std::fmod(rounded, 2.0) != 0.0)) rounded += 1.0;
  return static_cast<std::size_t>(rounded);
}

inline SplitIndices split_indices(std::size_t n, double train_fraction, std::uint64_t seed) {
  if (n == 0) throw DataError("split: dataset is empty");
  const std::size_t n_train = train_size(n, train_fraction);
  if (n_train == 0 || n_train == n) {
    throw DataError("split: " + std::to_string(n) + " samples at fraction " +
                    text::number(train_fraction) + " leaves one side empty");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng::Rng gen(rng::derive_seed(seed, "split"));
  rng::shuffle(gen, std::span<std::size_t>(order));
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return out;
}

inline Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.feature_names = ds.feature_names;
  out.samples.reserve(indices.size());
  for (auto i : indices) out.samples.push_back(ds.samples.at(i));
  return out;
}

inline std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction,
                                         std::uint64_t seed) {
  const auto idx = split_indices(ds.size(), train_fraction, seed);
  return {subset(ds, idx.train), subset(ds, idx.test)};
}

// ---------------------------------------------------------------------------
// Standardization

// Per-feature mean and population standard deviation of the training split.
// A zero-variance column keeps stddev = 1 and its own value as the mean, so
// it normalizes to exactly zero.
struct Normalizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  std::size_t dim() const noexcept { return mean.size(); }

  FeatureMatrix apply(const FeatureMatrix& x) const {
    if (static_cast<std::size_t>(x.cols()) != dim()) {
      throw DataError("normalizer: expected " + std::to_string(dim()) + " features, got " +
                      std::to_string(x.cols()));
    }
    FeatureMatrix out(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const auto k = static_cast<std::size_t>(j);
      out.col(j) = (x.col(j).array() - mean[k]) / stddev[k];
    }
    return out;
  }

  FeatureMatrix invert(const FeatureMatrix& z) const {
    FeatureMatrix out(z.rows(), z.cols());
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      const auto k = static_cast<std::size_t>(j);
      out.col(j) = z.col(j).array() * stddev[k] + mean[k];
    }
    return out;
  }

  friend bool operator==(const Normalizer&, const Normalizer&) = default;
};

inline Normalizer fit_normalizer(const FeatureMatrix& x) {
  if (x.rows() == 0) throw DataError("fit_normalizer: training split is empty");
  Normalizer nz;
  const auto n = static_cast<double>(x.rows());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const auto col = x.col(j);
    const bool constant = (col.array() == col(0)).all();
    if (constant) {
      nz.mean.push_back(col(0));
      nz.stddev.push_back(1.0);
      continue;
    }
    const double mu = col.sum() / n;
    const double var = (col.array() - mu).square().sum() / n;
    const double sd = std::sqrt(var);
    nz.mean.push_back(mu);
    nz.stddev.push_back(sd > 0.0 ? sd : 1.0);
  }
  return nz;
}

inline Normalizer fit_normalizer(const Dataset& train) {
  if (train.empty()) throw DataError("fit_normalizer: training split is empty");
  return fit_normalizer(feature_matrix(train));
}

inline FeatureMatrix apply_normalizer(const Normalizer& nz, const Dataset& ds) {
  return nz.apply(feature_matrix(ds));
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::array<std::string_view, 11> kCsvColumns{
    "link_id",        "distance_m",     "freq_ghz",     "tx_power_dbm",
    "rx_power_dbm",   "rms_delay_ns",   "num_paths",    "aoa_spread_deg",
    "aod_spread_deg", "path_loss_db",   "label"};

inline void write_csv(const Dataset& ds, std::ostream& os) {
  for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
    os << (c ? "," : "") << kCsvColumns[c];
  }
  os << '\n';
  for (const auto& s : ds.samples) {
    os << text::integer(s.link_id) << ',' << text::number(s.distance_m) << ','
       << text::number(s.freq_ghz) << ',' << text::number(s.tx_power_dbm) << ','
       << text::number(s.rx_power_dbm) << ',' << text::number(s.rms_delay_ns) << ','
       << text::integer(s.num_paths) << ',' << text::number(s.aoa_spread_deg) << ','
       << text::number(s.aod_spread_deg) << ',' << text::number(s.path_loss_db) << ','
       << s.label << '\n';
  }
}

inline void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(ds, os);
  os.flush();
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace detail

// Columns are matched by header name, so extra columns (as in external
// simulator exports) are ignored. Every column of kCsvColumns is required.
inline Dataset read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || detail::trim(line).empty()) {
    throw ParseError(0, "empty file, expected a header row");
  }
  const auto header = detail::split_fields(detail::trim(line));
  std::array<std::size_t, kCsvColumns.size()> pos{};
  for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
    const auto it = std::find_if(header.begin(), header.end(), [&](std::string_view h) {
      return detail::trim(h) == kCsvColumns[c];
    });
    if (it == header.end()) {
      throw ParseError(1, "missing column '" + std::string(kCsvColumns[c]) + "'");
    }
    pos[c] = static_cast<std::size_t>(it - header.begin());
  }

  Dataset ds;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const auto fields = detail::split_fields(trimmed);
    if (fields.size() != header.size()) {
      throw ParseError(row, "expected " + std::to_string(header.size()) + " fields, got " +
                                std::to_string(fields.size()));
    }
    auto real = [&](std::size_t c) {
      const auto v = text::parse_double(detail::trim(fields[pos[c]]));
      if (!v) {
        throw ParseError(row, "column '" + std::string(kCsvColumns[c]) + "' is not a number");
      }
      return *v;
    };
    auto whole = [&](std::size_t c) {
      const auto v = text::parse_int(detail::trim(fields[pos[c]]));
      if (!v) {
        throw ParseError(row, "column '" + std::string(kCsvColumns[c]) + "' is not an integer");
      }
      return *v;
    };
    LinkSample s;
    s.link_id = whole(0);
    s.distance_m = real(1);
    s.freq_ghz = real(2);
    s.tx_power_dbm = real(3);
    s.rx_power_dbm = real(4);
    s.rms_delay_ns = real(5);
    s.num_paths = whole(6);
    s.aoa_spread_deg = real(7);
    s.aod_spread_deg = real(8);
    s.path_loss_db = real(9);
    const auto lab = text::parse_int(detail::trim(fields[pos[10]]));
    if (!lab || (*lab != 0 && *lab != 1)) {
      throw ParseError(row, "label must be 0 or 1, got '" +
                                std::string(detail::trim(fields[pos[10]])) + "'");
    }
    s.label = static_cast<int>(*lab);
    if (s.num_paths < 1) throw ParseError(row, "num_paths must be >= 1");
    if (s.rms_delay_ns < 0.0) throw ParseError(row, "rms_delay_ns must be >= 0");
    ds.samples.push_back(s);
  }
  if (ds.empty()) throw ParseError(0, "no data rows");
  return ds;
}

inline Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  return read_csv(is);
}

}  // namespace relaylearn::data
