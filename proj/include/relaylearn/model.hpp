// SPDX-License-Identifier: Apache-2.0
//
// One envelope for every classifier kind so evaluation, comparison and relay
// selection never care which model produced the scores. Persisted as a single
// JSON document; doubles are written in shortest round-trip form, so a
// reloaded model predicts bit-identically.
#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "relaylearn/baselines.hpp"
#include "relaylearn/dataset.hpp"
#include "relaylearn/errors.hpp"
#include "relaylearn/mlp.hpp"

namespace relaylearn::model {

using json = nlohmann::ordered_json;

// Scores links by their true path loss: sigmoid((threshold - PL) / 10 dB),
// class by the labeling rule. The 10 dB scale keeps the score strictly
// decreasing in PL (no saturation to 1.0) over any realistic loss range.
struct OracleModel {
  static constexpr double kScaleDb = 10.0;
  data::LabelRule rule;

  std::vector<double> scores(const std::vector<LinkSample>& samples) const {
    std::vector<double> out;
    for (const auto& s : samples) {
      out.push_back(mlp::sigmoid((rule.threshold_db - s.path_loss_db) / kScaleDb));
    }
    return out;
  }
  std::vector<int> classes(const std::vector<LinkSample>& samples) const {
    std::vector<int> out;
    for (const auto& s : samples) out.push_back(data::label(s.path_loss_db, rule));
    return out;
  }
};

// Which split of which dataset a model was trained on, so evaluation can
// rebuild the held-out part.
struct SplitRecord {
  std::uint64_t seed = 0;
  double train_fraction = 0.75;
  std::int64_t n_samples = 0;
  std::string fingerprint;

  friend bool operator==(const SplitRecord&, const SplitRecord&) = default;
};

using Variant = std::variant<mlp::TrainedMLP, baselines::LogRegModel, baselines::DummyModel,
                             baselines::SvmModel, OracleModel>;

struct AnyModel {
  std::string name;
  Variant model;
  std::optional<SplitRecord> split;

  std::string_view kind() const {
    return std::visit(
        [](const auto& m) -> std::string_view {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, mlp::TrainedMLP>) return "mlp";
          else if constexpr (std::is_same_v<T, baselines::LogRegModel>) return "logreg";
          else if constexpr (std::is_same_v<T, baselines::DummyModel>) return "dummy";
          else if constexpr (std::is_same_v<T, baselines::SvmModel>) return "svm";
          else return "oracle";
        },
        model);
  }

  std::vector<std::string> feature_names() const {
    return std::visit(
        [](const auto& m) -> std::vector<std::string> {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, OracleModel>) {
            return {"path_loss_db"};
          } else {
            return m.feature_names;
          }
        },
        model);
  }

  // Real-valued scores, higher meaning more likely strong: probabilities for
  // mlp/logreg/dummy/oracle, signed margins for svm.
  std::vector<double> scores(const std::vector<LinkSample>& samples) const {
    return std::visit(
        [&](const auto& m) -> std::vector<double> {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, mlp::TrainedMLP>) {
            return baselines::to_std(m.predict_proba(samples));
          } else {
            return m.scores(samples);
          }
        },
        model);
  }

  std::vector<int> classes(const std::vector<LinkSample>& samples) const {
    return std::visit(
        [&](const auto& m) -> std::vector<int> {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, mlp::TrainedMLP>) {
            return mlp::classify(m.predict_proba(samples));
          } else {
            return m.classes(samples);
          }
        },
        model);
  }

  std::vector<double> loss_history() const {
    return std::visit(
        [](const auto& m) -> std::vector<double> {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, baselines::DummyModel> ||
                        std::is_same_v<T, OracleModel>) {
            return {};
          } else {
            return m.loss_history;
          }
        },
        model);
  }
};

// FNV-1a over the canonical CSV rendering of the samples.
inline std::string fingerprint(const data::Dataset& ds) {
  std::ostringstream os;
  data::write_csv(ds, os);
  const auto h = rng::hash_tag(os.str());
  std::ostringstream hex;
  hex << std::hex;
  hex.width(16);
  hex.fill('0');
  hex << h;
  return hex.str();
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline json matrix_json(const Eigen::MatrixXd& m) {
  auto rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json vector_json(const Eigen::VectorXd& v) {
  auto arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

inline Eigen::MatrixXd matrix_from(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw DataError("model: weight matrix has wrong row count");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw DataError("model: weight matrix has wrong column count");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

inline Eigen::VectorXd vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline json normalizer_json(const data::Normalizer& nz) {
  return {{"mean", nz.mean}, {"stddev", nz.stddev}};
}

inline data::Normalizer normalizer_from(const json& j) {
  data::Normalizer nz{j.at("mean").get<std::vector<double>>(),
                      j.at("stddev").get<std::vector<double>>()};
  if (nz.mean.size() != nz.stddev.size()) throw DataError("model: normalizer size mismatch");
  return nz;
}

// tol may be +inf, which JSON cannot carry; it is written as null.
inline json tol_json(double tol) { return std::isinf(tol) ? json(nullptr) : json(tol); }

inline double tol_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

inline json mlp_config_json(const mlp::TrainConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"epsilon", c.epsilon},
          {"max_epochs", c.max_epochs},
          {"batch_size", c.batch_size},
          {"tol", tol_json(c.tol)},
          {"n_iter_no_change", c.n_iter_no_change},
          {"seed", c.seed}};
}

inline mlp::TrainConfig mlp_config_from(const json& j) {
  mlp::TrainConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.max_epochs = j.at("max_epochs").get<std::int64_t>();
  c.batch_size = j.at("batch_size").get<std::int64_t>();
  c.tol = tol_from(j.at("tol"));
  c.n_iter_no_change = j.at("n_iter_no_change").get<std::int64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

inline json body_json(const mlp::TrainedMLP& m) {
  auto layers = json::array();
  for (const auto& l : m.layers) {
    layers.push_back({{"activation", mlp::activation_name(l.activation)},
                      {"weights", matrix_json(l.weights)},
                      {"biases", vector_json(l.biases)}});
  }
  return {{"architecture",
           {{"input_dim", m.architecture.input_dim},
            {"hidden_sizes", m.architecture.hidden_sizes},
            {"output_dim", m.architecture.output_dim}}},
          {"layers", std::move(layers)},
          {"normalizer", normalizer_json(m.normalizer)},
          {"train_config", mlp_config_json(m.config)},
          {"epochs_run", m.epochs_run},
          {"best_epoch", m.best_epoch},
          {"loss_history", m.loss_history},
          {"validation_loss_history", m.validation_loss_history}};
}

inline json body_json(const baselines::LogRegModel& m) {
  return {{"weights", vector_json(m.weights)},
          {"bias", m.bias},
          {"normalizer", normalizer_json(m.normalizer)},
          {"train_config",
           {{"learning_rate", m.config.learning_rate},
            {"max_epochs", m.config.max_epochs},
            {"tol", tol_json(m.config.tol)},
            {"seed", m.config.seed}}},
          {"epochs_run", m.epochs_run},
          {"loss_history", m.loss_history}};
}

inline json body_json(const baselines::DummyModel& m) {
  return {{"strategy", "most_frequent"},
          {"majority_class", m.majority_class},
          {"positive_rate", m.positive_rate}};
}

inline json body_json(const baselines::SvmModel& m) {
  return {{"feature_map", baselines::feature_map_name(m.feature_map)},
          {"weights", vector_json(m.weights)},
          {"bias", m.bias},
          {"normalizer", normalizer_json(m.normalizer)},
          {"expanded_normalizer", normalizer_json(m.expanded_normalizer)},
          {"train_config",
           {{"c", m.config.c},
            {"learning_rate", m.config.learning_rate},
            {"max_epochs", m.config.max_epochs},
            {"tol", tol_json(m.config.tol)},
            {"n_iter_no_change", m.config.n_iter_no_change},
            {"seed", m.config.seed}}},
          {"epochs_run", m.epochs_run},
          {"loss_history", m.loss_history}};
}

inline json body_json(const OracleModel& m) { return {{"threshold_db", m.rule.threshold_db}}; }

}  // namespace detail

inline json to_json(const AnyModel& m) {
  json j{{"format", "relaylearn-model"},
         {"version", 1},
         {"kind", m.kind()},
         {"name", m.name},
         {"feature_names", m.feature_names()}};
  if (m.split) {
    j["split"] = {{"seed", m.split->seed},
                  {"train_fraction", m.split->train_fraction},
                  {"n_samples", m.split->n_samples},
                  {"fingerprint", m.split->fingerprint}};
  }
  const json body = std::visit([](const auto& v) { return detail::body_json(v); }, m.model);
  for (const auto& [key, value] : body.items()) j[key] = value;
  return j;
}

inline AnyModel from_json(const json& j) {
  try {
    if (j.value("format", std::string{}) != "relaylearn-model") {
      throw DataError("model: not a relaylearn model document");
    }
    AnyModel m;
    m.name = j.value("name", std::string{});
    const auto kind = j.at("kind").get<std::string>();
    const auto features = j.at("feature_names").get<std::vector<std::string>>();
    if (j.contains("split")) {
      const auto& s = j.at("split");
      m.split = SplitRecord{s.at("seed").get<std::uint64_t>(), s.at("train_fraction").get<double>(),
                            s.at("n_samples").get<std::int64_t>(),
                            s.at("fingerprint").get<std::string>()};
    }
    if (kind == "mlp") {
      mlp::TrainedMLP t;
      t.feature_names = features;
      const auto& a = j.at("architecture");
      t.architecture = {a.at("input_dim").get<std::size_t>(),
                        a.at("hidden_sizes").get<std::vector<std::size_t>>(),
                        a.at("output_dim").get<std::size_t>()};
      t.architecture.validate();
      std::vector<std::size_t> sizes{t.architecture.input_dim};
      sizes.insert(sizes.end(), t.architecture.hidden_sizes.begin(),
                   t.architecture.hidden_sizes.end());
      sizes.push_back(t.architecture.output_dim);
      const auto& layers = j.at("layers");
      if (layers.size() + 1 != sizes.size()) throw DataError("model: layer count mismatch");
      for (std::size_t l = 0; l < layers.size(); ++l) {
        mlp::Layer layer;
        layer.activation = mlp::parse_activation(layers[l].at("activation").get<std::string>());
        layer.weights = detail::matrix_from(layers[l].at("weights"),
                                            static_cast<Eigen::Index>(sizes[l + 1]),
                                            static_cast<Eigen::Index>(sizes[l]));
        layer.biases = detail::vector_from(layers[l].at("biases"));
        t.layers.push_back(std::move(layer));
      }
      mlp::check_network(t.layers);
      t.normalizer = detail::normalizer_from(j.at("normalizer"));
      t.config = detail::mlp_config_from(j.at("train_config"));
      t.epochs_run = j.at("epochs_run").get<std::int64_t>();
      t.best_epoch = j.value("best_epoch", t.epochs_run);
      t.loss_history = j.at("loss_history").get<std::vector<double>>();
      t.validation_loss_history = j.value("validation_loss_history", std::vector<double>{});
      if (t.normalizer.dim() != t.architecture.input_dim || features.size() != t.architecture.input_dim) {
        throw DataError("model: feature count does not match the input layer");
      }
      m.model = std::move(t);
    } else if (kind == "logreg") {
      baselines::LogRegModel t;
      t.feature_names = features;
      t.weights = detail::vector_from(j.at("weights"));
      t.bias = j.at("bias").get<double>();
      t.normalizer = detail::normalizer_from(j.at("normalizer"));
      const auto& c = j.at("train_config");
      t.config = {c.at("learning_rate").get<double>(), c.at("max_epochs").get<std::int64_t>(),
                  detail::tol_from(c.at("tol")), c.at("seed").get<std::uint64_t>()};
      t.epochs_run = j.at("epochs_run").get<std::int64_t>();
      t.loss_history = j.at("loss_history").get<std::vector<double>>();
      if (static_cast<std::size_t>(t.weights.size()) != features.size() ||
          t.normalizer.dim() != features.size()) {
        throw DataError("model: logreg weight count does not match features");
      }
      m.model = std::move(t);
    } else if (kind == "dummy") {
      baselines::DummyModel t;
      t.feature_names = features;
      t.majority_class = j.at("majority_class").get<int>();
      t.positive_rate = j.at("positive_rate").get<double>();
      m.model = std::move(t);
    } else if (kind == "svm") {
      baselines::SvmModel t;
      t.feature_names = features;
      t.feature_map = baselines::parse_feature_map(j.at("feature_map").get<std::string>());
      t.weights = detail::vector_from(j.at("weights"));
      t.bias = j.at("bias").get<double>();
      t.normalizer = detail::normalizer_from(j.at("normalizer"));
      t.expanded_normalizer = detail::normalizer_from(j.at("expanded_normalizer"));
      const auto& c = j.at("train_config");
      t.config.c = c.at("c").get<double>();
      t.config.learning_rate = c.at("learning_rate").get<double>();
      t.config.max_epochs = c.at("max_epochs").get<std::int64_t>();
      t.config.tol = detail::tol_from(c.at("tol"));
      t.config.n_iter_no_change = c.at("n_iter_no_change").get<std::int64_t>();
      t.config.seed = c.at("seed").get<std::uint64_t>();
      t.config.feature_map = t.feature_map;
      t.epochs_run = j.at("epochs_run").get<std::int64_t>();
      t.loss_history = j.at("loss_history").get<std::vector<double>>();
      m.model = std::move(t);
    } else if (kind == "oracle") {
      m.model = OracleModel{data::LabelRule{j.at("threshold_db").get<double>()}};
    } else {
      throw DataError("model: unknown kind '" + kind + "'");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model: malformed document: ") + e.what());
  }
}

inline std::string dump(const AnyModel& m) { return to_json(m).dump(1) + "\n"; }

inline void save(const AnyModel& m, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << dump(m);
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

inline AnyModel load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("model '" + path.string() + "': " + e.what());
  }
  return from_json(j);
}

}  // namespace relaylearn::model
