// SPDX-License-Identifier: Apache-2.0
//
// Comparison classifiers: logistic regression, a most-frequent dummy and a
// primal linear SVM (optionally on an explicit degree-4 polynomial expansion).
// All of them standardize their inputs with training statistics and expose
// the same scores()/classes() surface as the MLP.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relaylearn/dataset.hpp"
#include "relaylearn/errors.hpp"
#include "relaylearn/mlp.hpp"

namespace relaylearn::baselines {

inline std::vector<double> to_std(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

// ---------------------------------------------------------------------------
// Logistic regression

struct LogRegConfig {
  double learning_rate = 0.5;
  std::int64_t max_epochs = 5000;
  double tol = 1e-9;
  std::uint64_t seed = 0;

  friend bool operator==(const LogRegConfig&, const LogRegConfig&) = default;
};

struct LinearLossGrad {
  double loss = 0.0;
  Eigen::VectorXd grad_w;
  double grad_b = 0.0;
};

// Mean BCE of sigmoid(x w + b) and its exact gradient.
inline LinearLossGrad logreg_loss_grad(const Eigen::VectorXd& w, double b,
                                       const data::FeatureMatrix& x, const Eigen::VectorXd& y) {
  const auto n = static_cast<double>(x.rows());
  Eigen::VectorXd z = x * w;
  z.array() += b;
  LinearLossGrad out;
  Eigen::VectorXd residual(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double p = mlp::sigmoid(z(i));
    out.loss += mlp::bce_loss(p, y(i));
    residual(i) = p - y(i);
  }
  out.loss /= n;
  out.grad_w = x.transpose() * residual / n;
  out.grad_b = residual.sum() / n;
  return out;
}

struct LinearFit {
  Eigen::VectorXd w;
  double b = 0.0;
  std::vector<double> loss_history;
  std::int64_t epochs_run = 0;
};

// Full-batch gradient descent from w = 0, b = 0. Stops once an epoch improves
// the loss by less than tol.
inline LinearFit fit_logreg(const data::FeatureMatrix& x, const Eigen::VectorXd& y,
                            const LogRegConfig& cfg) {
  if (x.rows() == 0) throw DataError("logreg: empty dataset");
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("logreg: learning_rate must be > 0");
  LinearFit fit;
  fit.w = Eigen::VectorXd::Zero(x.cols());
  double previous = std::numeric_limits<double>::infinity();
  for (std::int64_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const auto lg = logreg_loss_grad(fit.w, fit.b, x, y);
    fit.loss_history.push_back(lg.loss);
    ++fit.epochs_run;
    if (previous - lg.loss < cfg.tol && epoch > 0) break;
    previous = lg.loss;
    fit.w -= cfg.learning_rate * lg.grad_w;
    fit.b -= cfg.learning_rate * lg.grad_b;
  }
  return fit;
}

struct LogRegModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  data::Normalizer normalizer;
  std::vector<std::string> feature_names;
  LogRegConfig config;
  std::vector<double> loss_history;
  std::int64_t epochs_run = 0;

  std::vector<double> scores(const data::FeatureMatrix& raw) const {
    Eigen::VectorXd z = normalizer.apply(raw) * weights;
    z.array() += bias;
    return to_std(z.unaryExpr([](double v) { return mlp::sigmoid(v); }));
  }
  std::vector<double> scores(const std::vector<LinkSample>& samples) const {
    return scores(data::feature_matrix(samples, feature_names));
  }
  std::vector<int> classes(const std::vector<LinkSample>& samples) const {
    const auto s = scores(samples);
    std::vector<int> out;
    for (double p : s) out.push_back(p >= 0.5 ? 1 : 0);
    return out;
  }
};

inline LogRegModel logreg_train(const data::Dataset& train_ds, const LogRegConfig& cfg = {}) {
  if (train_ds.empty()) throw DataError("logreg: empty dataset");
  LogRegModel m;
  m.feature_names = train_ds.feature_names;
  m.config = cfg;
  const auto raw = data::feature_matrix(train_ds);
  m.normalizer = data::fit_normalizer(raw);
  auto fit = fit_logreg(m.normalizer.apply(raw), data::label_vector(data::labels(train_ds)), cfg);
  m.weights = std::move(fit.w);
  m.bias = fit.b;
  m.loss_history = std::move(fit.loss_history);
  m.epochs_run = fit.epochs_run;
  return m;
}

// ---------------------------------------------------------------------------
// Dummy (most frequent class)

// Always predicts the majority training class, ties to class 1. Its score is
// the training frequency of class 1, so the usual p >= 0.5 cutoff reproduces
// the majority rule including the tie.
struct DummyModel {
  int majority_class = 1;
  double positive_rate = 0.5;
  std::vector<std::string> feature_names;

  double majority_frequency() const {
    return majority_class == 1 ? positive_rate : 1.0 - positive_rate;
  }

  std::vector<double> scores(const std::vector<LinkSample>& samples) const {
    return std::vector<double>(samples.size(), positive_rate);
  }
  std::vector<int> classes(const std::vector<LinkSample>& samples) const {
    return std::vector<int>(samples.size(), majority_class);
  }
};

inline DummyModel dummy_train(const data::Dataset& train_ds) {
  if (train_ds.empty()) throw DataError("dummy: empty dataset");
  const auto y = data::labels(train_ds);
  const auto ones = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  DummyModel m;
  m.feature_names = train_ds.feature_names;
  m.positive_rate = static_cast<double>(ones) / static_cast<double>(y.size());
  m.majority_class = 2 * ones >= y.size() ? 1 : 0;
  return m;
}

// ---------------------------------------------------------------------------
// Linear SVM

enum class FeatureMap { identity, poly4 };

inline std::string_view feature_map_name(FeatureMap f) {
  return f == FeatureMap::poly4 ? "poly4" : "identity";
}

inline FeatureMap parse_feature_map(std::string_view name) {
  if (name == "identity") return FeatureMap::identity;
  if (name == "poly4") return FeatureMap::poly4;
  throw ConfigError("unknown SVM feature map '" + std::string(name) + "'");
}

// Every monomial of total degree 1..4, grouped by degree, each degree in
// lexicographic order of non-decreasing index tuples.
inline data::FeatureMatrix poly4_expand(const data::FeatureMatrix& x) {
  const auto d = static_cast<std::size_t>(x.cols());
  std::vector<std::vector<Eigen::Index>> terms;
  std::vector<Eigen::Index> current;
  auto recurse = [&](auto&& self, std::size_t start, std::size_t remaining) -> void {
    if (remaining == 0) {
      terms.push_back(current);
      return;
    }
    for (std::size_t j = start; j < d; ++j) {
      current.push_back(static_cast<Eigen::Index>(j));
      self(self, j, remaining - 1);
      current.pop_back();
    }
  };
  for (std::size_t degree = 1; degree <= 4; ++degree) recurse(recurse, 0, degree);

  data::FeatureMatrix out(x.rows(), static_cast<Eigen::Index>(terms.size()));
  for (std::size_t t = 0; t < terms.size(); ++t) {
    Eigen::VectorXd col = Eigen::VectorXd::Ones(x.rows());
    for (auto j : terms[t]) col.array() *= x.col(j).array();
    out.col(static_cast<Eigen::Index>(t)) = col;
  }
  return out;
}

struct SvmConfig {
  double c = 1.0;
  double learning_rate = 1.0;
  std::int64_t max_epochs = 3000;
  double tol = 1e-6;
  std::int64_t n_iter_no_change = 20;
  std::uint64_t seed = 0;
  FeatureMap feature_map = FeatureMap::identity;

  friend bool operator==(const SvmConfig&, const SvmConfig&) = default;
};

inline double hinge(double y_pm, double score) { return std::max(0.0, 1.0 - y_pm * score); }

// Soft-margin objective 1/2 |w|^2 + C * sum_i max(0, 1 - y_i (x_i w + b)),
// y in {-1, +1}, divided by n C so gradients do not scale with n:
//   J(w, b) = |w|^2 / (2 n C) + mean_i hinge_i.
// The subgradient takes 0 for the hinge term at margin exactly 1; the bias is
// not regularized.
inline LinearLossGrad svm_objective_grad(const Eigen::VectorXd& w, double b,
                                         const data::FeatureMatrix& x,
                                         const Eigen::VectorXd& y_pm, double c) {
  const auto n = static_cast<double>(x.rows());
  const double lambda = 1.0 / (n * c);
  Eigen::VectorXd score = x * w;
  score.array() += b;
  LinearLossGrad out;
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(score.size());
  double hinge_sum = 0.0;
  for (Eigen::Index i = 0; i < score.size(); ++i) {
    const double h = hinge(y_pm(i), score(i));
    hinge_sum += h;
    if (h > 0.0) coef(i) = -y_pm(i);
  }
  out.loss = 0.5 * lambda * w.squaredNorm() + hinge_sum / n;
  out.grad_w = lambda * w + (x.transpose() * coef) / n;
  out.grad_b = coef.sum() / n;
  return out;
}

// Full-batch subgradient descent with step learning_rate / sqrt(t). Returns
// the best iterate seen, since subgradient steps do not decrease J
// monotonically.
inline LinearFit fit_svm(const data::FeatureMatrix& x, const Eigen::VectorXd& y01,
                         const SvmConfig& cfg) {
  if (x.rows() == 0) throw DataError("svm: empty dataset");
  if (!(cfg.learning_rate > 0.0) || !(cfg.c > 0.0)) {
    throw ConfigError("svm: learning_rate and C must be > 0");
  }
  const Eigen::VectorXd y_pm = (2.0 * y01.array() - 1.0).matrix();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols());
  double b = 0.0;
  LinearFit best;
  best.w = w;
  double best_objective = std::numeric_limits<double>::infinity();
  mlp::EarlyStopping stopper(cfg.tol, cfg.n_iter_no_change);
  std::int64_t epochs = 0;
  for (std::int64_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto lg = svm_objective_grad(w, b, x, y_pm, cfg.c);
    ++epochs;
    if (lg.loss < best_objective) {
      best_objective = lg.loss;
      best.w = w;
      best.b = b;
    }
    best.loss_history.push_back(lg.loss);
    if (stopper.update(lg.loss)) break;
    const double eta = cfg.learning_rate / std::sqrt(static_cast<double>(epoch));
    w -= eta * lg.grad_w;
    b -= eta * lg.grad_b;
  }
  best.epochs_run = epochs;
  return best;
}

struct SvmModel {
  FeatureMap feature_map = FeatureMap::identity;
  Eigen::VectorXd weights;
  double bias = 0.0;
  data::Normalizer normalizer;
  data::Normalizer expanded_normalizer;  // poly4 only
  std::vector<std::string> feature_names;
  SvmConfig config;
  std::vector<double> loss_history;
  std::int64_t epochs_run = 0;

  data::FeatureMatrix mapped(const data::FeatureMatrix& raw) const {
    auto z = normalizer.apply(raw);
    if (feature_map == FeatureMap::poly4) z = expanded_normalizer.apply(poly4_expand(z));
    return z;
  }

  // Signed margin x w + b.
  std::vector<double> scores(const data::FeatureMatrix& raw) const {
    Eigen::VectorXd s = mapped(raw) * weights;
    s.array() += bias;
    return to_std(s);
  }
  std::vector<double> scores(const std::vector<LinkSample>& samples) const {
    return scores(data::feature_matrix(samples, feature_names));
  }
  std::vector<int> classes(const std::vector<LinkSample>& samples) const {
    std::vector<int> out;
    for (double s : scores(samples)) out.push_back(s >= 0.0 ? 1 : 0);
    return out;
  }
};

inline SvmModel svm_train(const data::Dataset& train_ds, const SvmConfig& cfg = {}) {
  if (train_ds.empty()) throw DataError("svm: empty dataset");
  SvmModel m;
  m.feature_map = cfg.feature_map;
  m.feature_names = train_ds.feature_names;
  m.config = cfg;
  const auto raw = data::feature_matrix(train_ds);
  m.normalizer = data::fit_normalizer(raw);
  data::FeatureMatrix z = m.normalizer.apply(raw);
  if (cfg.feature_map == FeatureMap::poly4) {
    auto expanded = poly4_expand(z);
    m.expanded_normalizer = data::fit_normalizer(expanded);
    z = m.expanded_normalizer.apply(expanded);
  }
  auto fit = fit_svm(z, data::label_vector(data::labels(train_ds)), cfg);
  m.weights = std::move(fit.w);
  m.bias = fit.b;
  m.loss_history = std::move(fit.loss_history);
  m.epochs_run = fit.epochs_run;
  return m;
}

}  // namespace relaylearn::baselines
