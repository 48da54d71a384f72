// SPDX-License-Identifier: Apache-2.0
//
// Feed-forward binary classifier trained from scratch: Glorot-uniform
// initialization, batched forward pass, analytic backpropagation of the mean
// binary cross-entropy, Adam updates and loss-plateau early stopping.
//
// Activations are stored unit-major: a layer with `fan_out` units applied to
// a batch of B samples produces a (fan_out x B) matrix.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relaylearn/dataset.hpp"
#include "relaylearn/errors.hpp"
#include "relaylearn/rng.hpp"

namespace relaylearn::mlp {

enum class Activation { relu, sigmoid, step };

inline std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::step: return "step";
  }
  return "?";
}

inline Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "step") return Activation::step;
  throw DataError("unknown activation '" + std::string(name) + "'");
}

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Heaviside with the closed side at zero. Not differentiable, so it is only
// accepted at inference time.
inline double step_activation(double x) { return x < 0.0 ? 0.0 : 1.0; }

inline double apply_activation(Activation a, double z) {
  switch (a) {
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::sigmoid: return sigmoid(z);
    case Activation::step: return step_activation(z);
  }
  return z;
}

inline constexpr double kProbabilityClamp = 1e-12;

// Binary cross-entropy with p clamped to [1e-12, 1 - 1e-12].
inline double bce_loss(double p, double y) {
  const double q = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return -(y * std::log(q) + (1.0 - y) * std::log(1.0 - q));
}

// ---------------------------------------------------------------------------
// Architecture

struct Architecture {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_sizes;
  std::size_t output_dim = 1;

  void validate() const {
    if (input_dim < 1) throw ConfigError("architecture: input_dim must be >= 1");
    if (output_dim != 1) throw ConfigError("architecture: output_dim must be 1");
    for (auto h : hidden_sizes) {
      if (h < 1) throw ConfigError("architecture: hidden layer sizes must be >= 1");
    }
  }

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

struct Preset {
  std::string_view name;
  std::vector<std::size_t> hidden_sizes;
  double learning_rate;
};

// Model 1 trains at a much smaller step size than the deeper models.
inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> table{
      {"m1", {10}, 1e-5},
      {"m2", {50, 10}, 0.05},
      {"m3", {10, 50, 10}, 0.05},
      {"m4", {10, 50, 50, 10}, 0.05},
      {"m5", {10, 50, 100, 50, 10}, 0.05},
      {"m6", {10, 50, 100, 100, 50, 10}, 0.05},
  };
  return table;
}

inline std::optional<Preset> find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Layers

struct Layer {
  Eigen::MatrixXd weights;  // fan_out x fan_in
  Eigen::VectorXd biases;   // fan_out
  Activation activation = Activation::relu;

  Eigen::Index fan_in() const { return weights.cols(); }
  Eigen::Index fan_out() const { return weights.rows(); }

  friend bool operator==(const Layer& a, const Layer& b) {
    return a.activation == b.activation && a.weights.rows() == b.weights.rows() &&
           a.weights.cols() == b.weights.cols() && a.biases.size() == b.biases.size() &&
           a.weights == b.weights && a.biases == b.biases;
  }
};

using Network = std::vector<Layer>;

// Glorot-uniform weights, zero biases; relu hidden layers, sigmoid output.
inline Network init(const Architecture& arch, std::uint64_t seed) {
  arch.validate();
  rng::Rng gen(rng::derive_seed(seed, "init"));
  std::vector<std::size_t> sizes{arch.input_dim};
  sizes.insert(sizes.end(), arch.hidden_sizes.begin(), arch.hidden_sizes.end());
  sizes.push_back(arch.output_dim);

  Network net;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(sizes[l]);
    const auto fan_out = static_cast<Eigen::Index>(sizes[l + 1]);
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Layer layer;
    layer.weights.resize(fan_out, fan_in);
    for (Eigen::Index r = 0; r < fan_out; ++r) {
      for (Eigen::Index c = 0; c < fan_in; ++c) layer.weights(r, c) = gen.uniform(-bound, bound);
    }
    layer.biases = Eigen::VectorXd::Zero(fan_out);
    layer.activation = l + 2 == sizes.size() ? Activation::sigmoid : Activation::relu;
    net.push_back(std::move(layer));
  }
  return net;
}

inline void check_network(const Network& net) {
  if (net.empty()) throw DataError("network has no layers");
  for (std::size_t l = 0; l < net.size(); ++l) {
    const auto& layer = net[l];
    if (layer.biases.size() != layer.fan_out()) {
      throw DataError("layer " + std::to_string(l) + ": bias length does not match fan_out");
    }
    if (l > 0 && layer.fan_in() != net[l - 1].fan_out()) {
      throw DataError("layer " + std::to_string(l) + ": fan_in does not match previous layer");
    }
  }
  if (net.back().fan_out() != 1) throw DataError("output layer must have one unit");
}

inline Eigen::MatrixXd activate(Activation a, const Eigen::MatrixXd& z) {
  switch (a) {
    case Activation::relu: return z.cwiseMax(0.0);
    case Activation::sigmoid: return z.unaryExpr([](double v) { return sigmoid(v); });
    case Activation::step: return z.unaryExpr([](double v) { return step_activation(v); });
  }
  return z;
}

// Forward pass over a batch whose rows are (already normalized) samples.
// Returns the output activation per sample: P(class 1) for a sigmoid head.
inline Eigen::VectorXd forward_batch(const Network& net, const data::FeatureMatrix& x) {
  if (x.cols() != net.front().fan_in()) {
    throw DataError("forward: expected " + std::to_string(net.front().fan_in()) +
                    " features, got " + std::to_string(x.cols()));
  }
  Eigen::MatrixXd a = x.transpose();
  for (const auto& layer : net) {
    Eigen::MatrixXd z = layer.weights * a;
    z.colwise() += layer.biases;
    a = activate(layer.activation, z);
  }
  return a.row(0).transpose();
}

inline double forward(const Network& net, std::span<const double> x) {
  data::FeatureMatrix row(1, static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) row(0, static_cast<Eigen::Index>(j)) = x[j];
  return forward_batch(net, row)(0);
}

// ---------------------------------------------------------------------------
// Backpropagation

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

struct LossAndGradients {
  double loss = 0.0;  // mean BCE over the batch
  Gradients grad;
};

// Exact gradients of the mean batch BCE for a sigmoid output layer. With
// p = sigmoid(z_out) the output delta is (p - y) / B; hidden deltas follow
// the chain rule through relu (1 where z > 0) or sigmoid (a * (1 - a)).
inline LossAndGradients backward(const Network& net, const data::FeatureMatrix& x,
                                 const Eigen::VectorXd& y) {
  if (x.rows() == 0) throw DataError("backward: empty batch");
  if (x.rows() != y.size()) throw DataError("backward: batch and label counts differ");
  if (x.cols() != net.front().fan_in()) throw DataError("backward: feature dimension mismatch");
  if (net.back().activation != Activation::sigmoid) {
    throw ConfigError("backward: the output layer must be sigmoid");
  }
  for (const auto& layer : net) {
    if (layer.activation == Activation::step) {
      throw ConfigError("backward: step activation is inference-only");
    }
  }

  const auto batch = static_cast<double>(x.rows());
  std::vector<Eigen::MatrixXd> acts;  // acts[0] is the input, acts[l+1] the output of layer l
  acts.reserve(net.size() + 1);
  acts.push_back(x.transpose());
  for (const auto& layer : net) {
    Eigen::MatrixXd z = layer.weights * acts.back();
    z.colwise() += layer.biases;
    acts.push_back(activate(layer.activation, z));
  }

  LossAndGradients out;
  const Eigen::RowVectorXd p = acts.back().row(0);
  for (Eigen::Index i = 0; i < p.size(); ++i) out.loss += bce_loss(p(i), y(i));
  out.loss /= batch;

  out.grad.weights.resize(net.size());
  out.grad.biases.resize(net.size());
  Eigen::MatrixXd delta = (p - y.transpose()) / batch;
  for (std::size_t l = net.size(); l-- > 0;) {
    out.grad.weights[l] = delta * acts[l].transpose();
    out.grad.biases[l] = delta.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd upstream = net[l].weights.transpose() * delta;
    const auto& a = acts[l];
    if (net[l - 1].activation == Activation::relu) {
      delta = upstream.cwiseProduct((a.array() > 0.0).cast<double>().matrix());
    } else {
      delta = upstream.cwiseProduct((a.array() * (1.0 - a.array())).matrix());
    }
  }
  return out;
}

// Mean BCE of the network on a batch, no gradients.
inline double mean_loss(const Network& net, const data::FeatureMatrix& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd p = forward_batch(net, x);
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) total += bce_loss(p(i), y(i));
  return total / static_cast<double>(p.size());
}

// ---------------------------------------------------------------------------
// Adam

struct AdamConfig {
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One Adam update of a parameter block at step t >= 1:
//   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
//   theta <- theta - lr * m_hat / (sqrt(v_hat) + eps)
// with m_hat = m / (1 - b1^t), v_hat = v / (1 - b2^t).
template <typename Param, typename Moment, typename Grad>
void adam_update(Param& theta, Moment& m, Moment& v, const Grad& g, std::int64_t t,
                 const AdamConfig& cfg) {
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
  theta.array() -=
      cfg.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.epsilon);
}

struct AdamState {
  std::vector<Eigen::MatrixXd> m_weights, v_weights;
  std::vector<Eigen::VectorXd> m_biases, v_biases;
  std::int64_t step = 0;

  static AdamState zeros_like(const Network& net) {
    AdamState s;
    for (const auto& layer : net) {
      s.m_weights.push_back(Eigen::MatrixXd::Zero(layer.fan_out(), layer.fan_in()));
      s.v_weights.push_back(Eigen::MatrixXd::Zero(layer.fan_out(), layer.fan_in()));
      s.m_biases.push_back(Eigen::VectorXd::Zero(layer.fan_out()));
      s.v_biases.push_back(Eigen::VectorXd::Zero(layer.fan_out()));
    }
    return s;
  }
};

// Advances the step counter and updates every layer.
inline void adam_step(Network& net, AdamState& state, const Gradients& grad,
                      const AdamConfig& cfg) {
  const std::int64_t t = ++state.step;
  for (std::size_t l = 0; l < net.size(); ++l) {
    adam_update(net[l].weights, state.m_weights[l], state.v_weights[l], grad.weights[l], t, cfg);
    adam_update(net[l].biases, state.m_biases[l], state.v_biases[l], grad.biases[l], t, cfg);
  }
}

// ---------------------------------------------------------------------------
// Training

struct TrainConfig {
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t max_epochs = 300;
  std::int64_t batch_size = 32;
  double tol = 1e-4;
  std::int64_t n_iter_no_change = 10;
  std::uint64_t seed = 0;

  AdamConfig adam() const { return {learning_rate, beta1, beta2, epsilon}; }

  void validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
      throw ConfigError("adam betas must lie in [0, 1)");
    }
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
    if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(tol >= 0.0)) throw ConfigError("tol must be >= 0");
    if (n_iter_no_change < 1) throw ConfigError("n_iter_no_change must be >= 1");
  }

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Plateau detector on a per-epoch loss. An epoch improves when its loss is
// below best - tol; after `patience` consecutive non-improving epochs the
// predicate fires. The first epoch always sets the baseline, so with
// tol = inf training stops after exactly patience + 1 epochs.
class EarlyStopping {
 public:
  EarlyStopping(double tol, std::int64_t patience) : tol_(tol), patience_(patience) {}

  // Returns true when training should stop after this epoch.
  bool update(double loss) {
    if (!seen_) {
      seen_ = true;
      best_ = loss;
      return false;
    }
    if (loss < best_ - tol_) {
      stall_ = 0;
    } else {
      ++stall_;
    }
    best_ = std::min(best_, loss);
    return stall_ >= patience_;
  }

  double best() const { return best_; }
  std::int64_t stall() const { return stall_; }

 private:
  double tol_;
  std::int64_t patience_;
  double best_ = std::numeric_limits<double>::infinity();
  std::int64_t stall_ = 0;
  bool seen_ = false;
};

struct TrainResult {
  Network network;                              // snapshot at best_epoch
  std::vector<double> loss_history;             // mean training loss per epoch
  std::vector<double> validation_loss_history;  // empty without a validation set
  std::int64_t epochs_run = 0;
  std::int64_t best_epoch = 0;                  // 1-based epoch with the lowest monitored loss
};

struct Validation {
  data::FeatureMatrix x;  // normalized
  Eigen::VectorXd y;
};

// Mini-batch Adam on normalized features. Batch order is reshuffled every
// epoch from one stream derived from cfg.seed. Stops on the validation loss
// when a validation set is given, on the training loss otherwise, and
// returns the parameters from the end of the epoch with the lowest
// monitored loss (first such epoch on ties).
inline TrainResult train_network(const Architecture& arch, const TrainConfig& cfg,
                                 const data::FeatureMatrix& x, const Eigen::VectorXd& y,
                                 const std::optional<Validation>& validation = std::nullopt) {
  cfg.validate();
  arch.validate();
  if (x.rows() == 0) throw DataError("train: empty dataset");
  if (x.rows() != y.size()) throw DataError("train: feature and label counts differ");
  if (static_cast<std::size_t>(x.cols()) != arch.input_dim) {
    throw DataError("train: architecture expects " + std::to_string(arch.input_dim) +
                    " inputs, data has " + std::to_string(x.cols()));
  }

  TrainResult out;
  out.network = init(arch, cfg.seed);
  auto state = AdamState::zeros_like(out.network);
  const auto adam = cfg.adam();
  rng::Rng shuffler(rng::derive_seed(cfg.seed, "batches"));
  EarlyStopping stopper(cfg.tol, cfg.n_iter_no_change);
  Network best = out.network;
  double best_loss = std::numeric_limits<double>::infinity();

  const auto n = static_cast<std::size_t>(x.rows());
  const auto batch = static_cast<std::size_t>(cfg.batch_size);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  for (std::int64_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    rng::shuffle(shuffler, std::span<Eigen::Index>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      const std::vector<Eigen::Index> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                          order.begin() + static_cast<std::ptrdiff_t>(stop));
      const data::FeatureMatrix xb = x(idx, Eigen::all);
      const Eigen::VectorXd yb = y(idx);
      const auto lg = backward(out.network, xb, yb);
      epoch_loss += lg.loss * static_cast<double>(stop - start);
      adam_step(out.network, state, lg.grad, adam);
    }
    epoch_loss /= static_cast<double>(n);
    out.loss_history.push_back(epoch_loss);
    ++out.epochs_run;

    double monitored = epoch_loss;
    if (validation) {
      monitored = mean_loss(out.network, validation->x, validation->y);
      out.validation_loss_history.push_back(monitored);
    }
    if (!std::isfinite(monitored)) throw DataError("train: loss diverged to a non-finite value");
    if (monitored < best_loss) {
      best_loss = monitored;
      best = out.network;
      out.best_epoch = out.epochs_run;
    }
    if (stopper.update(monitored)) break;
  }
  out.network = std::move(best);
  return out;
}

// ---------------------------------------------------------------------------
// Trained model over link datasets

struct TrainedMLP {
  Architecture architecture;
  Network layers;
  data::Normalizer normalizer;
  std::vector<std::string> feature_names;
  TrainConfig config;
  std::vector<double> loss_history;
  std::vector<double> validation_loss_history;
  std::int64_t epochs_run = 0;
  std::int64_t best_epoch = 0;

  Eigen::VectorXd predict_proba(const data::FeatureMatrix& raw) const {
    return forward_batch(layers, normalizer.apply(raw));
  }

  Eigen::VectorXd predict_proba(const std::vector<LinkSample>& samples) const {
    return predict_proba(data::feature_matrix(samples, feature_names));
  }

  Eigen::VectorXd predict_proba(const data::Dataset& ds) const {
    return predict_proba(ds.samples);
  }
};

// Class 1 iff probability >= cutoff. At cutoff 0.5 this is the argmax over the
// two class posteriors {1 - p, p}, with the tie going to class 1.
inline std::vector<int> classify(const Eigen::VectorXd& probabilities, double cutoff = 0.5) {
  std::vector<int> out(static_cast<std::size_t>(probabilities.size()));
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    out[static_cast<std::size_t>(i)] = probabilities(i) >= cutoff ? 1 : 0;
  }
  return out;
}

inline std::vector<int> predict(const TrainedMLP& model, const data::Dataset& ds,
                                double cutoff = 0.5) {
  return classify(model.predict_proba(ds), cutoff);
}

inline bool has_both_classes(const std::vector<int>& y) {
  const auto ones = std::count(y.begin(), y.end(), 1);
  return ones > 0 && ones < static_cast<std::ptrdiff_t>(y.size());
}

inline TrainedMLP train(std::vector<std::size_t> hidden_sizes, const TrainConfig& cfg,
                        const data::Dataset& train_ds,
                        const std::optional<data::Dataset>& validation_ds = std::nullopt) {
  if (train_ds.empty()) throw DataError("train: empty dataset");
  if (train_ds.feature_names.empty()) throw DataError("train: no feature columns selected");
  const auto y_int = data::labels(train_ds);
  if (!has_both_classes(y_int)) {
    std::cerr << "warning: training labels contain a single class\n";
  }

  TrainedMLP model;
  model.feature_names = train_ds.feature_names;
  model.config = cfg;
  model.architecture = {train_ds.feature_names.size(), std::move(hidden_sizes), 1};

  const auto raw = data::feature_matrix(train_ds);
  model.normalizer = data::fit_normalizer(raw);
  const auto x = model.normalizer.apply(raw);

  std::optional<Validation> val;
  if (validation_ds && !validation_ds->empty()) {
    val = Validation{
        model.normalizer.apply(data::feature_matrix(validation_ds->samples, model.feature_names)),
        data::label_vector(data::labels(*validation_ds))};
  }
  auto result = train_network(model.architecture, cfg, x, data::label_vector(y_int), val);
  model.layers = std::move(result.network);
  model.loss_history = std::move(result.loss_history);
  model.validation_loss_history = std::move(result.validation_loss_history);
  model.epochs_run = result.epochs_run;
  model.best_epoch = result.best_epoch;
  return model;
}

}  // namespace relaylearn::mlp
