// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gradient_oracle.hpp"
#include "relaylearn/relaylearn.hpp"

namespace fs = std::filesystem;
using namespace relaylearn;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void verdict(int id, const std::string& title, const Outcome& o) {
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << title << "  ("
            << o.detail << ")" << std::endl;
}

template <typename Fn>
void criterion(int id, const std::string& title, Fn&& fn) {
  try {
    verdict(id, title, fn());
  } catch (const std::exception& e) {
    verdict(id, title, {false, std::string("exception: ") + e.what()});
  }
}

std::string fmt(double v, int digits = 6) { return text::number(v, digits); }

// ---------------------------------------------------------------------------

Outcome gradient_fidelity() {
  const auto start = Clock::now();
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    rng::Rng gen(rng::derive_seed(seed, "acceptance-shape"));
    mlp::Architecture arch;
    arch.input_dim = 1 + gen.below(10);
    const auto depth = 1 + gen.below(3);
    for (std::uint64_t d = 0; d < depth; ++d) arch.hidden_sizes.push_back(1 + gen.below(20));
    auto net = mlp::init(arch, seed);
    for (std::size_t l = 0; l + 1 < net.size(); ++l) {
      if (gen.below(2) == 1) net[l].activation = mlp::Activation::sigmoid;
    }
    // Non-zero biases so sigmoid and relu units see shifted inputs.
    for (auto& layer : net) {
      for (Eigen::Index r = 0; r < layer.biases.size(); ++r) layer.biases(r) = gen.uniform(-0.5, 0.5);
    }
    const auto batch = test::kink_free_batch(net, arch.input_dim, 1 + gen.below(8), seed + 1);
    const auto lg = mlp::backward(net, batch.x, batch.y);
    worst = std::max(worst, test::max_relative_gradient_error(net, batch, lg.grad, 1e-5));
  }
  const double t = seconds_since(start);
  return {worst < 1e-4 && t < 30.0,
          "max relative error " + fmt(worst, 3) + ", " + fmt(t, 3) + " s"};
}

Outcome adam_unit_step() {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(1), v = Eigen::VectorXd::Zero(1);
  mlp::AdamConfig cfg;
  cfg.learning_rate = 0.1;
  mlp::adam_update(theta, m, v, Eigen::VectorXd::Ones(1), 1, cfg);
  // m_hat = v_hat = 1, so theta = -0.1 / (1 + eps).
  const double by_hand = -0.1 / (1.0 + 1e-8);
  const bool ok = std::abs(theta(0) - (-0.0999999999)) <= 1e-9 &&
                  std::abs(theta(0) - by_hand) <= 1e-15;
  return {ok, "theta " + fmt(theta(0), 12)};
}

Outcome metric_oracle() {
  rng::Rng gen(rng::derive_seed(2024, "acceptance-metrics"));
  int exact_mismatch = 0;
  double worst_auc = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(2 + gen.below(199));
    std::vector<int> labels(n), preds(n);
    std::vector<double> scores(n);
    const auto levels = 1 + gen.below(12);  // few levels force tied scores
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(gen.below(2));
      preds[i] = static_cast<int>(gen.below(2));
      scores[i] = trial % 2 == 0 ? static_cast<double>(gen.below(levels)) / static_cast<double>(levels)
                                 : gen.uniform01();
    }
    labels[0] = 1;
    labels[1] = 0;

    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      tp += preds[i] == 1 && labels[i] == 1;
      fp += preds[i] == 1 && labels[i] == 0;
      tn += preds[i] == 0 && labels[i] == 0;
      fn += preds[i] == 0 && labels[i] == 1;
    }
    auto div = [](std::int64_t a, std::int64_t b) {
      return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
    };
    const double p = div(tp, tp + fp);
    const double r = div(tp, tp + fn);
    const double f = p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    const double acc = div(tp + tn, static_cast<std::int64_t>(n));

    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (labels[i] != 1 || labels[j] != 0) continue;
        pairs += 1;
        wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
      }
    }

    const auto rep = metrics::report("x", scores, preds, labels);
    if (rep.precision != p || rep.recall != r || rep.f1 != f || rep.accuracy != acc) {
      ++exact_mismatch;
    }
    worst_auc = std::max(worst_auc, std::abs(rep.roc_auc - wins / pairs));
  }
  return {exact_mismatch == 0 && worst_auc <= 1e-9,
          std::to_string(exact_mismatch) + " count mismatches, max AUC gap " + fmt(worst_auc, 3)};
}

// Standard dataset: defaults, n = 10000, seed 42, 75/25 split.
struct Standard {
  data::Dataset train, test;
};

Standard standard_split() {
  channel::ScenarioConfig cfg;
  cfg.n_samples = 10000;
  cfg.seed = 42;
  const data::Dataset ds{channel::gen_dataset(cfg)};
  auto [train, test] = data::split(ds, 0.75, 42);
  return {std::move(train), std::move(test)};
}

mlp::TrainConfig preset_config(std::string_view name) {
  mlp::TrainConfig tc;
  tc.learning_rate = mlp::find_preset(name)->learning_rate;
  tc.seed = 42;
  return tc;
}

model::AnyModel train_preset(std::string_view name, const data::Dataset& train) {
  return {std::string(name),
          mlp::train(mlp::find_preset(name)->hidden_sizes, preset_config(name), train),
          std::nullopt};
}

metrics::EvalReport evaluate(const model::AnyModel& m, const data::Dataset& test) {
  return metrics::report(m.name, m.scores(test.samples), m.classes(test.samples),
                         data::labels(test));
}

Outcome table_ordering() {
  const auto start = Clock::now();
  const auto s = standard_split();
  const auto m5 = evaluate(train_preset("m5", s.train), s.test);
  const auto m1 = evaluate(train_preset("m1", s.train), s.test);
  const model::AnyModel dummy{"dummy", baselines::dummy_train(s.train), std::nullopt};
  const auto d = evaluate(dummy, s.test);

  const auto y = data::labels(s.test);
  const auto ones = std::count(y.begin(), y.end(), 1);
  const auto majority = std::max<std::int64_t>(ones, static_cast<std::int64_t>(y.size()) - ones);
  const double majority_fraction = static_cast<double>(majority) / static_cast<double>(y.size());
  const double t = seconds_since(start);

  const bool a = m5.accuracy >= 0.95 && m5.roc_auc >= 0.95;
  const bool b = m5.accuracy > m1.accuracy;
  const bool c = d.accuracy == majority_fraction;
  return {a && b && c && t < 120.0,
          "m5 accuracy " + fmt(m5.accuracy, 4) + " auc " + fmt(m5.roc_auc, 4) + "; m1 accuracy " +
              fmt(m1.accuracy, 4) + "; dummy " + fmt(d.accuracy, 6) + " vs majority " +
              fmt(majority_fraction, 6) + "; " + fmt(t, 3) + " s"};
}

Outcome label_boundary() {
  const bool ok = data::label(120.0) == 0 && data::label(119.999) == 1 &&
                  data::label(std::nextafter(120.0, 0.0)) == 1 &&
                  data::label(std::nextafter(120.0, 200.0)) == 0;
  return {ok, "label(120) = " + std::to_string(data::label(120.0)) + ", label(120-ulp) = " +
                  std::to_string(data::label(std::nextafter(120.0, 0.0)))};
}

// Strictly decreasing in true path loss, unbounded so it never saturates.
struct NegCubedLoss {
  std::vector<double> scores(const std::vector<LinkSample>& links) const {
    std::vector<double> out;
    for (const auto& l : links) out.push_back(-l.path_loss_db * l.path_loss_db * l.path_loss_db);
    return out;
  }
  std::vector<int> classes(const std::vector<LinkSample>& links) const {
    std::vector<int> out;
    for (const auto& l : links) out.push_back(data::label(l.path_loss_db));
    return out;
  }
};

Outcome relay_oracle() {
  const model::AnyModel oracle{"oracle", model::OracleModel{}, std::nullopt};
  const NegCubedLoss cubed;
  channel::ScenarioConfig cfg;
  rng::Rng gen(rng::derive_seed(7, "acceptance-relay"));
  std::size_t agree_sigmoid = 0, agree_cubed = 0;
  const std::size_t sets = 10000;
  for (std::size_t k = 0; k < sets; ++k) {
    relay::CandidateSet cs;
    cs.instance_id = static_cast<std::int64_t>(k);
    const auto size = 2 + gen.below(7);
    for (std::uint64_t i = 0; i < size; ++i) {
      cs.links.push_back(channel::gen_link(gen, cfg, static_cast<std::int64_t>(i)));
    }
    if (k % 10 == 0) cs.links.back().path_loss_db = cs.links.front().path_loss_db;  // a tie
    const auto truth = relay::select_oracle(cs);
    agree_sigmoid += relay::select_predicted(oracle, cs).chosen_index == truth;
    agree_cubed += relay::select_predicted(cubed, cs).chosen_index == truth;
  }
  return {agree_sigmoid == sets && agree_cubed == sets,
          std::to_string(agree_sigmoid) + " and " + std::to_string(agree_cubed) + " of " +
              std::to_string(sets) + " sets agree"};
}

// ---------------------------------------------------------------------------
// CLI determinism

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(RELAYLEARN_CLI) + " " + args + " >>" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / ("relaylearn_acceptance_" + std::to_string(::getpid()));
  const fs::path work = root / "work", first = root / "first";
  fs::create_directories(work);
  const fs::path log = root / "log.txt";
  auto w = [&](const char* name) { return (work / name).string(); };

  const std::vector<std::string> commands{
      "generate --n 10000 --seed 42 -o " + w("data.csv"),
      "generate --n 3000 --seed 9 -o " + w("traj.csv"),
      "train --model m5 --data " + w("data.csv") + " --seed 42 -o " + w("m5.json") +
          " --loss_csv " + w("m5_loss.csv"),
      "train --model logreg --data " + w("data.csv") + " --seed 42 -o " + w("logreg.json"),
      "train --model svm --data " + w("data.csv") + " --seed 42 -o " + w("svm.json"),
      "train --model dummy --data " + w("data.csv") + " --seed 42 -o " + w("dummy.json"),
      "eval --model " + w("m5.json") + " --data " + w("data.csv") + " --svg -o " + w("eval_m5"),
      "compare --models " + w("m5.json") + " " + w("logreg.json") + " " + w("svm.json") + " " +
          w("dummy.json") + " --data " + w("data.csv") + " -o " + w("table.csv") +
          " --roc_svg " + w("roc.svg"),
      "simulate --model oracle --data " + w("traj.csv") + " -o " + w("trace_oracle.csv") +
          " --summary " + w("summary_oracle.json"),
      "simulate --model " + w("m5.json") + " --data " + w("traj.csv") + " --hysteresis_db 1 -o " +
          w("trace_m5.csv") + " --summary " + w("summary_m5.json"),
  };

  auto run_all = [&]() -> std::string {
    for (const auto& c : commands) {
      if (const int code = run_cli(c, log); code != 0) {
        return "exit " + std::to_string(code) + " from: " + c.substr(0, c.find(' '));
      }
    }
    return "";
  };

  Outcome out;
  if (auto err = run_all(); !err.empty()) {
    out = {false, err};
  } else {
    fs::copy(work, first, fs::copy_options::recursive);
    if (auto err2 = run_all(); !err2.empty()) {
      out = {false, err2};
    } else {
      std::size_t files = 0;
      std::vector<std::string> differing;
      for (const auto& entry : fs::recursive_directory_iterator(first)) {
        if (!entry.is_regular_file()) continue;
        ++files;
        const auto rel = fs::relative(entry.path(), first);
        if (slurp(entry.path()) != slurp(work / rel)) differing.push_back(rel.string());
      }
      out.pass = differing.empty() && files >= 17;
      out.detail = std::to_string(files) + " output files compared, " +
                   std::to_string(differing.size()) + " differ";
      for (const auto& d : differing) out.detail += " " + d;
    }
  }
  fs::remove_all(root);
  return out;
}

// ---------------------------------------------------------------------------

Outcome early_stopping() {
  const auto s = standard_split();
  const auto x_raw = data::feature_matrix(s.train);
  const auto x = data::fit_normalizer(x_raw).apply(x_raw);
  const auto y = data::label_vector(data::labels(s.train));
  const mlp::Architecture arch{static_cast<std::size_t>(x.cols()), mlp::find_preset("m5")->hidden_sizes, 1};

  auto cfg = preset_config("m5");
  cfg.tol = std::numeric_limits<double>::infinity();
  const auto inf_run = mlp::train_network(arch, cfg, x, y);
  const bool inf_ok = inf_run.epochs_run == cfg.n_iter_no_change + 1;

  cfg.tol = 1e-4;
  const auto run = mlp::train_network(arch, cfg, x, y);
  const bool stopped = run.epochs_run < cfg.max_epochs;

  // Final plateau window: the last n_iter_no_change + 1 epochs.
  const auto& h = run.loss_history;
  const auto window = static_cast<std::size_t>(cfg.n_iter_no_change + 1);
  double worst_rise = -std::numeric_limits<double>::infinity();
  for (std::size_t i = h.size() - std::min(window, h.size()) + 1; i < h.size(); ++i) {
    worst_rise = std::max(worst_rise, h[i] - h[i - 1]);
  }
  const bool plateau = worst_rise <= cfg.tol;

  return {inf_ok && stopped && plateau,
          "tol=inf ran " + std::to_string(inf_run.epochs_run) + " epochs; tol=1e-4 ran " +
              std::to_string(run.epochs_run) + " of " + std::to_string(cfg.max_epochs) +
              "; largest epoch-to-epoch rise in final window " + fmt(worst_rise, 4)};
}

// Two classes separated by a gap of 2 around a hyperplane (margin 1).
data::Dataset margin_one(std::size_t n, std::uint64_t seed) {
  rng::Rng gen(seed);
  data::Dataset ds;
  ds.feature_names = {"aoa_spread_deg", "aod_spread_deg"};
  const double nx = 0.6, ny = 0.8;  // unit normal
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = static_cast<int>(i % 2);
    const double along = gen.uniform(-5, 5);
    const double offset = (cls == 1 ? 1.0 : -1.0) * gen.uniform(1.0, 4.0);
    LinkSample s;
    s.aoa_spread_deg = offset * nx - along * ny + 0.5;
    s.aod_spread_deg = offset * ny + along * nx - 0.25;
    s.label = cls;
    ds.samples.push_back(s);
  }
  return ds;
}

data::Dataset margin_one_1d(std::size_t n, std::uint64_t seed) {
  rng::Rng gen(seed);
  data::Dataset ds;
  ds.feature_names = {"aoa_spread_deg"};
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = static_cast<int>(i % 2);
    LinkSample s;
    s.aoa_spread_deg = (cls == 1 ? 1.0 : -1.0) * gen.uniform(1.0, 5.0);
    s.label = cls;
    ds.samples.push_back(s);
  }
  return ds;
}

double accuracy_of(const std::vector<int>& preds, const data::Dataset& ds) {
  return metrics::accuracy(metrics::confusion(preds, data::labels(ds)));
}

Outcome separable_sanity() {
  const auto start = Clock::now();
  double worst = 1.0;
  std::string detail;
  for (const auto& [train, test] :
       {std::pair{margin_one(200, 1), margin_one(200, 2)},
        std::pair{margin_one_1d(200, 3), margin_one_1d(200, 4)}}) {
    const auto lr = baselines::logreg_train(train);
    const auto svm = baselines::svm_train(train);
    for (double a : {accuracy_of(lr.classes(train.samples), train),
                     accuracy_of(lr.classes(test.samples), test),
                     accuracy_of(svm.classes(train.samples), train),
                     accuracy_of(svm.classes(test.samples), test)}) {
      worst = std::min(worst, a);
    }
  }
  const double t = seconds_since(start);
  return {worst == 1.0 && t < 5.0, "lowest accuracy " + fmt(worst, 6) + ", " + fmt(t, 3) + " s"};
}

}  // namespace

int main() {
  criterion(1, "gradient fidelity", gradient_fidelity);
  criterion(2, "Adam unit step", adam_unit_step);
  criterion(3, "metric oracle equivalence", metric_oracle);
  criterion(4, "model ordering on the standard dataset", table_ordering);
  criterion(5, "labeling boundary", label_boundary);
  criterion(6, "relay oracle equivalence", relay_oracle);
  criterion(7, "CLI determinism", cli_determinism);
  criterion(8, "early stopping", early_stopping);
  criterion(9, "separable sanity", separable_sanity);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
