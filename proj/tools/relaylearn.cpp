// SPDX-License-Identifier: Apache-2.0
//
// relaylearn: generate synthetic link datasets, train and evaluate link
// classifiers, compare them, and simulate relay handover.
//
// Exit codes: 0 success, 2 usage/config error, 3 data/schema error,
// 4 I/O error.

#include <CLI11.hpp>
#include <json.hpp>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relaylearn/baselines.hpp"
#include "relaylearn/channelsim.hpp"
#include "relaylearn/dataset.hpp"
#include "relaylearn/errors.hpp"
#include "relaylearn/format.hpp"
#include "relaylearn/metrics.hpp"
#include "relaylearn/mlp.hpp"
#include "relaylearn/model.hpp"
#include "relaylearn/plot.hpp"
#include "relaylearn/relay.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace relaylearn;

namespace {

constexpr int kUsage = 2;
constexpr int kData = 3;
constexpr int kIo = 4;

// Output paths are vetted before any work is done so a bad path is a usage
// error; failures while actually writing are I/O errors.
void require_writable_file(const fs::path& path) {
  const fs::path parent = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  if (!fs::is_directory(parent)) {
    throw ConfigError("output directory '" + parent.string() + "' does not exist");
  }
  if (fs::is_directory(path)) throw ConfigError("output path '" + path.string() + "' is a directory");
  const bool ok = fs::exists(path) ? ::access(path.c_str(), W_OK) == 0
                                   : ::access(parent.c_str(), W_OK) == 0;
  if (!ok) throw ConfigError("output path '" + path.string() + "' is not writable");
}

void require_writable_dir(const fs::path& dir) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw ConfigError("'" + dir.string() + "' is not a directory");
    if (::access(dir.c_str(), W_OK) != 0) {
      throw ConfigError("output directory '" + dir.string() + "' is not writable");
    }
    return;
  }
  require_writable_file(dir);
}

void require_readable(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw IoError("cannot read '" + path.string() + "'");
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << content;
  os.flush();
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

// --seed, else RELAYLEARN_SEED, else the command default.
std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t flag_value,
                           std::uint64_t fallback) {
  if (flag->count() > 0) return flag_value;
  if (const char* env = std::getenv("RELAYLEARN_SEED"); env && *env) {
    const auto v = text::parse_int(env);
    if (!v || *v < 0) throw ConfigError("RELAYLEARN_SEED must be a non-negative integer");
    return static_cast<std::uint64_t>(*v);
  }
  return fallback;
}

bool seed_from_env_or_flag(const CLI::Option* flag) {
  const char* env = std::getenv("RELAYLEARN_SEED");
  return flag->count() > 0 || (env && *env);
}

double parse_tol(const std::string& s) {
  const auto v = text::parse_double(s);
  if (!v || !(*v >= 0.0)) throw ConfigError("tol must be a number >= 0 or 'inf'");
  return *v;
}

std::string fraction(std::int64_t num, std::int64_t den) {
  return text::number(den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den), 6);
}

model::AnyModel load_model(const std::string& source, double threshold_db) {
  if (source == "oracle") return {"oracle", model::OracleModel{{threshold_db}}, std::nullopt};
  require_readable(source);
  return model::load(source);
}

// Rebuilds the part of `ds` a model should be evaluated on.
data::Dataset evaluation_split(const model::AnyModel& m, const data::Dataset& ds,
                               const std::string& which, std::optional<std::uint64_t> seed_check,
                               std::uint64_t seed_default) {
  if (which == "all") return ds;
  std::uint64_t seed = seed_default;
  double train_fraction = 0.75;
  if (m.split) {
    if (seed_check && *seed_check != m.split->seed) {
      throw DataError("seed " + std::to_string(*seed_check) + " does not match the model's recorded seed " +
                      std::to_string(m.split->seed));
    }
    if (static_cast<std::int64_t>(ds.size()) != m.split->n_samples ||
        model::fingerprint(ds) != m.split->fingerprint) {
      throw DataError("dataset does not match the one the model was trained on (fingerprint " +
                      m.split->fingerprint + ")");
    }
    seed = m.split->seed;
    train_fraction = m.split->train_fraction;
  }
  const auto idx = data::split_indices(ds.size(), train_fraction, seed);
  return data::subset(ds, which == "train" ? idx.train : idx.test);
}

metrics::EvalReport evaluate(const model::AnyModel& m, const data::Dataset& ds) {
  (void)data::resolve_features(m.feature_names());
  const auto scores = m.scores(ds.samples);
  const auto preds = m.classes(ds.samples);
  return metrics::report(m.name, scores, preds, data::labels(ds));
}

std::string curve_csv(const std::vector<metrics::CurvePoint>& pts, std::string_view x,
                      std::string_view y) {
  std::ostringstream os;
  metrics::write_curve_csv(pts, x, y, os);
  return os.str();
}

std::string table_csv(const std::vector<metrics::EvalReport>& reports) {
  std::ostringstream os;
  metrics::write_table_csv(reports, os);
  return os.str();
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string config, output;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  double d_min = 0, d_max = 0, freq_ghz = 0, bandwidth_mhz = 0, tx_power_dbm = 0;
  double alpha = 0, beta = 0, sigma = 0, threshold_db = 120.0;
  std::int64_t n_candidates = 0;
  CLI::App* cmd = nullptr;
};

int cmd_generate(const GenerateArgs& a) {
  require_writable_file(a.output);
  channel::ScenarioConfig cfg;
  if (!a.config.empty()) {
    require_readable(a.config);
    std::ifstream is(a.config);
    try {
      cfg = json::parse(is).get<channel::ScenarioConfig>();
    } catch (const json::exception& e) {
      throw ConfigError("config '" + a.config + "': " + e.what());
    }
  }
  auto given = [&](const char* name) { return a.cmd->get_option(name)->count() > 0; };
  if (given("--n_samples")) cfg.n_samples = a.n_samples;
  if (given("--d_min")) cfg.d_min = a.d_min;
  if (given("--d_max")) cfg.d_max = a.d_max;
  if (given("--freq_ghz")) cfg.freq_ghz = a.freq_ghz;
  if (given("--bandwidth_mhz")) cfg.bandwidth_mhz = a.bandwidth_mhz;
  if (given("--tx_power_dbm")) cfg.tx_power_dbm = a.tx_power_dbm;
  if (given("--n_candidates")) cfg.n_candidates = a.n_candidates;
  if (given("--alpha")) cfg.fi.alpha = a.alpha;
  if (given("--beta")) cfg.fi.beta = a.beta;
  if (given("--sigma")) cfg.fi.sigma = a.sigma;
  const auto* seed_opt = a.cmd->get_option("--seed");
  if (seed_from_env_or_flag(seed_opt) || a.config.empty()) {
    cfg.seed = resolve_seed(seed_opt, a.seed, cfg.seed);
  }
  if (cfg.n_samples < 1) throw ConfigError("n_samples must be >= 1");
  cfg.validate();

  const data::Dataset ds{channel::gen_dataset(cfg, {a.threshold_db})};
  std::ostringstream os;
  data::write_csv(ds, os);
  write_text(a.output, os.str());
  const auto labels = data::labels(ds);
  const auto strong = std::count(labels.begin(), labels.end(), 1);
  std::cout << "wrote " << ds.size() << " samples to " << a.output << " (strong " << strong
            << ", weak " << static_cast<std::int64_t>(ds.size()) - strong << ", strong fraction "
            << fraction(strong, static_cast<std::int64_t>(ds.size())) << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string model, data, output, loss_csv, tol, feature_map = "identity", name;
  std::vector<std::string> features;
  std::uint64_t seed = 0;
  double train_fraction = 0.75, learning_rate = 0, beta1 = 0.9, beta2 = 0.999, epsilon = 1e-8;
  double c = 1.0;
  std::int64_t max_epochs = 0, batch_size = 32, n_iter_no_change = 0;
  CLI::App* cmd = nullptr;
};

int cmd_train(const TrainArgs& a) {
  const bool is_mlp = mlp::find_preset(a.model).has_value();
  if (!is_mlp && a.model != "logreg" && a.model != "dummy" && a.model != "svm") {
    throw ConfigError("unknown model '" + a.model + "' (expected m1..m6, logreg, dummy, svm)");
  }
  require_writable_file(a.output);
  if (!a.loss_csv.empty()) require_writable_file(a.loss_csv);
  auto given = [&](const char* name) { return a.cmd->get_option(name)->count() > 0; };
  const std::uint64_t seed = resolve_seed(a.cmd->get_option("--seed"), a.seed, 0);
  const auto feature_map = baselines::parse_feature_map(a.feature_map);
  const bool has_tol = !a.tol.empty();
  const double tol = has_tol ? parse_tol(a.tol) : 0.0;

  require_readable(a.data);
  auto ds = data::read_csv(a.data);
  if (!a.features.empty()) {
    (void)data::resolve_features(a.features);
    ds.feature_names = a.features;
  }
  const auto [train_ds, test_ds] = data::split(ds, a.train_fraction, seed);
  if (!mlp::has_both_classes(data::labels(train_ds))) {
    throw DataError("training split contains a single class");
  }

  model::AnyModel out;
  out.name = a.name.empty() ? a.model : a.name;
  out.split = model::SplitRecord{seed, a.train_fraction, static_cast<std::int64_t>(ds.size()),
                                 model::fingerprint(ds)};
  if (is_mlp) {
    const auto preset = *mlp::find_preset(a.model);
    mlp::TrainConfig cfg;
    cfg.learning_rate = given("--learning_rate") ? a.learning_rate : preset.learning_rate;
    cfg.beta1 = a.beta1;
    cfg.beta2 = a.beta2;
    cfg.epsilon = a.epsilon;
    if (given("--max_epochs")) cfg.max_epochs = a.max_epochs;
    cfg.batch_size = a.batch_size;
    if (has_tol) cfg.tol = tol;
    if (given("--n_iter_no_change")) cfg.n_iter_no_change = a.n_iter_no_change;
    cfg.seed = seed;
    cfg.validate();
    out.model = mlp::train(preset.hidden_sizes, cfg, train_ds);
  } else if (a.model == "logreg") {
    baselines::LogRegConfig cfg;
    if (given("--learning_rate")) cfg.learning_rate = a.learning_rate;
    if (given("--max_epochs")) cfg.max_epochs = a.max_epochs;
    if (has_tol) cfg.tol = tol;
    cfg.seed = seed;
    out.model = baselines::logreg_train(train_ds, cfg);
  } else if (a.model == "dummy") {
    out.model = baselines::dummy_train(train_ds);
  } else {
    baselines::SvmConfig cfg;
    cfg.c = a.c;
    if (given("--learning_rate")) cfg.learning_rate = a.learning_rate;
    if (given("--max_epochs")) cfg.max_epochs = a.max_epochs;
    if (has_tol) cfg.tol = tol;
    if (given("--n_iter_no_change")) cfg.n_iter_no_change = a.n_iter_no_change;
    cfg.seed = seed;
    cfg.feature_map = feature_map;
    out.model = baselines::svm_train(train_ds, cfg);
  }

  write_text(a.output, model::dump(out));
  const auto history = out.loss_history();
  if (!a.loss_csv.empty()) {
    std::ostringstream os;
    os << "epoch,loss\n";
    for (std::size_t e = 0; e < history.size(); ++e) {
      os << e + 1 << ',' << text::number(history[e]) << '\n';
    }
    write_text(a.loss_csv, os.str());
  }
  std::cout << "trained " << out.name << " (" << out.kind() << ") on " << train_ds.size()
            << " samples, held out " << test_ds.size() << "; epochs_run " << history.size();
  if (!history.empty()) std::cout << ", final loss " << text::number(history.back(), 8);
  std::cout << "\nwrote " << a.output << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string model, data, out_dir, split = "test";
  std::uint64_t seed = 0;
  double threshold_db = 120.0;
  bool svg = false;
  CLI::App* cmd = nullptr;
};

int cmd_eval(const EvalArgs& a) {
  require_writable_dir(a.out_dir);
  const auto* seed_opt = a.cmd->get_option("--seed");
  const auto seed_check = seed_from_env_or_flag(seed_opt)
                              ? std::optional(resolve_seed(seed_opt, a.seed, 0))
                              : std::nullopt;
  const auto m = load_model(a.model, a.threshold_db);
  require_readable(a.data);
  const auto ds = data::read_csv(a.data);
  const auto part = evaluation_split(m, ds, a.split, seed_check, seed_check.value_or(0));
  const auto r = evaluate(m, part);

  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  auto j = metrics::to_json(r);
  j["kind"] = m.kind();
  j["split"] = a.split;
  write_text(dir / "report.json", j.dump(1) + "\n");
  write_text(dir / "report.csv", table_csv({r}));
  write_text(dir / "roc.csv", curve_csv(r.roc_points, "fpr", "tpr"));
  write_text(dir / "pr.csv", curve_csv(r.pr_points, "recall", "precision"));
  if (a.svg) {
    write_text(dir / "roc.svg",
               plot::line_chart({"ROC: " + r.model_name, "false positive rate", "true positive rate"},
                                {{r.model_name, r.roc_points}, {"chance", {{0, 0}, {1, 1}}}}));
    write_text(dir / "pr.svg", plot::line_chart({"Precision-recall: " + r.model_name, "recall",
                                                 "precision"},
                                                {{r.model_name, r.pr_points}}));
    const auto history = m.loss_history();
    if (!history.empty()) {
      std::vector<metrics::CurvePoint> pts;
      for (std::size_t e = 0; e < history.size(); ++e) {
        pts.push_back({static_cast<double>(e + 1), history[e]});
      }
      write_text(dir / "loss.svg", plot::line_chart({"Training loss: " + r.model_name, "epoch",
                                                     "loss", false},
                                                    {{r.model_name, pts}}));
    }
  }
  std::cout << "model " << r.model_name << " on " << r.confusion.total() << " " << a.split
            << " samples: accuracy " << text::number(r.accuracy, 6) << ", precision "
            << text::number(r.precision, 6) << ", recall " << text::number(r.recall, 6) << ", f1 "
            << text::number(r.f1, 6) << ", roc_auc " << text::number(r.roc_auc, 6) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  std::vector<std::string> models;
  std::string data, output, roc_svg, split = "test";
  double threshold_db = 120.0;
};

int cmd_compare(const CompareArgs& a) {
  require_writable_file(a.output);
  if (!a.roc_svg.empty()) require_writable_file(a.roc_svg);
  require_readable(a.data);
  const auto ds = data::read_csv(a.data);
  std::vector<metrics::EvalReport> reports;
  for (const auto& source : a.models) {
    const auto m = load_model(source, a.threshold_db);
    reports.push_back(evaluate(m, evaluation_split(m, ds, a.split, std::nullopt, 0)));
  }
  const auto ranked = metrics::compare(std::move(reports));
  const auto table = table_csv(ranked);
  write_text(a.output, table);
  if (!a.roc_svg.empty()) {
    std::vector<plot::Series> series;
    for (const auto& r : ranked) series.push_back({r.model_name, r.roc_points});
    write_text(a.roc_svg,
               plot::line_chart({"ROC comparison", "false positive rate", "true positive rate"},
                                series));
  }
  std::cout << table;
  return 0;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string model, data, output, summary;
  std::int64_t n_candidates = 3;
  double threshold_db = 120.0, hysteresis_db = 0.0;
};

int cmd_simulate(const SimulateArgs& a) {
  require_writable_file(a.output);
  if (!a.summary.empty()) require_writable_file(a.summary);
  if (a.n_candidates < 1) throw ConfigError("n_candidates must be >= 1");
  (void)relay::hysteresis_margin(a.hysteresis_db);
  const auto m = load_model(a.model, a.threshold_db);
  require_readable(a.data);
  const auto ds = data::read_csv(a.data);
  const auto instances = relay::group_candidates(ds.samples, a.n_candidates);
  (void)data::resolve_features(m.feature_names());

  const data::LabelRule rule{a.threshold_db};
  const auto trace = relay::handover_sim(m, instances, rule, a.hysteresis_db);
  const model::AnyModel oracle{"oracle", model::OracleModel{rule}, std::nullopt};
  const auto oracle_trace = relay::handover_sim(oracle, instances, rule, a.hysteresis_db);
  const double acc = relay::selection_accuracy(m, instances);
  const auto [lo, hi] = relay::wilson_interval(acc, instances.size());

  std::ostringstream os;
  relay::write_trace_csv(trace, os);
  write_text(a.output, os.str());
  const json summary{{"model", m.name},
                     {"kind", m.kind()},
                     {"instances", instances.size()},
                     {"n_candidates", a.n_candidates},
                     {"threshold_db", a.threshold_db},
                     {"hysteresis_db", a.hysteresis_db},
                     {"switch_count", trace.switch_count},
                     {"outage_fraction", trace.outage_fraction},
                     {"selection_accuracy", acc},
                     {"selection_accuracy_ci95", {lo, hi}},
                     {"oracle_switch_count", oracle_trace.switch_count},
                     {"oracle_outage_fraction", oracle_trace.outage_fraction}};
  const auto text = summary.dump(1) + "\n";
  if (!a.summary.empty()) write_text(a.summary, text);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-loss link classification and relay selection toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "relaylearn 1.0.0");

  GenerateArgs gen;
  gen.cmd = app.add_subcommand("generate", "Generate a synthetic link dataset CSV");
  gen.cmd->add_option("--config", gen.config, "ScenarioConfig JSON file");
  gen.cmd->add_option("--n,--n_samples", gen.n_samples, "Number of link samples");
  gen.cmd->add_option("--seed", gen.seed, "Seed (default: RELAYLEARN_SEED, then 42)");
  gen.cmd->add_option("--d_min", gen.d_min, "Minimum distance (m)");
  gen.cmd->add_option("--d_max", gen.d_max, "Maximum distance (m)");
  gen.cmd->add_option("--freq_ghz", gen.freq_ghz, "Carrier frequency (GHz)");
  gen.cmd->add_option("--bandwidth_mhz", gen.bandwidth_mhz, "Bandwidth (MHz)");
  gen.cmd->add_option("--tx_power_dbm", gen.tx_power_dbm, "Transmit power (dBm)");
  gen.cmd->add_option("--n_candidates", gen.n_candidates, "Candidate links per instance");
  gen.cmd->add_option("--alpha", gen.alpha, "Floating-intercept alpha (dB)");
  gen.cmd->add_option("--beta", gen.beta, "Floating-intercept slope beta");
  gen.cmd->add_option("--sigma", gen.sigma, "Shadow fading stddev (dB)");
  gen.cmd->add_option("--threshold_db", gen.threshold_db, "Labeling threshold (dB)");
  gen.cmd->add_option("-o,--output", gen.output, "Output CSV")->required();

  TrainArgs tr;
  tr.cmd = app.add_subcommand("train", "Train a model on the seeded training split");
  tr.cmd->add_option("--model", tr.model, "m1..m6, logreg, dummy or svm")->required();
  tr.cmd->add_option("--data", tr.data, "Dataset CSV")->required();
  tr.cmd->add_option("-o,--output", tr.output, "Output model JSON")->required();
  tr.cmd->add_option("--seed", tr.seed, "Seed (default: RELAYLEARN_SEED, then 0)");
  tr.cmd->add_option("--name", tr.name, "Model name (default: the --model value)");
  tr.cmd->add_option("--loss_csv", tr.loss_csv, "Per-epoch loss CSV");
  tr.cmd->add_option("--features", tr.features, "Feature columns")->delimiter(',');
  tr.cmd->add_option("--train_fraction", tr.train_fraction, "Training fraction");
  tr.cmd->add_option("--learning_rate", tr.learning_rate, "Learning rate");
  tr.cmd->add_option("--beta1", tr.beta1, "Adam beta1");
  tr.cmd->add_option("--beta2", tr.beta2, "Adam beta2");
  tr.cmd->add_option("--epsilon", tr.epsilon, "Adam epsilon");
  tr.cmd->add_option("--max_epochs", tr.max_epochs, "Maximum epochs");
  tr.cmd->add_option("--batch_size", tr.batch_size, "Mini-batch size");
  tr.cmd->add_option("--tol", tr.tol, "Early-stopping tolerance (number or inf)");
  tr.cmd->add_option("--n_iter_no_change", tr.n_iter_no_change, "Early-stopping patience");
  tr.cmd->add_option("--C", tr.c, "SVM regularization constant");
  tr.cmd->add_option("--feature_map", tr.feature_map, "SVM feature map: identity or poly4");

  EvalArgs ev;
  ev.cmd = app.add_subcommand("eval", "Evaluate a model on its held-out split");
  ev.cmd->add_option("--model", ev.model, "Model JSON, or 'oracle'")->required();
  ev.cmd->add_option("--data", ev.data, "Dataset CSV")->required();
  ev.cmd->add_option("-o,--out_dir", ev.out_dir, "Output directory")->required();
  ev.cmd->add_option("--seed", ev.seed, "Expected split seed");
  ev.cmd->add_option("--split", ev.split, "test, train or all")
      ->check(CLI::IsMember({"test", "train", "all"}));
  ev.cmd->add_option("--threshold_db", ev.threshold_db, "Threshold for the oracle model");
  ev.cmd->add_flag("--svg", ev.svg, "Also render ROC, PR and loss plots");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Rank several models on their held-out splits");
  cmp_cmd->add_option("--models", cmp.models, "Model JSON files or 'oracle'")->required();
  cmp_cmd->add_option("--data", cmp.data, "Dataset CSV")->required();
  cmp_cmd->add_option("-o,--output", cmp.output, "Ranked table CSV")->required();
  cmp_cmd->add_option("--roc_svg", cmp.roc_svg, "Overlaid ROC plot");
  cmp_cmd->add_option("--split", cmp.split, "test, train or all")
      ->check(CLI::IsMember({"test", "train", "all"}));
  cmp_cmd->add_option("--threshold_db", cmp.threshold_db, "Threshold for the oracle model");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run relay selection and handover over a trajectory");
  sim_cmd->add_option("--model", sim.model, "Model JSON, or 'oracle'")->required();
  sim_cmd->add_option("--data", sim.data, "Trajectory CSV")->required();
  sim_cmd->add_option("--n_candidates", sim.n_candidates, "Candidate links per instance");
  sim_cmd->add_option("--threshold_db", sim.threshold_db, "Outage threshold (dB)");
  sim_cmd->add_option("--hysteresis_db", sim.hysteresis_db, "Handover hysteresis (dB)");
  sim_cmd->add_option("-o,--output", sim.output, "Trace CSV")->required();
  sim_cmd->add_option("--summary", sim.summary, "Summary JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);
    return kUsage;
  }

  try {
    if (*gen.cmd) return cmd_generate(gen);
    if (*tr.cmd) return cmd_train(tr);
    if (*ev.cmd) return cmd_eval(ev);
    if (*cmp_cmd) return cmd_compare(cmp);
    if (*sim_cmd) return cmd_simulate(sim);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
