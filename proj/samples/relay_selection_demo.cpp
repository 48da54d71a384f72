// SPDX-License-Identifier: Apache-2.0
//
// Generates a small scenario, trains the m2 preset, and compares its relay
// choices with the minimum-path-loss oracle.

#include <iostream>

#include "relaylearn/relaylearn.hpp"

int main() {
  using namespace relaylearn;

  channel::ScenarioConfig cfg;
  cfg.n_samples = 3000;
  cfg.seed = 7;
  const data::Dataset ds{channel::gen_dataset(cfg)};
  const auto [train_ds, test_ds] = data::split(ds, 0.75, cfg.seed);

  mlp::TrainConfig tc;
  tc.seed = cfg.seed;
  tc.max_epochs = 40;
  const model::AnyModel net{"m2", mlp::train(mlp::find_preset("m2")->hidden_sizes, tc, train_ds),
                            std::nullopt};

  const auto r = metrics::report(net.name, net.scores(test_ds.samples),
                                 net.classes(test_ds.samples), data::labels(test_ds));
  std::cout << "test accuracy " << text::number(r.accuracy, 4) << ", roc_auc "
            << text::number(r.roc_auc, 4) << '\n';

  // Regroup the held-out links into 3-way candidate sets.
  auto links = test_ds.samples;
  links.resize(links.size() - links.size() % 3);
  const auto instances = relay::group_candidates(links, 3);
  const double acc = relay::selection_accuracy(net, instances);
  const auto [lo, hi] = relay::wilson_interval(acc, instances.size());
  std::cout << "relay selection agrees with the oracle on " << text::number(100 * acc, 4)
            << "% of " << instances.size() << " instances (95% CI " << text::number(100 * lo, 4)
            << "-" << text::number(100 * hi, 4) << "%)\n";

  const auto trace = relay::handover_sim(net, instances);
  std::cout << "handover: " << trace.switch_count << " switches, outage fraction "
            << text::number(trace.outage_fraction, 4) << '\n';
  return 0;
}
