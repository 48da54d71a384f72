// SPDX-License-Identifier: Apache-2.0
//
// Relay selection over candidate-link sets and a threshold-triggered
// handover policy driven by any link classifier.
#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "relaylearn/dataset.hpp"
#include "relaylearn/errors.hpp"
#include "relaylearn/format.hpp"
#include "relaylearn/link.hpp"

namespace relaylearn::relay {

// Anything that scores links (higher = more likely strong) and classifies
// them. model::AnyModel satisfies this, as do test doubles.
template <typename T>
concept LinkScorer = requires(const T& m, const std::vector<LinkSample>& links) {
  { m.scores(links) } -> std::convertible_to<std::vector<double>>;
  { m.classes(links) } -> std::convertible_to<std::vector<int>>;
};

struct CandidateSet {
  std::int64_t instance_id = 0;
  std::vector<LinkSample> links;
};

// Consecutive runs of n_candidates records form one selection instance.
inline std::vector<CandidateSet> group_candidates(const std::vector<LinkSample>& samples,
                                                  std::int64_t n_candidates) {
  if (n_candidates < 1) throw ConfigError("n_candidates must be >= 1");
  const auto k = static_cast<std::size_t>(n_candidates);
  if (samples.empty()) throw DataError("no candidate links");
  if (samples.size() % k != 0) {
    throw DataError(std::to_string(samples.size()) + " records do not split into instances of " +
                    std::to_string(k) + " candidates");
  }
  std::vector<CandidateSet> out;
  for (std::size_t start = 0; start < samples.size(); start += k) {
    out.push_back({static_cast<std::int64_t>(start / k),
                   {samples.begin() + static_cast<std::ptrdiff_t>(start),
                    samples.begin() + static_cast<std::ptrdiff_t>(start + k)}});
  }
  return out;
}

// Index of the minimum true path loss; ties go to the lowest index.
inline std::size_t select_oracle(const CandidateSet& cs) {
  if (cs.links.empty()) throw DataError("select_oracle: empty candidate set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < cs.links.size(); ++i) {
    if (cs.links[i].path_loss_db < cs.links[best].path_loss_db) best = i;
  }
  return best;
}

inline std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

struct RelayDecision {
  std::int64_t instance_id = 0;
  std::size_t chosen_index = 0;
  int chosen_class = 0;  // 0 means every candidate was predicted weak
  std::vector<double> scores;
};

template <LinkScorer Model>
RelayDecision select_predicted(const Model& model, const CandidateSet& cs) {
  if (cs.links.empty()) throw DataError("select_predicted: empty candidate set");
  RelayDecision d;
  d.instance_id = cs.instance_id;
  d.scores = model.scores(cs.links);
  const auto classes = model.classes(cs.links);
  if (d.scores.size() != cs.links.size() || classes.size() != cs.links.size()) {
    throw DataError("select_predicted: model returned the wrong number of scores");
  }
  d.chosen_index = argmax(d.scores);
  d.chosen_class = classes[d.chosen_index];
  return d;
}

template <LinkScorer Model>
double selection_accuracy(const Model& model, const std::vector<CandidateSet>& instances) {
  if (instances.empty()) throw DataError("selection_accuracy: no instances");
  std::size_t hits = 0;
  for (const auto& cs : instances) {
    if (select_predicted(model, cs).chosen_index == select_oracle(cs)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(instances.size());
}

// Wilson score interval for a binomial proportion (z = 1.96 for 95%).
inline std::pair<double, double> wilson_interval(double proportion, std::size_t n,
                                                 double z = 1.96) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double z2 = z * z;
  const double centre = (proportion + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half =
      z * std::sqrt(proportion * (1 - proportion) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

// ---------------------------------------------------------------------------
// Handover

struct HandoverStep {
  std::int64_t time_index = 0;
  std::size_t chosen_index = 0;
  double chosen_pl_db = 0.0;
  bool in_outage = false;
};

struct HandoverTrace {
  std::vector<HandoverStep> steps;
  std::int64_t switch_count = 0;
  double outage_fraction = 0.0;
};

// Score margin a challenger must clear before replacing a weak incumbent:
// 1 - 10^(-h/10), i.e. 0 for h = 0 dB, ~0.21 for 1 dB, ~0.68 for 5 dB.
inline double hysteresis_margin(double hysteresis_db) {
  if (!(hysteresis_db >= 0.0)) throw ConfigError("hysteresis_db must be >= 0");
  return 1.0 - std::pow(10.0, -hysteresis_db / 10.0);
}

// At step 0 attach to the predicted best link. Afterwards keep the serving
// index while the model predicts it strong; otherwise move to the predicted
// best, subject to the hysteresis margin. A step is in outage when the true
// path loss of the serving link is at or above the labeling threshold.
template <LinkScorer Model>
HandoverTrace handover_sim(const Model& model, const std::vector<CandidateSet>& trajectory,
                           data::LabelRule rule = {}, double hysteresis_db = 0.0) {
  if (trajectory.empty()) throw DataError("handover_sim: empty trajectory");
  const double margin = hysteresis_margin(hysteresis_db);
  HandoverTrace trace;
  std::size_t serving = 0;
  std::int64_t outages = 0;
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    const auto& cs = trajectory[t];
    const auto decision = select_predicted(model, cs);
    if (t == 0 || serving >= cs.links.size()) {
      serving = decision.chosen_index;
    } else {
      const auto classes = model.classes(cs.links);
      const bool incumbent_strong = classes[serving] == 1;
      const std::size_t challenger = decision.chosen_index;
      const bool clears_margin =
          margin == 0.0 || decision.scores[challenger] > decision.scores[serving] + margin;
      if (!incumbent_strong && challenger != serving && clears_margin) {
        serving = challenger;
      }
    }
    HandoverStep step;
    step.time_index = static_cast<std::int64_t>(t);
    step.chosen_index = serving;
    step.chosen_pl_db = cs.links[serving].path_loss_db;
    step.in_outage = data::label(step.chosen_pl_db, rule) == 0;
    if (step.in_outage) ++outages;
    if (t > 0 && serving != trace.steps.back().chosen_index) ++trace.switch_count;
    trace.steps.push_back(step);
  }
  trace.outage_fraction = static_cast<double>(outages) / static_cast<double>(trajectory.size());
  return trace;
}

inline void write_trace_csv(const HandoverTrace& trace, std::ostream& os) {
  os << "time_index,chosen_index,chosen_pl_db,in_outage\n";
  for (const auto& s : trace.steps) {
    os << s.time_index << ',' << s.chosen_index << ',' << text::number(s.chosen_pl_db) << ','
       << (s.in_outage ? 1 : 0) << '\n';
  }
}

}  // namespace relaylearn::relay
