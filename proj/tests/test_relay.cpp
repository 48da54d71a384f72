// SPDX-License-Identifier: Apache-2.0
#include "relaylearn/relay.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <vector>

#include "relaylearn/channelsim.hpp"
#include "relaylearn/model.hpp"

namespace relaylearn::relay {
namespace {

LinkSample with_pl(double pl, double score = 0.0) {
  LinkSample s;
  s.path_loss_db = pl;
  s.aoa_spread_deg = score;  // carries a fixed score for FixedScorer
  s.label = data::label(pl);
  return s;
}

CandidateSet candidates(const std::vector<double>& pls) {
  CandidateSet cs;
  for (double pl : pls) cs.links.push_back(with_pl(pl));
  return cs;
}

// Reports whatever score is stored in each link; class is score >= 0.5.
struct FixedScorer {
  std::vector<double> scores(const std::vector<LinkSample>& links) const {
    std::vector<double> out;
    for (const auto& l : links) out.push_back(l.aoa_spread_deg);
    return out;
  }
  std::vector<int> classes(const std::vector<LinkSample>& links) const {
    std::vector<int> out;
    for (double s : scores(links)) out.push_back(s >= 0.5 ? 1 : 0);
    return out;
  }
};

// Any strictly increasing transform of another scorer.
template <typename Inner>
struct Cubed {
  Inner inner;
  std::vector<double> scores(const std::vector<LinkSample>& links) const {
    auto s = inner.scores(links);
    for (auto& v : s) v = v * v * v + 3.0;
    return s;
  }
  std::vector<int> classes(const std::vector<LinkSample>& links) const {
    return inner.classes(links);
  }
};

// Plug-in oracle with a different decreasing map of PL than the library's.
struct NegatedLoss {
  std::vector<double> scores(const std::vector<LinkSample>& links) const {
    std::vector<double> out;
    for (const auto& l : links) out.push_back(-l.path_loss_db);
    return out;
  }
  std::vector<int> classes(const std::vector<LinkSample>& links) const {
    std::vector<int> out;
    for (const auto& l : links) out.push_back(data::label(l.path_loss_db));
    return out;
  }
};

struct Constant {
  std::vector<double> scores(const std::vector<LinkSample>& links) const {
    return std::vector<double>(links.size(), 0.7);
  }
  std::vector<int> classes(const std::vector<LinkSample>& links) const {
    return std::vector<int>(links.size(), 1);
  }
};

static_assert(LinkScorer<FixedScorer>);
static_assert(LinkScorer<model::AnyModel>);

std::vector<CandidateSet> random_instances(std::size_t count, std::size_t k,
                                           std::uint64_t seed) {
  channel::ScenarioConfig cfg;
  cfg.n_samples = static_cast<std::int64_t>(count * k);
  cfg.seed = seed;
  return group_candidates(channel::gen_dataset(cfg), static_cast<std::int64_t>(k));
}

TEST(SelectOracle, Examples) {
  EXPECT_EQ(select_oracle(candidates({105, 118, 97})), 2u);
  EXPECT_EQ(select_oracle(candidates({130})), 0u);
  EXPECT_EQ(select_oracle(candidates({110, 110})), 0u);
  EXPECT_THROW(select_oracle(CandidateSet{}), DataError);
}

TEST(SelectOracle, MatchesNaiveScan) {
  for (const auto& cs : random_instances(2000, 4, 1)) {
    double best = INFINITY;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < cs.links.size(); ++i) {
      if (cs.links[i].path_loss_db < best) {
        best = cs.links[i].path_loss_db;
        idx = i;
      }
    }
    ASSERT_EQ(select_oracle(cs), idx);
  }
}

TEST(SelectPredicted, ArgmaxAndAllWeakFlag) {
  CandidateSet cs;
  cs.links = {with_pl(100, 0.2), with_pl(100, 0.9), with_pl(100, 0.6)};
  auto d = select_predicted(FixedScorer{}, cs);
  EXPECT_EQ(d.chosen_index, 1u);
  EXPECT_EQ(d.chosen_class, 1);

  cs.links = {with_pl(100, 0.1), with_pl(100, 0.3), with_pl(100, 0.2)};
  d = select_predicted(FixedScorer{}, cs);
  EXPECT_EQ(d.chosen_index, 1u);
  EXPECT_EQ(d.chosen_class, 0);

  cs.links = {with_pl(100, 0.4), with_pl(100, 0.4)};
  EXPECT_EQ(select_predicted(FixedScorer{}, cs).chosen_index, 0u);
}

TEST(SelectPredicted, OracleAgreesOnEveryInstance) {
  const auto instances = random_instances(3000, 3, 5);
  const model::AnyModel oracle{"oracle", model::OracleModel{}, std::nullopt};
  for (const auto& cs : instances) {
    ASSERT_EQ(select_predicted(oracle, cs).chosen_index, select_oracle(cs));
    ASSERT_EQ(select_predicted(NegatedLoss{}, cs).chosen_index, select_oracle(cs));
  }
  EXPECT_EQ(selection_accuracy(oracle, instances), 1.0);
}

TEST(SelectPredicted, InvariantUnderIncreasingTransforms) {
  rng::Rng gen(9);
  for (int trial = 0; trial < 1000; ++trial) {
    CandidateSet cs;
    const auto k = 1 + gen.below(6);
    for (std::uint64_t i = 0; i < k; ++i) {
      cs.links.push_back(with_pl(100, static_cast<double>(gen.below(5)) / 4.0));
    }
    ASSERT_EQ(select_predicted(FixedScorer{}, cs).chosen_index,
              select_predicted(Cubed<FixedScorer>{}, cs).chosen_index);
  }
}

TEST(SelectionAccuracy, ConstantScoresReduceToIndexZero) {
  const auto instances = random_instances(1000, 3, 7);
  std::size_t zero_best = 0;
  for (const auto& cs : instances) zero_best += select_oracle(cs) == 0;
  EXPECT_EQ(selection_accuracy(Constant{}, instances),
            static_cast<double>(zero_best) / static_cast<double>(instances.size()));
  EXPECT_THROW(selection_accuracy(Constant{}, {}), DataError);
}

TEST(Wilson, ContainsProportionAndNarrowsWithN) {
  const auto [lo, hi] = wilson_interval(0.9, 100);
  EXPECT_LT(lo, 0.9);
  EXPECT_GT(hi, 0.9);
  const auto [lo2, hi2] = wilson_interval(0.9, 10000);
  EXPECT_LT(hi2 - lo2, hi - lo);
  const auto [lo3, hi3] = wilson_interval(1.0, 50);
  EXPECT_EQ(hi3, 1.0);
  EXPECT_LT(lo3, 1.0);
}

TEST(Grouping, SizesAndErrors) {
  const auto samples = channel::gen_dataset([] {
    channel::ScenarioConfig c;
    c.n_samples = 12;
    return c;
  }());
  const auto g = group_candidates(samples, 3);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g[3].instance_id, 3);
  EXPECT_EQ(g[1].links[0], samples[3]);
  EXPECT_THROW(group_candidates(samples, 5), DataError);
  EXPECT_THROW(group_candidates({}, 3), DataError);
  EXPECT_THROW(group_candidates(samples, 0), ConfigError);
}

TEST(Handover, AllStrongNeverSwitches) {
  std::vector<CandidateSet> traj;
  rng::Rng gen(2);
  for (int t = 0; t < 50; ++t) {
    traj.push_back(candidates({gen.uniform(80, 119), gen.uniform(80, 119), gen.uniform(80, 119)}));
  }
  const model::AnyModel oracle{"oracle", model::OracleModel{}, std::nullopt};
  const auto trace = handover_sim(oracle, traj);
  EXPECT_EQ(trace.switch_count, 0);
  EXPECT_EQ(trace.outage_fraction, 0.0);
}

TEST(Handover, OracleAvoidsOutageWhenTheBestLinkStaysStrong) {
  std::vector<CandidateSet> traj;
  rng::Rng gen(3);
  for (int t = 0; t < 200; ++t) {
    auto cs = candidates({gen.uniform(90, 140), gen.uniform(90, 140), gen.uniform(90, 140)});
    cs.links[gen.below(3)] = with_pl(gen.uniform(90, 119));
    traj.push_back(cs);
  }
  const auto trace = handover_sim(NegatedLoss{}, traj);
  EXPECT_EQ(trace.outage_fraction, 0.0);
  EXPECT_GT(trace.switch_count, 0);
}

TEST(Handover, SingleCandidateStrongThenWeak) {
  const std::vector<CandidateSet> traj{candidates({100}), candidates({130})};
  const auto trace = handover_sim(NegatedLoss{}, traj);
  EXPECT_EQ(trace.outage_fraction, 0.5);
  EXPECT_EQ(trace.switch_count, 0);
  std::ostringstream os;
  write_trace_csv(trace, os);
  EXPECT_EQ(os.str(), "time_index,chosen_index,chosen_pl_db,in_outage\n0,0,100,0\n1,0,130,1\n");
}

TEST(Handover, AllWeakIsFullOutage) {
  const std::vector<CandidateSet> traj(5, candidates({125, 130, 140}));
  EXPECT_EQ(handover_sim(NegatedLoss{}, traj).outage_fraction, 1.0);
}

TEST(Handover, TraceIsInternallyConsistent) {
  const auto traj = random_instances(300, 3, 11);
  for (double h : {0.0, 1.0, 5.0}) {
    const auto trace = handover_sim(NegatedLoss{}, traj, {}, h);
    std::int64_t switches = 0, outages = 0;
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
      if (t > 0) switches += trace.steps[t].chosen_index != trace.steps[t - 1].chosen_index;
      outages += trace.steps[t].in_outage;
    }
    EXPECT_EQ(switches, trace.switch_count);
    EXPECT_DOUBLE_EQ(trace.outage_fraction, static_cast<double>(outages) / 300.0);
  }
}

TEST(Handover, HysteresisSuppressesMarginalSwitches) {
  // Incumbent weak at 0.4, challenger only slightly better at 0.5.
  CandidateSet first, later;
  first.links = {with_pl(100, 0.9), with_pl(100, 0.1)};
  later.links = {with_pl(125, 0.4), with_pl(100, 0.5)};
  const std::vector<CandidateSet> traj{first, later};
  EXPECT_EQ(handover_sim(FixedScorer{}, traj, {}, 0.0).switch_count, 1);
  EXPECT_EQ(handover_sim(FixedScorer{}, traj, {}, 3.0).switch_count, 0);
  EXPECT_EQ(hysteresis_margin(0.0), 0.0);
  EXPECT_NEAR(hysteresis_margin(10.0), 0.9, 1e-15);
  EXPECT_THROW(hysteresis_margin(-1.0), ConfigError);
}

}  // namespace
}  // namespace relaylearn::relay
