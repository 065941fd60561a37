#include <gtest/gtest.h>

#include "ccga/engine.hpp"
#include "oracles.hpp"

using namespace ccga;

namespace {

RunConfig small_config(ObjectiveKind kind, Index D, Index K, Count m, std::uint64_t seed,
                       std::int64_t budget = 100000) {
  RunConfig c;
  c.objective = kind == ObjectiveKind::KVal ? LinearCategoricalObjective::kval(D, K)
                                            : LinearCategoricalObjective::com(D, K);
  c.resolution = Resolution(K, m);
  c.max_iterations = budget;
  c.seed = seed;
  return c;
}

struct Replay {
  std::optional<std::int64_t> t_hit;
  GridParams final_params;
};

// Straight transcription of the algorithm, with selection by exact values.
Replay replay(const RunConfig& c) {
  const Index D = c.objective.dimensions();
  const Index K = c.objective.categories();
  GridParams p = c.initial_params_override.value_or(init_params(D, c.resolution));
  RandomStream stream(c.seed);
  for (std::int64_t t = 0; t < c.max_iterations; ++t) {
    const OneHotSolution x = sample(p, stream);
    const OneHotSolution y = sample(p, stream);
    const OneHotSolution best = c.objective.optimum();
    if (x == best || y == best) return {t, p};
    std::vector<int> xv(x.categories().begin(), x.categories().end());
    std::vector<int> yv(y.categories().begin(), y.categories().end());
    const bool x_wins = oracle::value(c.objective.kind(), D, K, xv) >= oracle::value(c.objective.kind(), D, K, yv);
    p = x_wins ? apply_update(p, x, y) : apply_update(p, y, x);
  }
  return {std::nullopt, p};
}

class StepRecorder final : public Observer {
 public:
  void before_sampling(std::int64_t t, const GridParams& theta) override {
    last_t = t;
    last_before = theta.counts();
  }
  void after_update(const UpdateEvent& e) override {
    ++updates;
    EXPECT_EQ(e.t, last_t);
    EXPECT_EQ(e.before.counts(), last_before);
    const CountMatrix diff = e.after.counts() - e.before.counts();
    EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1);
    const Count grid = e.before.resolution().grid_size();
    for (Index d = 0; d < diff.rows(); ++d) {
      EXPECT_EQ(e.after.counts().row(d).sum(), grid);
      for (Index k = 0; k < diff.cols(); ++k) {
        const Count before = e.before.count(d, k);
        if (before == 0 || before == grid) EXPECT_EQ(diff(d, k), 0);
      }
    }
    if (e.before.counts().col(0).sum() > e.after.counts().col(0).sum()) ++optimal_sum_drops;
  }
  std::int64_t last_t = -1;
  CountMatrix last_before;
  std::int64_t updates = 0;
  std::int64_t optimal_sum_drops = 0;
};

}  // namespace

TEST(RunTrial, ConcentratedStartHitsAtZero) {
  RunConfig c = small_config(ObjectiveKind::Com, 3, 2, 2, 1);
  c.initial_params_override = oracle::params(2, 2, {{4, 0}, {4, 0}, {4, 0}});
  const RunResult r = run_trial(c);
  EXPECT_TRUE(r.hit);
  EXPECT_EQ(r.t_hit, 0);
  EXPECT_EQ(r.iterations_executed, 1);
}

TEST(RunTrial, FirstIterationHitProbability) {
  // D = 1, K = 2, m = 1: theta = 1/2, so Pr(t_hit = 0) = 1 - (1/2)^2.
  int hits_at_zero = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    const RunResult r = run_trial(small_config(ObjectiveKind::KVal, 1, 2, 1, mix_seed({5, std::uint64_t(i)}), 10));
    hits_at_zero += r.t_hit == 0;
  }
  EXPECT_NEAR(hits_at_zero / double(trials), 0.75, 0.01);
}

TEST(RunTrial, BudgetValidationAndCensoring) {
  RunConfig c = small_config(ObjectiveKind::Com, 2, 2, 2, 1, 0);
  EXPECT_THROW(run_trial(c), InvalidInput);
  c.max_iterations = 1;
  c.initial_params_override = oracle::params(2, 2, {{0, 4}, {0, 4}});
  const RunResult r = run_trial(c);
  EXPECT_FALSE(r.hit);
  EXPECT_FALSE(r.t_hit.has_value());
  EXPECT_LE(r.iterations_executed, 1);
}

TEST(RunTrial, OverrideShapeMismatchRejected) {
  RunConfig c = small_config(ObjectiveKind::Com, 2, 2, 2, 1);
  c.initial_params_override = oracle::params(2, 2, {{2, 2}});
  EXPECT_THROW(run_trial(c), InvalidInput);
}

TEST(RunTrial, HitTimeNeverExceedsExecutedIterations) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RunResult r = run_trial(small_config(ObjectiveKind::KVal, 4, 3, 3, seed, 40));
    if (r.hit) {
      EXPECT_LT(*r.t_hit, r.iterations_executed);
    } else {
      EXPECT_LE(r.iterations_executed, 40);
    }
  }
}

TEST(RunTrial, ReplayReproducesHitAndCensoring) {
  for (auto kind : {ObjectiveKind::Com, ObjectiveKind::KVal}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const RunConfig c = small_config(kind, 4, 3, 2, seed, 30);
      const RunResult r = run_trial(c);
      const Replay ref = replay(c);
      ASSERT_EQ(r.t_hit, ref.t_hit) << "seed " << seed;
      ASSERT_EQ(r.hit, ref.t_hit.has_value());
      ASSERT_EQ(r.final_params, ref.final_params) << "seed " << seed;
    }
  }
}

TEST(RunTrial, Deterministic) {
  RunConfig c = small_config(ObjectiveKind::KVal, 6, 3, 4, 77);
  c.thresholds = lemma_threshold_set(0.5);
  c.trace_stride = 3;
  const RunResult a = run_trial(c);
  const RunResult b = run_trial(c);
  EXPECT_EQ(a.t_hit, b.t_hit);
  EXPECT_EQ(a.final_params, b.final_params);
  EXPECT_EQ(a.threshold_crossings, b.threshold_crossings);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i].optimal_counts, b.trace[i].optimal_counts);
}

TEST(RunTrial, ObserverSeesGridStepsAndComMonotonicity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RunConfig c = small_config(ObjectiveKind::Com, 8, 3, 3, seed);
    c.continue_after_hit = true;
    c.max_iterations = 3000;
    TrialRunner runner(c);
    StepRecorder recorder;
    runner.attach(recorder);
    const RunResult r = runner.run();
    EXPECT_GT(recorder.updates, 0);
    EXPECT_EQ(recorder.optimal_sum_drops, 0);
    EXPECT_FALSE(r.optimal_sum_decrease.has_value());
  }
}

TEST(RunTrial, KValCanLowerOptimalSum) {
  bool any_drop = false;
  for (std::uint64_t seed = 0; seed < 20 && !any_drop; ++seed) {
    any_drop = run_trial(small_config(ObjectiveKind::KVal, 6, 3, 2, seed)).optimal_sum_decrease.has_value();
  }
  EXPECT_TRUE(any_drop);
}

TEST(RunTrial, ContinueAfterHitStopsWhenAbsorbed) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RunConfig c = small_config(ObjectiveKind::Com, 3, 2, 1, seed, 100000);
    c.continue_after_hit = true;
    const RunResult r = run_trial(c);
    hits += r.hit;
    EXPECT_LT(r.iterations_executed, 100000);
    for (Index d = 0; d < 3; ++d) EXPECT_TRUE(r.final_params.row_degenerate(d));
    if (!r.hit) EXPECT_FALSE(r.final_params.concentrated_on_optimum());
  }
  EXPECT_GT(hits, 0);
}

TEST(RunTrial, TraceStrideRecordsStates) {
  RunConfig c = small_config(ObjectiveKind::Com, 4, 2, 3, 9);
  c.trace_stride = 1;
  const RunResult r = run_trial(c);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.front().t, 0);
  EXPECT_TRUE((r.trace.front().optimal_counts.array() == 3).all());
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_EQ(r.trace[i].t, r.trace[i - 1].t + 1);
}

TEST(ThresholdObserver, AlphaOneAtOptimum) {
  RunConfig c = small_config(ObjectiveKind::Com, 3, 2, 2, 1);
  c.initial_params_override = oracle::params(2, 2, {{4, 0}, {4, 0}, {4, 0}});
  TrialRunner runner(c);
  runner.attach_threshold_observer("p", ThresholdKind::ProductAtLeastAlpha, 1.0);
  const RunResult r = runner.run();
  EXPECT_EQ(r.threshold_crossings.at("p"), 0);
}

TEST(ThresholdObserver, ExactBoundaryDecisions) {
  RandomStream stream(8);
  for (int i = 0; i < 2000; ++i) {
    const Index D = 1 + static_cast<Index>(stream.uniform_below(4));
    const Count m = 1 + static_cast<Count>(stream.uniform_below(3));
    CountMatrix counts(D, 2);
    for (Index d = 0; d < D; ++d) {
      counts(d, 0) = static_cast<Count>(stream.uniform_below(static_cast<std::uint64_t>(2 * m + 1)));
      counts(d, 1) = 2 * m - counts(d, 0);
    }
    const GridParams p(Resolution(2, m), counts);
    const double alphas[] = {0.0, 0.25, 0.5, 0.75, 1.0, 0.125, 0.375};
    const double alpha = alphas[stream.uniform_below(7)];
    const Rational a(alpha);
    Rational product = 1, sum = 0;
    for (Index d = 0; d < D; ++d) {
      product *= p.theta<Rational>(d, 0);
      sum += p.theta<Rational>(d, 0);
    }
    Rational a_pow_d = 1;
    for (Index d = 0; d < D; ++d) a_pow_d *= a;
    EXPECT_EQ(ThresholdObserver(p, {"a", ThresholdKind::ProductAtLeastAlpha, alpha}).holds(p), product >= a);
    EXPECT_EQ(ThresholdObserver(p, {"b", ThresholdKind::SumAtLeastDMinusOnePlusAlpha, alpha}).holds(p),
              sum >= Rational(D - 1) + a);
    EXPECT_EQ(ThresholdObserver(p, {"c", ThresholdKind::ProductAtLeastAlphaPowD, alpha}).holds(p),
              product >= a_pow_d);
    EXPECT_EQ(ThresholdObserver(p, {"d", ThresholdKind::SumAtLeastAlphaD, alpha}).holds(p), sum >= a * D);
  }
}

TEST(ThresholdObserver, LemmaOrderingsHoldPathwise) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RunConfig c = small_config(ObjectiveKind::Com, 8, 3, 3, seed);
    c.thresholds = lemma_threshold_set(0.5);
    const RunResult r = run_trial(c);
    const auto& x = r.threshold_crossings;
    const auto never = std::numeric_limits<std::int64_t>::max();
    EXPECT_LE(x.at("product").value_or(never), x.at("sum").value_or(never));
    EXPECT_GE(x.at("product_pow").value_or(never), x.at("sum_scaled").value_or(never));
  }
}

TEST(ThresholdKind, Names) {
  for (const auto& spec : lemma_threshold_set(0.5)) {
    EXPECT_EQ(parse_threshold_kind(to_string(spec.kind)), spec.kind);
  }
  RunConfig c = small_config(ObjectiveKind::Com, 2, 2, 1, 0);
  c.thresholds = {{"bad", ThresholdKind::ProductAtLeastAlpha, 1.5}};
  EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(Events, LowMarginalAndRatioDefinitions) {
  // theta(0,0) = 1/4 = 1/(2K) at the start: the low-marginal event fires at t = 0.
  RunConfig c = small_config(ObjectiveKind::KVal, 2, 2, 4, 3);
  c.initial_params_override = oracle::params(2, 4, {{2, 6}, {4, 4}});
  const RunResult r = run_trial(c);
  EXPECT_EQ(r.low_marginal_event, 0);
  // 2 * 2 < 6, so the ratio event also fires at t = 0.
  EXPECT_EQ(r.ratio_event, 0);

  c.initial_params_override = oracle::params(2, 4, {{3, 5}, {4, 4}});
  const RunResult s = run_trial(c);
  EXPECT_NE(s.low_marginal_event, std::optional<std::int64_t>(0));
  EXPECT_NE(s.ratio_event, std::optional<std::int64_t>(0));
}
