#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fbauction/error.hpp"
#include "fbauction/mechanism.hpp"
#include "fbauction/metrics.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fba;

namespace {

// Trains each agent's unit-context model on its fixed utility, then returns
// the mechanism ready for a forced exploitation round. Agents with equal
// utilities end with equal sample counts, so their fits tie bit for bit.
FeedbackMechanism trained_on(const std::vector<double>& values) {
  MechanismOptions opts;
  opts.target = LearningTarget::utility_report;
  opts.model = {.ridge = 0.0, .prior_estimate = 0.5, .min_samples = 1};
  FeedbackMechanism mech(values.size(), 1, opts, 1);
  testing::FixedUtilityOracle oracle(values);
  const auto ctx = testing::unit_contexts(values.size());
  auto ready = [&] {
    const auto& m = mech.models();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i].sample_count() == 0) return false;
      for (std::size_t j = 0; j < i; ++j)
        if (values[i] == values[j] && m[i].sample_count() != m[j].sample_count()) return false;
    }
    return true;
  };
  while (!ready()) mech.run_round_forced(Branch::explore, ctx, oracle);
  return mech;
}

struct Query {
  AgentIndex agent;
  double price;
  bool answer;
  double utility;
};

class RecordingOracle final : public AgentOracle {
 public:
  explicit RecordingOracle(AgentOracle& inner) : inner_(inner) {}
  bool report(AgentIndex a, double c) override {
    log.push_back({a, c, inner_.report(a, c), 0.0});
    return log.back().answer;
  }
  double utility_report(AgentIndex a) override { return log.back().utility = inner_.utility_report(a); }
  std::vector<Query> log;

 private:
  AgentOracle& inner_;
};

// Knows nothing about utilities: replays recorded answers and checks that the
// mechanism asks the same questions.
class ReplayOracle final : public AgentOracle {
 public:
  explicit ReplayOracle(const std::vector<Query>& log) : log_(log) {}
  bool report(AgentIndex a, double c) override {
    const Query& q = log_.at(next_++);
    if (q.agent != a || q.price != c) mismatches++;
    return q.answer;
  }
  double utility_report(AgentIndex) override { return log_.at(next_ - 1).utility; }
  int mismatches = 0;

 private:
  const std::vector<Query>& log_;
  std::size_t next_ = 0;
};

std::vector<AgentSpec> population(std::size_t n, std::size_t d, std::uint64_t seed) {
  RngStream g = derive_stream(seed, "pop");
  std::vector<AgentSpec> specs;
  for (std::size_t i = 0; i < n; ++i) specs.push_back({sample_theta(d, g), {}, {}, {}});
  return specs;
}

}  // namespace

TEST_SUITE("mechanism") {
  TEST_CASE("schedule floor and constant kind") {
    for (auto kind : {ScheduleKind::slow, ScheduleKind::fast, ScheduleKind::constant}) {
      const ScheduleSpec s{kind, 10, 0.05, 3, 0.1};
      CHECK(eta(s, 1) == 1.0);
      CHECK(eta(s, 3) == 1.0);
    }
    CHECK(eta({ScheduleKind::constant, 10, 0.05, 3, 0.1}, 1000000) == 0.1);
    CHECK_THROWS_AS(eta({}, 0), InputError);
  }

  TEST_CASE("slow schedule at n=10, t=1000 matches a high-precision evaluation") {
    const ScheduleSpec s{ScheduleKind::slow, 10, 0.05, 3, 0.1};
    CHECK(eta(s, 1000) == doctest::Approx(0.4725236455569642).epsilon(1e-9));
  }

  TEST_CASE("second price examples") {
    const std::vector<double> a{0.9, 0.5, 0.3};
    CHECK(second_price(a).winner == 0);
    CHECK(second_price(a).price == 0.5);
    const std::vector<double> tie{0.7, 0.7};
    CHECK(second_price(tie).winner == 0);
    CHECK(second_price(tie).price == 0.7);
    const std::vector<double> one{0.4};
    CHECK_THROWS_AS(second_price(one), InputError);
  }

  TEST_CASE("second price agrees with a sort oracle") {
    RngStream g = derive_stream(1, "sp");
    for (int k = 0; k < 1000; ++k) {
      std::vector<double> v(2 + g.uniform_index(9));
      for (double& x : v) x = g.uniform_index(4) == 0 ? 0.5 : g.uniform();  // some ties
      const auto [w, p] = oracle::sorted_second_price(v);
      const SecondPriceOutcome out = second_price(v);
      CHECK(out.winner == w);
      CHECK(out.price == p);
      CHECK(out.price <= v[out.winner]);
    }
  }

  TEST_CASE("forced exploitation allocates to the highest estimate at the second price") {
    FeedbackMechanism mech = trained_on({0.9, 0.5});
    testing::FixedUtilityOracle oracle({0.9, 0.5});
    const auto ctx = testing::unit_contexts(2);
    const RoundRecord r = mech.run_round_forced(Branch::exploit, ctx, oracle);
    CHECK_FALSE(r.explored);
    CHECK(r.allocated == 0);
    CHECK(r.payment == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r.comparison_price() == r.payment);
    CHECK(r.payment <= r.estimates[r.allocated]);
  }

  TEST_CASE("exploitation ties go to the lowest index") {
    FeedbackMechanism mech = trained_on({0.4, 0.4, 0.2});
    testing::FixedUtilityOracle oracle({0.4, 0.4, 0.2});
    const RoundRecord r = mech.run_round_forced(Branch::exploit, testing::unit_contexts(3), oracle);
    CHECK(r.allocated == 0);
    CHECK(r.payment == doctest::Approx(0.4).epsilon(1e-14));
  }

  TEST_CASE("exploitation with one agent is an error") {
    FeedbackMechanism mech(1, 1, {}, 1);
    testing::FixedUtilityOracle oracle({0.5});
    CHECK_THROWS_AS(mech.run_round_forced(Branch::exploit, testing::unit_contexts(1), oracle), InputError);
  }

  TEST_CASE("forced exploration picks agents uniformly, free, at a uniform price") {
    FeedbackMechanism mech(3, 1, {}, 77);
    testing::FixedUtilityOracle oracle({0.2, 0.5, 0.8});
    const auto ctx = testing::unit_contexts(3);
    std::vector<int> wins(3, 0);
    double price_sum = 0.0;
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) {
      const RoundRecord r = mech.run_round_forced(Branch::explore, ctx, oracle);
      REQUIRE(r.explored);
      REQUIRE(r.payment == 0.0);
      REQUIRE(r.comparison_price() >= 0.0);
      REQUIRE(r.comparison_price() <= 1.0);
      ++wins[r.allocated];
      price_sum += r.comparison_price();
    }
    for (int w : wins) CHECK(std::abs(w / double(draws) - 1.0 / 3.0) < 0.02);
    CHECK(std::abs(price_sum / draws - 0.5) < 0.005);
  }

  TEST_CASE("exploration fraction under a constant rate is within 3 standard errors") {
    const double rate = 0.1;
    MechanismOptions opts;
    opts.schedule = {ScheduleKind::constant, 4, 0.05, 0, rate};
    const std::uint64_t horizon = 2000;
    std::size_t explored = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      FeedbackMechanism mech(4, 1, opts, sweep_seed(9, seed));
      testing::FixedUtilityOracle oracle({0.2, 0.4, 0.6, 0.8});
      for (std::uint64_t t = 0; t < horizon; ++t) explored += mech.run_round(testing::unit_contexts(4), oracle).explored;
    }
    const double total = 50.0 * horizon;
    const double se = std::sqrt(rate * (1 - rate) / total);
    CHECK(std::abs(explored / total - rate) < 3 * se);
  }

  TEST_CASE("models only learn from admitted rounds and non-winners are untouched") {
    for (auto policy : {TrainingPolicy::exploration_only, TrainingPolicy::all_allocations}) {
      MechanismOptions opts;
      opts.training = policy;
      FeedbackMechanism mech(3, 2, opts, 5);
      testing::LinearAgentsOracle oracle(population(3, 2, 1), 2);
      RngStream g = derive_stream(3, "ctx");
      std::vector<std::size_t> admitted(3, 0);
      for (int t = 0; t < 500; ++t) {
        std::vector<Context> ctx;
        for (int i = 0; i < 3; ++i) ctx.push_back(sample_simplex_context(2, g));
        oracle.set_contexts(ctx);
        const auto before = mech.models();
        const RoundRecord r = mech.run_round(ctx, oracle);
        if (r.explored || policy == TrainingPolicy::all_allocations) ++admitted[r.allocated];
        for (AgentIndex i = 0; i < 3; ++i) {
          if (i != r.allocated) REQUIRE(mech.models()[i].sample_count() == before[i].sample_count());
        }
        REQUIRE(r.truth.true_means.empty());
        if (policy == TrainingPolicy::all_allocations) REQUIRE(r.probe_estimates.size() == 3);
      }
      for (AgentIndex i = 0; i < 3; ++i) CHECK(mech.models()[i].sample_count() == admitted[i]);
    }
  }

  TEST_CASE("decisions depend only on reports: replaying answers reproduces the ledger") {
    const std::size_t n = 5, d = 3;
    auto play = [&](AgentOracle& oracle, testing::LinearAgentsOracle* agents) {
      FeedbackMechanism mech(n, d, {}, 31);
      RngStream g = derive_stream(8, "ctx");
      std::vector<RoundRecord> out;
      for (int t = 0; t < 3000; ++t) {
        std::vector<Context> ctx;
        for (std::size_t i = 0; i < n; ++i) ctx.push_back(sample_simplex_context(d, g));
        if (agents) agents->set_contexts(ctx);
        out.push_back(mech.run_round(ctx, oracle));
      }
      return out;
    };
    testing::LinearAgentsOracle agents(population(n, d, 4), 6);
    RecordingOracle recorder(agents);
    const auto live = play(recorder, &agents);
    ReplayOracle replay(recorder.log);
    const auto replayed = play(replay, nullptr);
    CHECK(replay.mismatches == 0);
    CHECK(live == replayed);
  }

  TEST_CASE("estimation error shrinks relative to the exploration rate") {
    const auto& runs = testing::default_sweep_20000();
    const auto delta = testing::cross_seed_mean(runs, [](const Run& r) { return delta_trace(r.records); });
    const auto rate = testing::cross_seed_mean(runs, [](const Run& r) {
      std::vector<double> e;
      for (const auto& rec : r.records) e.push_back(rec.eta);
      return e;
    });
    auto ratio_at = [&](std::size_t h) {
      double sd = 0.0, se = 0.0;
      for (std::size_t t = 0; t < h; ++t) {
        sd += delta[t];
        se += rate[t];
      }
      return sd / se;
    };
    const double early = ratio_at(2000), late = ratio_at(20000);
    MESSAGE("cumulative delta / cumulative eta: H=2000 " << early << ", H=20000 " << late);
    CHECK(late < early);
    CHECK(delta[19999] < delta[1999]);
  }
}
