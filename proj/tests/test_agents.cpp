#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fbauction/agents.hpp"
#include "fbauction/error.hpp"

using namespace fba;

namespace {

AgentSpec with_mean(double mu, NoiseModel noise) { return {{mu}, noise, {}, {}}; }

}  // namespace

TEST_SUITE("agents") {
  TEST_CASE("zero mean gives zero utility under both noise models") {
    RngStream g = derive_stream(1, "u");
    for (auto kind : {NoiseKind::bernoulli, NoiseKind::truncated_uniform}) {
      const AgentSpec s = with_mean(0.0, {kind, 0.2});
      for (int i = 0; i < 1000; ++i) REQUIRE(sample_utility(s, Context({1.0}), g) == 0.0);
    }
  }

  TEST_CASE("bernoulli utilities have the right mean") {
    RngStream g = derive_stream(2, "u");
    const AgentSpec s = with_mean(0.7, {NoiseKind::bernoulli, 0.0});
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const double u = sample_utility(s, Context({1.0}), g);
      REQUIRE((u == 0.0 || u == 1.0));
      sum += u;
    }
    CHECK(std::abs(sum / 100000 - 0.7) < 0.005);
  }

  TEST_CASE("truncated uniform utilities stay in the band and are unbiased") {
    RngStream g = derive_stream(3, "u");
    const AgentSpec s = with_mean(0.5, {NoiseKind::truncated_uniform, 0.2});
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const double u = sample_utility(s, Context({1.0}), g);
      REQUIRE(u >= 0.3);
      REQUIRE(u <= 0.7);
      sum += u;
    }
    CHECK(std::abs(sum / 100000 - 0.5) < 0.003);
  }

  TEST_CASE("conditional mean holds near the boundary") {
    RngStream g = derive_stream(4, "u");
    for (double mu : {0.05, 0.93}) {
      for (auto kind : {NoiseKind::bernoulli, NoiseKind::truncated_uniform}) {
        const AgentSpec s = with_mean(mu, {kind, 0.2});
        double sum = 0.0;
        for (int i = 0; i < 100000; ++i) {
          const double u = sample_utility(s, Context({1.0}), g);
          REQUIRE(u >= 0.0);
          REQUIRE(u <= 1.0);
          sum += u;
        }
        CHECK(std::abs(sum / 100000 - mu) < 0.005);
      }
    }
  }

  TEST_CASE("means outside the unit interval are a configuration error") {
    RngStream g = derive_stream(5, "u");
    const AgentSpec s{{1.0, 1.0}, {}, {}, {}};
    CHECK_THROWS_AS(sample_utility(s, Context({0.8, 0.8}), g), ConfigError);
    CHECK_THROWS_AS(sample_utility(s, Context({1.0}), g), InputError);
  }

  TEST_CASE("reporting rules") {
    RngStream g = derive_stream(6, "r");
    CHECK(report({StrategyKind::truthful}, 0.6, 0.6, g));
    CHECK_FALSE(report({StrategyKind::inverted}, 0.6, 0.3, g));
    CHECK_FALSE(report({StrategyKind::threshold_shift, 0.2}, 0.6, 0.5, g));
    CHECK(report({StrategyKind::threshold_shift, -0.2}, 0.4, 0.5, g));
    CHECK(report({StrategyKind::always_high}, 0.0, 1.0, g));
    CHECK_FALSE(report({StrategyKind::always_low}, 1.0, 0.0, g));
  }

  TEST_CASE("truthful reports are the threshold indicator on a grid") {
    RngStream g = derive_stream(7, "r");
    for (int i = 0; i <= 100; ++i)
      for (int j = 0; j <= 100; ++j) REQUIRE(report({}, i / 100.0, j / 100.0, g) == (i >= j));
  }

  TEST_CASE("random reports are deterministic given the stream") {
    RngStream a = derive_stream(8, "r"), b = derive_stream(8, "r");
    int yes = 0;
    for (int i = 0; i < 100000; ++i) {
      const bool x = report({StrategyKind::random, 0.5}, 0.3, 0.2, a);
      REQUIRE(x == report({StrategyKind::random, 0.5}, 0.9, 0.8, b));
      yes += x;
    }
    CHECK(std::abs(yes / 100000.0 - 0.5) < 0.005);
  }

  TEST_CASE("strategy text round-trips") {
    for (const char* s : {"truthful", "always_high", "always_low", "inverted", "random(0.5)",
                          "threshold_shift(0.2)", "threshold_shift(-0.2)"}) {
      CHECK(Strategy::parse(s).to_string() == s);
    }
    CHECK_THROWS_AS(Strategy::parse("greedy"), ConfigError);
    CHECK_THROWS_AS(Strategy::parse("random(1.5)"), ConfigError);
    CHECK_THROWS_AS(Strategy::parse("threshold_shift"), ConfigError);
  }

  TEST_CASE("toxicity utilities") {
    AgentSpec s{{}, {}, {}, ToxicityLabel::obscene};
    LabelSet labels;
    labels.set(static_cast<std::size_t>(ToxicityLabel::toxic));
    labels.set(static_cast<std::size_t>(ToxicityLabel::obscene));
    CHECK(toxicity_utility(s, labels).raw == -1.0);
    CHECK(toxicity_utility(s, labels).transformed == 0.0);

    s.sensitivity = ToxicityLabel::threat;
    CHECK(toxicity_utility(s, LabelSet{}).raw == 0.0);
    CHECK(toxicity_utility(s, LabelSet{}).transformed == 1.0);

    s.sensitivity = ToxicityLabel::insult;
    LabelSet insult;
    insult.set(static_cast<std::size_t>(ToxicityLabel::insult));
    CHECK(toxicity_utility(s, insult).transformed == 0.0);

    s.sensitivity.reset();
    CHECK_THROWS_AS(toxicity_utility(s, insult), ConfigError);
  }

  TEST_CASE("toxicity transform preserves the ranking of expected harm") {
    RngStream g = derive_stream(9, "tox");
    for (int k = 0; k < 200; ++k) {
      std::vector<double> harm(6);
      for (double& h : harm) h = g.uniform();  // P(label hits agent)
      std::vector<double> transformed(6);
      for (std::size_t i = 0; i < 6; ++i) transformed[i] = 1.0 - harm[i];
      CHECK(std::max_element(transformed.begin(), transformed.end()) - transformed.begin() ==
            std::min_element(harm.begin(), harm.end()) - harm.begin());
    }
  }

  TEST_CASE("simplex contexts keep linear means in the unit interval") {
    RngStream g = derive_stream(10, "ctx");
    for (int k = 0; k < 1000; ++k) {
      const Context w = sample_simplex_context(6, g);
      const auto f = w.features();
      REQUIRE(std::all_of(f.begin(), f.end(), [](double x) { return x >= 0.0; }));
      REQUIRE(std::accumulate(f.begin(), f.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
      const AgentSpec s{sample_theta(6, g), {}, {}, {}};
      const double mu = s.mean(w);
      REQUIRE(mu >= 0.0);
      REQUIRE(mu <= 1.0 + 1e-12);
    }
  }
}
