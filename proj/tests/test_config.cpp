#include <doctest.h>

#include <string>

#include "fbauction/config.hpp"
#include "fbauction/error.hpp"
#include "fbauction/experiment.hpp"

using namespace fba;

namespace {

std::string error_of(const std::string& text) {
  try {
    ExperimentConfig::parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults describe ten agents over 5000 rounds in 30 dimensions") {
    const ExperimentConfig c = ExperimentConfig::parse("");
    CHECK(c.agents == 10);
    CHECK(c.horizon == 5000);
    CHECK(c.dim == 30);
    CHECK(c.schedule_kind == ScheduleKind::slow);
    CHECK(c.training == TrainingPolicy::exploration_only);
    CHECK(c.seed_count == 20);
  }

  TEST_CASE("dotted keys, comments and whitespace") {
    const ExperimentConfig c = ExperimentConfig::parse(
        "# experiment\n"
        "horizon = 200   # short\n"
        "  schedule.kind=fast\n"
        "\n"
        "deviant.agent = 3\n"
        "deviant.strategy = threshold_shift(-0.2)\n"
        "noise.kind = bernoulli\n"
        "population.sensitivities = obscene,threat,toxic,insult\n"
        "agents = 4\n");
    CHECK(c.horizon == 200);
    CHECK(c.schedule_kind == ScheduleKind::fast);
    CHECK(c.noise.kind == NoiseKind::bernoulli);
    CHECK(c.sensitivity_of(1) == ToxicityLabel::threat);
    CHECK_THROWS_AS(ExperimentConfig::parse("agents = 2\ndeviant.agent = 3\n"), ConfigError);
  }

  TEST_CASE("unknown keys are listed") {
    const std::string e = error_of("horizon = 10\nfrobnicate = 1\nschedule.speed = 2\n");
    CHECK(e.find("frobnicate") != std::string::npos);
    CHECK(e.find("schedule.speed") != std::string::npos);
  }

  TEST_CASE("invalid values are rejected") {
    CHECK_THROWS_AS(ExperimentConfig::parse("horizon = 0\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("agents = 1\n"), ConfigError);
    CHECK_NOTHROW(ExperimentConfig::parse("agents = 1\nmechanism = uniform\n"));
    CHECK_THROWS_AS(ExperimentConfig::parse("schedule.epsilon = 0\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("horizon = ten\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("mechanism = vcg\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("deviant.strategy = inverted\n"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("data.source = toxicity_proxy\ndim = 5\n"), ConfigError);
    CHECK(error_of("horizon = 1\nhorizon = 2\n").find("line 2") != std::string::npos);
    CHECK(error_of("horizon 5\n").find("line 1") != std::string::npos);
  }

  TEST_CASE("echo lists every key and parses back to the same configuration") {
    ExperimentConfig c;
    c.horizon = 123;
    c.deviant_agent = 4;
    c.deviant_strategy = Strategy::parse("random(0.5)");
    c.price_exponent = 2.0;
    const auto echo = c.to_map();
    std::size_t n = 0;
    for (const auto& key : config_keys()) n += echo.count(key);
    CHECK(n == config_keys().size());
    CHECK(echo.size() == config_keys().size());
    CHECK(echo.at("learner.min_samples") == "30");
    CHECK(ExperimentConfig::parse(c.to_text()).to_map() == echo);
  }

  TEST_CASE("run metadata carries the effective configuration") {
    ExperimentConfig c;
    c.horizon = 5;
    c.dim = 3;
    c.price_exponent = 2.0;
    const Run run = simulate(c, 0);
    CHECK(run.meta.config == c.to_map());
    CHECK_FALSE(run.meta.identification_valid);
    CHECK(run.meta.code_version == kCodeVersion);
  }

  TEST_CASE("loading a missing file is an io error") {
    CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/fbauction.cfg"), IoError);
  }
}
