#include "phonon/config.hpp"
#include "phonon/errors.hpp"

#include <gtest/gtest.h>

#include "json.hpp"

#include <string>

using namespace phonon;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, EmptyObjectGivesDeskDefaults) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c.preset, "desk");
  EXPECT_EQ(c.setup.grid.n_mu, 40);
  EXPECT_EQ(c.setup.grid.n_omega, 10);
  EXPECT_EQ(c.epsilons, (std::vector<double>{0.25, 0.5, 1.0, 2.0, 4.0}));
  EXPECT_EQ(c.setup.sources.size(), 10u);
  const auto j = nlohmann::ordered_json::parse(c.resolved_json);
  EXPECT_EQ(j["grid"]["n_mu"], 40);
  EXPECT_EQ(j["eta"]["a"], 1.5);
  EXPECT_EQ(j["schema_version"], 1);
}

TEST(Config, UnknownKeyNamesPath) {
  const auto msg = error_of(R"({"grid": {"nmu": 10}})");
  EXPECT_NE(msg.find("grid.nmu"), std::string::npos) << msg;
  EXPECT_NE(msg.find("unknown key"), std::string::npos);
}

TEST(Config, TypeErrorsNamePath) {
  EXPECT_NE(error_of(R"({"grid": {"n_mu": "many"}})").find("grid.n_mu"), std::string::npos);
  EXPECT_NE(error_of(R"({"grid": {"n_mu": 41}})").find("even"), std::string::npos);
  EXPECT_NE(error_of(R"({"solver": {"scattering": "mie"}})").find("solver.scattering"), std::string::npos);
  EXPECT_NE(error_of(R"({"epsilons": []})").find("epsilons"), std::string::npos);
  EXPECT_NE(error_of("{").find("not valid JSON"), std::string::npos);
}

TEST(Config, NonPositiveRelaxationTimeRejected) {
  const auto msg =
      error_of(R"({"material": {"tau": {"kind": "table", "rows": [[0.1, 1.0], [1.25, 0.0]]}}})");
  EXPECT_NE(msg.find("material.tau"), std::string::npos) << msg;
  EXPECT_NE(msg.find("1.25"), std::string::npos) << msg;
}

TEST(Config, SchemaVersionChecked) {
  EXPECT_NE(error_of(R"({"schema_version": 2})").find("schema_version"), std::string::npos);
}

TEST(Config, FullSweepConfig) {
  const auto c = load_config(std::string(PHONON_CONFIG_DIR) + "/fig6_full.json");
  EXPECT_EQ(c.preset, "full");
  EXPECT_EQ(c.setup.grid.n_mu, 200);
  EXPECT_EQ(c.setup.grid.n_omega, 40);
  EXPECT_EQ(c.epsilons, (std::vector<double>{0.125, 0.25, 0.5, 1.0, 4.0}));
  EXPECT_EQ(c.sweep.lambda_stride, 10);
  EXPECT_EQ(c.setup.sources.size(), 40u);
}

TEST(Config, AllShippedConfigsLoad) {
  for (const char* name :
       {"cor33_desk", "cor33_desk_noisy", "cor33_full", "fig2_desk", "fig2_desk_pointwise", "fig2_full",
        "fig3_desk", "fig3_full", "fig4_desk", "fig5_desk", "fig5_full", "fig6_desk", "fig6_desk_l1",
        "fig6_full", "stress_coupled_desk", "stress_desk", "thm34_desk", "thm34_exponent", "thm34_full"}) {
    EXPECT_NO_THROW(load_config(std::string(PHONON_CONFIG_DIR) + "/" + name + ".json")) << name;
  }
}

TEST(Config, OverridesReResolve) {
  auto c = parse_config("{}");
  apply_overrides(c, 3, 11);
  EXPECT_EQ(c.setup.jobs, 3);
  EXPECT_EQ(c.noise.seed, 11u);
  const auto j = nlohmann::ordered_json::parse(c.resolved_json);
  EXPECT_EQ(j["jobs"], 3);
}
