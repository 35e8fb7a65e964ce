#include <gtest/gtest.h>

#include <set>

#include "backflow/error.hpp"
#include "csv.hpp"
#include "runner.hpp"
#include "scenario.hpp"
#include "toml.hpp"

using namespace lab;

TEST(Toml, TablesValuesAndComments) {
  const auto j = parse_toml(R"(# header
scenario = "custom"  # trailing
[state]
kind = 'bracken_melloy'
epsilon = 0.5
[grid]
n_samples = 1_025
t_max = 2e-1
flags = [1, 2.5, "x"]
on = true
[a.b]
c = -3
)");
  EXPECT_EQ(j["scenario"], "custom");
  EXPECT_EQ(j["state"]["kind"], "bracken_melloy");
  EXPECT_DOUBLE_EQ(j["state"]["epsilon"].get<double>(), 0.5);
  EXPECT_TRUE(j["grid"]["n_samples"].is_number_integer());
  EXPECT_EQ(j["grid"]["n_samples"], 1025);
  EXPECT_DOUBLE_EQ(j["grid"]["t_max"].get<double>(), 0.2);
  EXPECT_EQ(j["grid"]["flags"].size(), 3u);
  EXPECT_EQ(j["grid"]["on"], true);
  EXPECT_EQ(j["a"]["b"]["c"], -3);
}

TEST(Toml, ErrorsNameTheLine) {
  try {
    parse_toml("a = 1\nb = \n");
    FAIL();
  } catch (const backflow::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_toml("a = 1\na = 2\n"), backflow::ConfigError);
  EXPECT_THROW(parse_toml("[t\n"), backflow::ConfigError);
  EXPECT_THROW(parse_toml("s = \"open\n"), backflow::ConfigError);
  EXPECT_THROW(parse_toml("x = 1 2\n"), backflow::ConfigError);
  EXPECT_THROW(parse_toml("a = 1\n[a]\n"), backflow::ConfigError);
}

TEST(Catalogue, OneRowPerFigureAndStableOrder) {
  const auto& c = scenario_catalogue();
  std::set<int> figures;
  for (const auto& s : c)
    if (s.figure > 0) figures.insert(s.figure);
  EXPECT_EQ(figures, (std::set<int>{1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(c.size(), 11u);
  EXPECT_STREQ(c.front().name, "fig1a");
  EXPECT_STREQ(c.back().name, "custom");
  EXPECT_EQ(parse_scenario_name("fig8b"), ScenarioKind::Fig8b);
  EXPECT_THROW(parse_scenario_name("fig9"), backflow::ConfigError);
}

TEST(Config, CustomNeedsEveryField) {
  auto tree = parse_toml(R"(scenario = "custom"
[state]
kind = "exponential"
[model]
kind = "milburn"
lambda_inv = 0.01
[grid]
n_samples = 65
)");
  try {
    config_from_tree(tree);
    FAIL();
  } catch (const backflow::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("grid.t_max"), std::string::npos) << e.what();
  }
  tree["grid"]["t_max"] = 0.5;
  const auto c = config_from_tree(tree);
  EXPECT_EQ(c.n_samples, 65);
  EXPECT_TRUE(c.model.has_value());
  tree["model"].erase("lambda_inv");
  EXPECT_THROW(config_from_tree(tree), backflow::ConfigError);
}

TEST(Config, FigureScenariosPinStateAndModel) {
  auto tree = parse_toml("scenario = \"fig4\"\n[state]\nkind = \"exponential\"\n");
  EXPECT_THROW(config_from_tree(tree), backflow::ConfigError);
  const auto c = config_from_tree(parse_toml("scenario = \"fig4\"\n[grid]\nn_samples = 11\n"));
  EXPECT_EQ(c.n_samples, 11);
  EXPECT_DOUBLE_EQ(c.t_max, 3.0);
  EXPECT_THROW(config_from_tree(parse_toml("scenario = \"fig4\"\nextra = 1\n")), backflow::ConfigError);
  EXPECT_THROW(config_from_tree(parse_toml("scenario = \"fig4\"\n[grid]\nn_samples = 1.5\n")),
               backflow::ConfigError);
}

TEST(Config, FlagsWinOverFile) {
  auto c = config_from_tree(parse_toml("scenario = \"fig7\"\n[grid]\nt_max = 2.0\n"));
  Overrides o;
  o.t_max = 1.0;
  o.out_dir = "elsewhere";
  apply_overrides(c, o);
  EXPECT_DOUBLE_EQ(c.t_max, 1.0);
  EXPECT_EQ(c.out_dir, "elsewhere");
  o.t_max = -1.0;
  EXPECT_THROW(apply_overrides(c, o), backflow::ConfigError);
}

TEST(Csv, SeventeenDigitsAndLayout) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_short(0.1), "0.1");
  CsvTable t{"x.csv", {{"k", "v"}}, {"a", "b"}, {{1.0, 2.5}}};
  EXPECT_EQ(to_csv(t), "# k: v\na,b\n1,2.5\n");
  t.rows.push_back({1.0});
  EXPECT_THROW(to_csv(t), backflow::ContractViolation);
}

namespace {

std::vector<std::string> rendered(const ScenarioConfig& c) {
  std::vector<std::string> out;
  for (const auto& t : compute(c).tables) out.push_back(to_csv(t));
  return out;
}

}  // namespace

TEST(Run, Fig4ColumnsAndValues) {
  const auto r = compute(default_config(ScenarioKind::Fig4));
  ASSERT_EQ(r.tables.size(), 1u);
  const auto& t = r.tables[0];
  EXPECT_EQ(t.columns, (std::vector<std::string>{"T", "pr_p_neg_kappa_5", "pr_p_neg_kappa_15", "pr_x_neg_kappa_5",
                                                 "pr_x_neg_kappa_15"}));
  EXPECT_EQ(t.rows.size(), 601u);
  EXPECT_DOUBLE_EQ(t.rows[0][3], 0.5);
}

TEST(Run, DeterministicAcrossRunsAndThreads) {
  auto c = default_config(ScenarioKind::Fig8b);
  c.n_samples = 257;
  const auto a = rendered(c);
  c.threads = 3;
  EXPECT_EQ(a, rendered(c));
  auto f7 = default_config(ScenarioKind::Fig7);
  EXPECT_EQ(rendered(f7), rendered(f7));
  ASSERT_EQ(compute(f7).tables.size(), 2u);
}

TEST(Run, CustomWritesCurrentAndNegativePart) {
  auto c = config_from_tree(parse_toml(R"(scenario = "custom"
[state]
kind = "bracken_melloy"
epsilon = 1.0
[model]
kind = "scaled_free"
epsilon = 1.0
[grid]
t_max = 0.05
n_samples = 101
)"));
  const auto r = compute(c);
  const auto& t = r.tables.at(0);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"T", "J", "J_neg"}));
  EXPECT_NEAR(t.rows[0][1], -36.0 / (35.0 * backflow::kPi), 1e-9);
  EXPECT_DOUBLE_EQ(t.rows[0][2], -t.rows[0][1]);
  EXPECT_EQ(r.diagnostics["backflow"]["intervals"].size(), 1u);
}
