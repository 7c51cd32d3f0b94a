#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "fuzzytune/io.hpp"
#include "fuzzytune/random.hpp"
#include "fuzzytune/svg.hpp"

using namespace fuzzytune;
using namespace fuzzytune::io;

namespace {

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

std::string params_text(const ControllerParams& p) {
  std::ostringstream out;
  write_params(out, p);
  return out.str();
}

int parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_run_config(in);
  } catch (const ParseError& e) {
    return static_cast<int>(e.line());
  }
  return -1;
}

}  // namespace

TEST(ParseDouble, Cases) {
  EXPECT_EQ(parse_double("1.5"), 1.5);
  EXPECT_EQ(parse_double("+2"), 2.0);
  EXPECT_EQ(parse_double("-3e-2"), -0.03);
  EXPECT_FALSE(parse_double(""));
  EXPECT_FALSE(parse_double("1.5x"));
  EXPECT_FALSE(parse_double("abc"));
  EXPECT_FALSE(parse_double("+"));
}

TEST(Params, RoundTripIsExactProperty) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    ParamVector v;
    for (double& x : v) x = rng.uniform(-1, 1);
    ScalingGains gains{rng.uniform(0.01, 5), rng.uniform(0.01, 5), rng.uniform(-50, 50)};
    const ControllerParams p = decode(repair(v), gains);
    std::istringstream in(params_text(p));
    const ControllerParams back = read_params(in);
    EXPECT_EQ(encode(back), encode(p));
    EXPECT_EQ(back.gains.ge, p.gains.ge);
    EXPECT_EQ(back.gains.gde, p.gains.gde);
    EXPECT_EQ(back.gains.gu, p.gains.gu);
  }
}

TEST(Params, AcceptsCommentsAndWhitespace) {
  std::istringstream in(
      "# tuned\n\n a1=-0.5\na2 = 0\na3 = 0.5\nb1 = -0.5\nb2 = 0\nb3 = 0.5\n"
      "c1 = -1\nc2 = 0\nc3 = 1\nGe = 1\nGde = 0.5\nGu = -20\n");
  const ControllerParams p = read_params(in);
  EXPECT_EQ(p.e_mf.a1, -0.5);
  EXPECT_EQ(p.gains.gu, -20.0);
}

TEST(Params, RejectsMissingKey) {
  std::string text = params_text(ControllerParams{});
  text.erase(text.find("b2 ="), text.find('\n', text.find("b2 =")) + 1 - text.find("b2 ="));
  std::istringstream in(text);
  try {
    read_params(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("b2"), std::string::npos);
  }
}

TEST(Params, RejectsUnorderedTripleNamingIt) {
  ControllerParams p;
  p.de_mf = {0.5, 0.0, -0.5};
  std::istringstream in(params_text(p));
  try {
    read_params(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("b1,b2,b3"), std::string::npos) << e.what();
  }
}

TEST(Params, RejectsBadNumberWithLine) {
  std::string text = params_text(ControllerParams{});
  text.replace(text.find("a2 = 0"), 6, "a2 = zero");
  std::istringstream in(text);
  try {
    read_params(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(RunConfigIo, DefaultsRoundTrip) {
  std::ostringstream out;
  write_run_config(out, RunConfig{});
  std::istringstream in(out.str());
  EXPECT_EQ(read_run_config(in), RunConfig{});
}

TEST(RunConfigIo, NormalizedRoundTrip) {
  std::istringstream in(
      "seed = 42\ngenerations=3\nts_scope = all\ndynamics = verbatim\n"
      "theta0 = 0.4\nGu = -12.5\nswarm_size = 8\noutput_dir = runs/a\n");
  const RunConfig c = read_run_config(in);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.hybrid.generations, 3u);
  EXPECT_EQ(c.hybrid.ts_scope, TsScope::AllParticles);
  EXPECT_EQ(c.plant.form, DynamicsForm::PaperVerbatim);
  EXPECT_EQ(c.sim.theta0, 0.4);
  EXPECT_EQ(c.gains.gu, -12.5);
  EXPECT_EQ(c.output_dir, "runs/a");

  std::ostringstream first;
  write_run_config(first, c);
  std::istringstream again(first.str());
  std::ostringstream second;
  write_run_config(second, read_run_config(again));
  EXPECT_EQ(first.str(), second.str());
}

TEST(RunConfigIo, EffectiveHybridPropagatesSeedAndBounds) {
  RunConfig c;
  c.seed = 9;
  c.hybrid.pso.pmin = -0.5;
  const HybridConfig h = c.effective_hybrid();
  EXPECT_EQ(h.pso.seed, 9u);
  EXPECT_EQ(h.tabu.lower, -0.5);
  EXPECT_EQ(h.tabu.upper, 1.0);
}

TEST(RunConfigIo, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("seed = 1\n\nbogus = 3\n"), 3);
  EXPECT_EQ(parse_error_line("# c\nswarm_size = many\n"), 2);
  EXPECT_EQ(parse_error_line("ts_scope = everything\n"), 1);
  EXPECT_EQ(parse_error_line("seed = 1\nseed = 2\n"), 2);
  EXPECT_EQ(parse_error_line("no equals sign\n"), 1);
  EXPECT_EQ(parse_error_line("seed = -1\n"), 1);
}

TEST(RunConfigIo, CrossFieldValidation) {
  EXPECT_EQ(parse_error_line("swarm_size = 1\n"), 0);
  EXPECT_EQ(parse_error_line("sample_period = 0\n"), 0);
  EXPECT_EQ(parse_error_line("Ge = -1\n"), 0);
  EXPECT_EQ(parse_error_line("pole_length = 0\n"), 0);
  EXPECT_EQ(parse_error_line("pmin = 1\n"), 0);
}

TEST(Csv, TraceParsesBack) {
  Trace t;
  t.samples.push_back({0.0, 0.22, 0.0, -1.5, -0.22});
  t.samples.push_back({0.01, 0.2199, -0.02, -1.4, -0.2199});
  std::ostringstream out;
  write_trace_csv(out, t);
  std::istringstream in(out.str());
  const CsvTable table = read_csv(in);
  EXPECT_EQ(table.header, (std::vector<std::string>{"t", "theta", "theta_dot", "u", "e"}));
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.numeric_column(*table.column("theta"))[1], 0.2199);
  EXPECT_EQ(table.numeric_column(*table.column("u"))[0], -1.5);
}

TEST(Csv, HistoryParsesBack) {
  OptimizationHistory h(2);
  h[0] = {Phase::Pso, 1, 0, 20, 0.5, {}};
  h[1] = {Phase::Ts, 1, 1, 30, 0.123456789012345678, {}};
  std::ostringstream out;
  write_history_csv(out, h);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), kHistoryHeader);
  std::istringstream in(out.str());
  const CsvTable table = read_csv(in);
  EXPECT_EQ(table.rows[0][0], "pso");
  EXPECT_EQ(table.rows[1][0], "ts");
  EXPECT_EQ(table.numeric_column(*table.column("best_mse"))[1], 0.123456789012345678);
  EXPECT_EQ(table.numeric_column(*table.column("evaluations"))[1], 30.0);
}

TEST(Csv, SweepSummaryMarksUnsettled) {
  std::vector<SweepRow> rows(2);
  rows[0] = {0.22, true, 0.35, 0.001};
  rows[1] = {0.8, false, std::nullopt, 0.3};
  std::ostringstream out;
  write_sweep_summary(out, rows);
  std::istringstream in(out.str());
  const CsvTable table = read_csv(in);
  EXPECT_EQ(table.rows[0][1], "true");
  EXPECT_EQ(table.rows[1][1], "false");
  EXPECT_EQ(table.rows[1][2], "none");
}

TEST(Csv, RaggedRowIsRejected) {
  std::istringstream in("a,b\n1,2\n3\n");
  try {
    read_csv(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Svg, DeterministicAndStructured) {
  const std::vector<double> xs{0, 1, 2, 3};
  const std::vector<svg::Series> series{{"theta", {0.2, 0.1, 0.05, 0.0}}, {"u", {-1, -0.5, 0.2, 0}}};
  const std::string a = svg::line_chart(xs, series, {});
  const std::string b = svg::line_chart(xs, series, {});
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("<svg xmlns"), std::string::npos);
  EXPECT_NE(a.find("</svg>"), std::string::npos);
  EXPECT_EQ(count(a, "<polyline class=\"series\""), 2u);
  EXPECT_NE(a.find("data-name=\"theta\""), std::string::npos);
}

TEST(Svg, EscapesNames) {
  const std::string s = svg::line_chart({0, 1}, {{"a<b&c", {0, 1}}}, {});
  EXPECT_EQ(s.find("a<b"), std::string::npos);
  EXPECT_NE(s.find("a&lt;b&amp;c"), std::string::npos);
}

#ifdef FUZZYTUNE_SOURCE_DIR
TEST(RunConfigIo, ShippedDefaultMatchesBuiltInDefaults) {
  std::ifstream in(std::string(FUZZYTUNE_SOURCE_DIR) + "/configs/default.cfg");
  ASSERT_TRUE(in);
  EXPECT_EQ(read_run_config(in), RunConfig{});
}
#endif
