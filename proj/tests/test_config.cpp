#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "oracles.hpp"

using namespace wavetails;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "t.conf");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "accepted:\n" << text;
  return "";
}

}  // namespace

TEST(Config, ParsesAllSections) {
  const auto c = parse_config(R"(
# comment
[potential]
shape = tanh-power   ; trailing comment
k = 4
lambda = 0.25

[nonlinearity]
p = 5
b = 1, 0.5
epsilon = 0.1

[data]
family = bump
radius = 3
f = 0.5
g = 2

[grid]
dr = 0.05
mesh_ratio = 0.25
t_max = 80
r_obs = 2
series_stride = 4
precision = extended

[fit]
t1 = 20
t2 = 70
)");
  ASSERT_TRUE(c.potential && c.nonlinearity && c.fit);
  EXPECT_EQ(c.potential->k, 4);
  EXPECT_EQ(c.potential->lambda, 0.25);
  EXPECT_EQ(c.nonlinearity->p, 5);
  ASSERT_EQ(c.nonlinearity->b.size(), 2u);
  EXPECT_EQ(c.nonlinearity->b[1], 0.5);
  EXPECT_EQ(c.data.family, "bump");
  EXPECT_EQ(c.data.bump_g, 2.0);
  EXPECT_EQ(c.grid.dr, 0.05);
  EXPECT_EQ(c.grid.series_stride, 4);
  EXPECT_EQ(c.grid.precision, Precision::Extended);
  EXPECT_EQ(c.grid.r_max, 0.0);
  EXPECT_EQ(c.fit->t2, 70.0);
}

TEST(Config, LambdaV0IsDividedByV0) {
  const auto c = parse_config("[potential]\nk = 5\nlambda_V0 = 0.1\n");
  EXPECT_NEAR(c.potential->lambda * c.potential->V0, 0.1, 1e-15);
  EXPECT_NEAR(c.potential->lambda, 0.1 / PotentialSpec::tanh_power(5, 1).V0, 1e-15);
}

TEST(Config, NonlinearityWithoutPotential) {
  const auto c = parse_config("[nonlinearity]\np = 3\nepsilon = 0.1\n");
  EXPECT_FALSE(c.potential);
  ASSERT_TRUE(c.nonlinearity);
  EXPECT_EQ(c.data.family, "paper-gaussian");
}

TEST(Config, RejectsMistakesWithLineNumbers) {
  EXPECT_NE(config_error("[grid]\ndr = 0.1\n[bogus]\n").find("t.conf:3"), std::string::npos);
  EXPECT_NE(config_error("[grid]\n\ndx = 0.1\n").find("t.conf:3"), std::string::npos);
  EXPECT_NE(config_error("[grid]\ndr = 0.1\ndr = 0.2\n").find("t.conf:3"), std::string::npos);
  EXPECT_NE(config_error("[grid]\n[grid]\n").find("duplicate"), std::string::npos);
  EXPECT_NE(config_error("dr = 0.1\n").find("outside"), std::string::npos);
  EXPECT_NE(config_error("[potential]\nlambda = 1\nlambda_V0 = 1\n").find("t.conf:3"), std::string::npos);
  config_error("[grid]\ndr = fast\n");
  config_error("[grid]\nprecision = quad\n");
  config_error("[potential]\nshape = gaussian\n");
  config_error("[fit]\nt1 = 10\n");
  config_error("[grid\n");
  config_error("[grid]\njust words\n");
}

TEST(Config, FormatRoundTrip) {
  auto c = parse_config("[potential]\nk = 3\nlambda = 0.0123456789\n[nonlinearity]\np = 4\nb = 2, 3\nepsilon = 0.3\n"
                        "[grid]\ndr = 0.04\nt_max = 123\nprecision = extended\n[fit]\nt1 = 30\nt2 = 100\n");
  resolve_grid(c, 5.698);
  const auto d = parse_config(format_config(c));
  EXPECT_EQ(format_config(d), format_config(c));
  EXPECT_EQ(d.potential->lambda, c.potential->lambda);
  EXPECT_EQ(d.grid.r_max, c.grid.r_max);
  EXPECT_EQ(d.nonlinearity->b, c.nonlinearity->b);
}

TEST(Config, ResolveGridFillsRmax) {
  auto c = parse_config("[grid]\ndr = 0.1\nt_max = 50\nr_obs = 1\n");
  resolve_grid(c, 5.0);
  EXPECT_NEAR(c.grid.r_max, required_r_max(50, 1, 5.0) + 0.2, 1e-12);
  EXPECT_NO_THROW(c.validate(5.0));
}

TEST(Config, ShippedConfigsLoad) {
  for (const char* name : {"linear_k3", "cubic", "crossover", "perturb_k5", "perturb_weak", "free_bump"}) {
    const std::string path = std::string(WAVE_TAILS_SOURCE) + "/configs/" + name + ".conf";
    EXPECT_NO_THROW(load_config(path)) << path;
  }
}

TEST(Config, MissingFileIsIoError) {
  try {
    load_config("/nonexistent/x.conf");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}
