#include <cmath>

#include <gtest/gtest.h>

#include "qboost/config_space.hpp"
#include "qboost/encoding.hpp"
#include "qboost/random.hpp"

namespace qboost {
namespace {

void expect_vector_near(const ConfigVector& got, const std::vector<double>& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "coordinate " << i;
}

TEST(EncodingLayout, DecisionTreeHasFiveCoordinates) {
  const EncodingLayout layout(decision_tree_space());
  EXPECT_EQ(layout.dims(), 5u);
  EXPECT_DOUBLE_EQ(layout.max_distance(), 5.0);
}

TEST(EncodingLayout, SvmHasTwoCoordinates) {
  const EncodingLayout layout(svm_space());
  EXPECT_EQ(layout.dims(), 2u);
  EXPECT_DOUBLE_EQ(layout.max_distance(), 2.0);
}

TEST(EncodingLayout, ThreeLabelCategorical) {
  const EncodingLayout layout(ConfigSpace({ParamSpec::categorical("c", {"a", "b", "c"}, "a")}));
  EXPECT_EQ(layout.dims(), 3u);
  EXPECT_DOUBLE_EQ(layout.max_distance(), 3.0);
}

TEST(Encode, UpperBoundMapsToOne) {
  const ConfigSpace space({ParamSpec::integer("n", 4, 12, 8)});
  const auto v = encode(EncodingLayout(space), space, space.make({{"n", std::int64_t{12}}}));
  EXPECT_DOUBLE_EQ(v[0], 1.0);
}

TEST(Encode, SvmCOfOneIsQuarter) {
  const ConfigSpace space = svm_space();
  const auto v = encode(EncodingLayout(space), space, space.make({{"tol", 1e-4}, {"C", 1.0}}));
  // 1 = 2^0 inside 2^-5 .. 2^15
  EXPECT_NEAR(v[1], (0.0 - -5.0) / (15.0 - -5.0), 1e-12);
}

TEST(Encode, EntropyIsSecondOneHotSlot) {
  const ConfigSpace space = decision_tree_space();
  Configuration c = default_config(space);
  c[0] = std::string("entropy");
  const auto v = encode(EncodingLayout(space), space, c);
  EXPECT_EQ(v[0], 0.0);
  EXPECT_EQ(v[1], 1.0);
}

TEST(Encode, InvalidConfigurationRejected) {
  const ConfigSpace space = svm_space();
  EXPECT_THROW(encode(EncodingLayout(space), space, space.make({{"tol", 1e-4}, {"C", 0.0}})),
               SpaceError);
}

TEST(Encode, DefaultGoldenVectors) {
  {
    const ConfigSpace s = random_forest_space();
    expect_vector_near(encode(EncodingLayout(s), s, default_config(s)),
                       {0.5 / 0.6, 0.46 / 0.6, 28.0 / 60.0, 19.0 / 99.0, 1.0}, 1e-12);
  }
  {
    const ConfigSpace s = decision_tree_space();
    expect_vector_near(encode(EncodingLayout(s), s, default_config(s)), {1, 0, 1, 0, 0}, 0.0);
  }
  {
    // tol: 1e-4 is one decade into four; C as above
    const ConfigSpace s = svm_space();
    expect_vector_near(encode(EncodingLayout(s), s, default_config(s)), {0.25, 0.25}, 1e-12);
  }
}

TEST(Encode, UnitMapRoundTrips) {
  const auto c = ParamSpec::log_real("C", 0.03125, 32768.0, 1.0);
  for (double x : {0.03125, 0.5, 1.0, 100.0, 32768.0}) EXPECT_NEAR(from_unit(c, to_unit(c, x)), x, 1e-9 * x);
}

TEST(EncodeProperties, CoordinatesBoundedAndDistanceAtMostM) {
  for (const auto& space : {random_forest_space(), decision_tree_space(), svm_space()}) {
    const EncodingLayout layout(space);
    Rng rng = make_rng(21);
    for (int i = 0; i < 10000; ++i) {
      const auto a = encode(layout, space, sample(space, rng));
      const auto b = encode(layout, space, sample(space, rng));
      for (double x : a) {
        ASSERT_GE(x, 0.0);
        ASSERT_LE(x, 1.0);
      }
      ASSERT_LE(manhattan(a, b), layout.max_distance() + 1e-12);
    }
  }
}

TEST(EncodeProperties, OneHotBlocksHaveSingleOne) {
  const ConfigSpace space = decision_tree_space();
  const EncodingLayout layout(space);
  Rng rng = make_rng(22);
  for (int i = 0; i < 1000; ++i) {
    const auto v = encode(layout, space, sample(space, rng));
    EXPECT_EQ(v[0] + v[1], 1.0);
    EXPECT_TRUE(v[0] == 0.0 || v[0] == 1.0);
  }
}

TEST(EncodeProperties, InjectiveOnSamples) {
  for (const auto& space : {random_forest_space(), decision_tree_space(), svm_space()}) {
    const EncodingLayout layout(space);
    Rng rng = make_rng(23);
    for (int i = 0; i < 5000; ++i) {
      const auto a = sample(space, rng);
      const auto b = sample(space, rng);
      if (encode(layout, space, a) == encode(layout, space, b)) EXPECT_EQ(a, b);
      else EXPECT_NE(a, b);
    }
  }
}

TEST(EncodeInto, MatchesEncode) {
  const ConfigSpace space = random_forest_space();
  const EncodingLayout layout(space);
  Rng rng = make_rng(24);
  std::vector<double> buffer(layout.dims());
  for (int i = 0; i < 100; ++i) {
    const auto c = sample(space, rng);
    encode_into(layout, space, c, buffer);
    EXPECT_EQ(buffer, encode(layout, space, c));
  }
}

}  // namespace
}  // namespace qboost
