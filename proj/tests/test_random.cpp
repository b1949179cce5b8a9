#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "klhull/random.hpp"

using namespace klhull;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (Philox4x32Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
            (Philox4x32Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (Philox4x32Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(GaussianSampler, Deterministic) {
  GaussianSampler a(42), b(42);
  const auto x1 = sample_gaussian(a, 5), x2 = sample_gaussian(a, 5);
  EXPECT_NE(x1, x2);
  EXPECT_EQ(sample_gaussian(b, 5), x1);
  EXPECT_EQ(sample_gaussian(b, 5), x2);
  GaussianSampler c(43);
  EXPECT_NE(sample_gaussian(c, 5), x1);
}

TEST(GaussianSampler, SubstreamsAreDistinctAndReproducible) {
  const GaussianSampler root(7);
  std::set<double> first;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    GaussianSampler s = root.substream(i);
    first.insert(s.normal());
  }
  EXPECT_EQ(first.size(), 1000u);
  GaussianSampler a = root.substream(17), b = root.substream(17);
  EXPECT_EQ(a.normals(8), b.normals(8));
}

TEST(GaussianSampler, UniformInOpenUnitInterval) {
  GaussianSampler s(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(GaussianSampler, MomentsWithinClt) {
  const std::size_t n = 4;
  const int draws = 100000;
  GaussianSampler s(2024);
  std::vector<double> mean(n, 0.0);
  double sq = 0.0, sq2 = 0.0;
  for (int d = 0; d < draws; ++d) {
    const auto x = sample_gaussian(s, n);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mean[i] += x[i] / draws;
      r += x[i] * x[i];
    }
    sq += r / draws;
    sq2 += r * r / draws;
  }
  for (double m : mean) EXPECT_LT(std::abs(m), 0.01);
  EXPECT_LT(std::abs(sq - n), 3.0 * std::sqrt(2.0 * n / draws));
  // E|x|^4 = n(n + 2) for chi^2_n
  EXPECT_NEAR(sq2, n * (n + 2.0), 0.5);
}

TEST(GaussianSampler, TailFrequencyMatchesErf) {
  GaussianSampler s(99);
  const int draws = 200000;
  int beyond = 0;
  for (int d = 0; d < draws; ++d) beyond += std::abs(s.normal()) > 2.0;
  const double p = std::erfc(2.0 / std::sqrt(2.0));
  EXPECT_NEAR(double(beyond) / draws, p, 4.0 * std::sqrt(p * (1 - p) / draws));
}
