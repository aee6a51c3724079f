#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "bpguard/stats.hpp"
#include "oracles.hpp"

using namespace bpguard;
using namespace bpguard::stats;

namespace {

Matrix to_matrix(const oracle::Rows& rows) {
  Matrix m;
  for (const auto& r : rows) m.append_row(r);
  return m;
}

template <typename F>
void expect_error(F&& f, const std::string& code) {
  try {
    f();
    FAIL() << "expected error " << code;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

// Random orthonormal matrix: Gram-Schmidt on a Gaussian matrix.
Matrix random_rotation(std::mt19937_64& gen, std::size_t p) {
  auto g = oracle::gaussian_rows(gen, p, p);
  for (std::size_t c = 0; c < p; ++c) {
    for (std::size_t k = 0; k < c; ++k) {
      double d = 0;
      for (std::size_t r = 0; r < p; ++r) d += g[r][c] * g[r][k];
      for (std::size_t r = 0; r < p; ++r) g[r][c] -= d * g[r][k];
    }
    double n = 0;
    for (std::size_t r = 0; r < p; ++r) n += g[r][c] * g[r][c];
    for (std::size_t r = 0; r < p; ++r) g[r][c] /= std::sqrt(n);
  }
  return to_matrix(g);
}

std::vector<double> normal_sample(std::mt19937_64& gen, std::size_t n, double mu, double sd) {
  std::normal_distribution<double> d(mu, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = d(gen);
  return v;
}

}  // namespace

// column_means

TEST(ColumnMeans, Midpoint) {
  EXPECT_EQ(column_means(Matrix{{1, 2, 3}, {3, 4, 5}}), (std::vector<double>{2, 3, 4}));
}

TEST(ColumnMeans, SingleRow) { EXPECT_EQ(column_means(Matrix{{7, 7}}), (std::vector<double>{7, 7})); }

TEST(ColumnMeans, EmptyThrows) {
  expect_error([] { column_means(Matrix{}); }, "empty-sample");
}

TEST(ColumnMeans, MatchesResummation) {
  std::mt19937_64 gen(11);
  const auto rows = oracle::random_rows(gen, 100, 3);
  const auto m = column_means(to_matrix(rows));
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(m[j], oracle::sum(oracle::column(rows, j)) / 100.0, 1e-12);
}

// covariance_matrix

TEST(Covariance, ConstantRowsGiveZero) {
  const auto c = covariance_matrix(Matrix{{4, 1}, {4, 1}, {4, 1}});
  for (double v : c.data()) EXPECT_EQ(v, 0.0);
}

TEST(Covariance, PerfectlyCorrelated) {
  EXPECT_EQ(covariance_matrix(Matrix{{0, 0}, {2, 2}}), (Matrix{{2, 2}, {2, 2}}));
}

TEST(Covariance, MatchesPairwiseLoop) {
  std::mt19937_64 gen(12);
  const auto rows = oracle::random_rows(gen, 50, 3, -5, 5);
  const auto c = covariance_matrix(to_matrix(rows));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      EXPECT_NEAR(c(a, b), oracle::pairwise_covariance(oracle::column(rows, a), oracle::column(rows, b)), 1e-10);
      EXPECT_EQ(c(a, b), c(b, a));
    }
}

TEST(Covariance, NeedsTwoRows) {
  expect_error([] { covariance_matrix(Matrix{{1, 2}}); }, "insufficient-observations");
}

// eigendecompose_symmetric

TEST(Eigen, Identity) {
  const auto e = eigendecompose_symmetric(Matrix::identity(3));
  EXPECT_EQ(e.latents, (std::vector<double>{1, 1, 1}));
}

TEST(Eigen, DiagonalGivesPermutedIdentity) {
  const auto e = eigendecompose_symmetric(Matrix{{2, 0, 0}, {0, 5, 0}, {0, 0, 1}});
  EXPECT_EQ(e.latents, (std::vector<double>{5, 2, 1}));
  EXPECT_EQ(e.vectors, (Matrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}));
}

TEST(Eigen, AsymmetricThrows) {
  expect_error([] { eigendecompose_symmetric(Matrix{{1, 2}, {3, 1}}); }, "not-symmetric");
}

TEST(Eigen, RandomSymmetricSatisfiesEigenEquation) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 50; ++trial) {
    auto r = oracle::random_rows(gen, 5, 5, -3, 3);
    Matrix m(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) m(i, j) = r[i][j] + r[j][i];
    const auto e = eigendecompose_symmetric(m);
    for (std::size_t j = 0; j < 5; ++j) {
      double resid = 0, big = 0;
      for (std::size_t i = 0; i < 5; ++i) {
        double mv = 0;
        for (std::size_t k = 0; k < 5; ++k) mv += m(i, k) * e.vectors(k, j);
        resid += std::pow(mv - e.latents[j] * e.vectors(i, j), 2);
        if (std::abs(e.vectors(i, j)) > std::abs(big)) big = e.vectors(i, j);
      }
      EXPECT_LT(std::sqrt(resid), 1e-8);
      EXPECT_GT(big, 0.0);  // sign convention
      if (j) EXPECT_GE(e.latents[j - 1], e.latents[j]);
      for (std::size_t k = 0; k < 5; ++k) {
        double d = 0;
        for (std::size_t i = 0; i < 5; ++i) d += e.vectors(i, j) * e.vectors(i, k);
        EXPECT_NEAR(d, j == k ? 1.0 : 0.0, 1e-9);
      }
    }
  }
}

// pca

TEST(Pca, IdenticalRows) {
  const auto model = pca(Matrix{{3, 4, 5}, {3, 4, 5}, {3, 4, 5}});
  for (double l : model.latents) EXPECT_EQ(l, 0.0);
  for (double s : model.scores.data()) EXPECT_EQ(s, 0.0);
}

TEST(Pca, CollinearSecondLatentVanishes) {
  Matrix m;
  for (double x : {1.0, 2.5, 4.0, 7.0, 9.5}) m.append_row(std::vector<double>{x, 2 * x});
  const auto model = pca(m);
  EXPECT_NEAR(model.latents[1], 0.0, 1e-9);
  EXPECT_GT(model.latents[0], 1.0);
}

TEST(Pca, TotalVarianceEqualsTrace) {
  std::mt19937_64 gen(14);
  const auto x = to_matrix(oracle::gaussian_rows(gen, 200, 3));
  const auto model = pca(x);
  const auto c = covariance_matrix(x);
  EXPECT_NEAR(std::accumulate(model.latents.begin(), model.latents.end(), 0.0), c(0, 0) + c(1, 1) + c(2, 2),
              1e-8);
}

TEST(Pca, ReconstructsInputAndCentersScores) {
  std::mt19937_64 gen(15);
  for (std::size_t p = 1; p <= 5; ++p) {
    const auto x = to_matrix(oracle::random_rows(gen, 1000, p, 0, 1e5));
    const auto model = pca(x);
    const auto back = model.scores * model.coefficients.transposed();
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < p; ++j) EXPECT_LT(std::abs(back(i, j) + model.mean[j] - x(i, j)), 1e-8 * 1e5);
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < x.rows(); ++i) s += model.scores(i, j);
      EXPECT_NEAR(s / 1000.0, 0.0, 1e-9 * 1e5);
    }
  }
}

// hotelling_t2

TEST(HotellingT2, TwoSymmetricPoints) {
  // n = 2, p = 1: scores ±s, λ = 2s², so t² = s²/2s² = 1/2 each.
  const auto t2 = hotelling_t2(pca(Matrix{{-3}, {3}}));
  ASSERT_EQ(t2.size(), 2u);
  EXPECT_NEAR(t2[0], 0.5, 1e-12);
  EXPECT_NEAR(t2[1], 0.5, 1e-12);
}

TEST(HotellingT2, SumIdentity) {
  std::mt19937_64 gen(16);
  const auto t2 = hotelling_t2(pca(to_matrix(oracle::random_rows(gen, 77, 4))));
  EXPECT_NEAR(std::accumulate(t2.begin(), t2.end(), 0.0), 4.0 * 76.0, 1e-6);
}

TEST(HotellingT2, MatchesExplicitInverse) {
  std::mt19937_64 gen(17);
  const auto rows = oracle::random_rows(gen, 100, 3, 100, 200);
  const auto t2 = hotelling_t2(pca(to_matrix(rows)));
  const auto ref = oracle::mahalanobis_t2(rows);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_NEAR(t2[i], ref[i], 1e-7);
}

TEST(HotellingT2, RotationInvariant) {
  std::mt19937_64 gen(18);
  const auto x = to_matrix(oracle::gaussian_rows(gen, 150, 3));
  const auto rot = random_rotation(gen, 3);
  const auto a = hotelling_t2(pca(x));
  const auto b = hotelling_t2(pca(x * rot));
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-6);
}

TEST(HotellingT2, DegenerateDirectionExcluded) {
  Matrix m;
  for (double x : {1.0, 2.0, 4.0, 8.0}) m.append_row(std::vector<double>{x, 2 * x});
  const auto t2 = hotelling_t2(pca(m));
  // Only the one live component counts: Σt² = 1·(n−1).
  EXPECT_NEAR(std::accumulate(t2.begin(), t2.end(), 0.0), 3.0, 1e-9);
}

// f_cdf

TEST(FCdf, ZeroAtOrigin) {
  EXPECT_EQ(f_cdf(0.0, 3, 7), 0.0);
  EXPECT_EQ(f_cdf(0.0, 1, 1), 0.0);
}

TEST(FCdf, MedianOneForEqualDfs) {
  for (double d : {1.0, 2.0, 5.0, 30.0, 299.0}) EXPECT_NEAR(f_cdf(1.0, d, d), 0.5, 1e-10);
}

TEST(FCdf, MatchesQuadrature) {
  EXPECT_NEAR(f_cdf(3.0, 4, 10), oracle::f_cdf_by_quadrature(3.0, 4, 10), 1e-8);
  EXPECT_NEAR(f_cdf(3.0, 4, 10), 0.9276767777118597, 1e-12);
}

TEST(FCdf, ReflectionAndMonotone) {
  for (double d1 : {1.0, 3.0, 12.0})
    for (double d2 : {2.0, 9.0, 120.0}) {
      double prev = 0;
      for (double x = 0.05; x < 12; x *= 1.3) {
        const double c = f_cdf(x, d1, d2);
        EXPECT_GE(c, prev);
        prev = c;
        EXPECT_NEAR(c, 1.0 - f_cdf(1.0 / x, d2, d1), 1e-9);
        EXPECT_NEAR(c + f_sf(x, d1, d2), 1.0, 1e-12);
      }
    }
}

TEST(FCdf, BadDegreesOfFreedom) {
  expect_error([] { f_cdf(1.0, 0, 4); }, "bad-degrees-of-freedom");
  expect_error([] { f_cdf(1.0, 3, 0.5); }, "bad-degrees-of-freedom");
}

TEST(IncompleteBeta, KnownClosedForms) {
  // I_x(1, b) = 1 - (1-x)^b and I_x(a, 1) = x^a.
  for (double x : {0.1, 0.35, 0.8}) {
    EXPECT_NEAR(incomplete_beta(x, 1, 4.5), 1 - std::pow(1 - x, 4.5), 1e-13);
    EXPECT_NEAR(incomplete_beta(x, 2.5, 1), std::pow(x, 2.5), 1e-13);
  }
}

TEST(LogGamma, MatchesStd) {
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.0, 30.5, 400.0}) EXPECT_NEAR(log_gamma(x), std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x))));
}

// two_sample_f_test

TEST(FTest, IdenticalSamplesAccept) {
  const std::vector<double> a{1, 4, 2, 8, 5, 7};
  const auto r = two_sample_f_test(a, a);
  EXPECT_DOUBLE_EQ(r.variance_ratio, 1.0);
  EXPECT_FALSE(r.h);
  EXPECT_NEAR(r.p_value, 1.0, 1e-10);
}

TEST(FTest, HIffPBelowAlpha) {
  std::mt19937_64 gen(19);
  for (int i = 0; i < 200; ++i) {
    const auto a = normal_sample(gen, 20, 0, 1), b = normal_sample(gen, 25, 0, 1.4);
    for (double alpha : {0.01, 0.05, 0.2}) {
      const auto r = two_sample_f_test(a, b, alpha);
      EXPECT_EQ(r.h, r.p_value < alpha);
      EXPECT_GE(r.p_value, 0.0);
      EXPECT_LE(r.p_value, 1.0);
    }
  }
}

TEST(FTest, NullCalibration) {
  std::mt19937_64 gen(20);
  int accepted = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto a = normal_sample(gen, 200, 0, 1), b = normal_sample(gen, 200, 0, 1);
    accepted += two_sample_f_test(a, b).p_value > 0.05;
  }
  EXPECT_GE(accepted, 95);
}

TEST(FTest, Power) {
  std::mt19937_64 gen(21);
  int rejected = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto a = normal_sample(gen, 200, 0, 1), b = normal_sample(gen, 200, 0, 3);
    rejected += two_sample_f_test(a, b).h;
  }
  EXPECT_GE(rejected, 99);
}

TEST(FTest, Errors) {
  const std::vector<double> a{1, 2, 3}, flat{2, 2, 2};
  expect_error([&] { two_sample_f_test(a, flat); }, "degenerate-variance");
  expect_error([&] { two_sample_f_test(a, a, 1.5); }, "bad-alpha");
}

// one_way_anova

TEST(Anova, IdenticalGroups) {
  const auto r = one_way_anova({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  EXPECT_EQ(r.f_statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.df_between, 2u);
  EXPECT_EQ(r.df_within, 6u);
}

TEST(Anova, TwoSeparatedPairs) {
  const Groups g{{0, 1}, {10, 11}};
  const auto r = one_way_anova(g);
  const auto o = oracle::anova(g);
  EXPECT_NEAR(r.f_statistic, 200.0, 1e-9);
  EXPECT_NEAR(r.f_statistic, o.f, 1e-9);
  EXPECT_NEAR(r.ss_between, 100.0, 1e-12);
  EXPECT_NEAR(r.ss_total, 101.0, 1e-12);
  // F(1, 2) upper tail: p = 1 - I(200/202; 1/2, 1) = 1 - sqrt(200/202).
  EXPECT_NEAR(r.p_value, 1 - std::sqrt(200.0 / 202.0), 1e-12);
}

TEST(Anova, RandomInstancesMatchOracle) {
  std::mt19937_64 gen(22);
  std::uniform_int_distribution<int> groups(2, 6), size(2, 12);
  for (int trial = 0; trial < 50; ++trial) {
    Groups g(groups(gen));
    for (auto& v : g) v = normal_sample(gen, size(gen), std::uniform_real_distribution<>(-2, 2)(gen), 1.5);
    const auto r = one_way_anova(g);
    const auto o = oracle::anova(g);
    EXPECT_NEAR(r.f_statistic, o.f, 1e-9 * std::max(1.0, o.f));
    EXPECT_NEAR(r.ss_between, o.ss_between, 1e-9);
    EXPECT_NEAR(r.ss_within, o.ss_within, 1e-9);
    EXPECT_NEAR(r.ss_total, o.ss_total, 1e-9);
    EXPECT_LE(r.ss_between, r.ss_total + 1e-12);
  }
}

TEST(Anova, ShiftInvariantAndMonotone) {
  std::mt19937_64 gen(23);
  Groups g{normal_sample(gen, 30, 0, 1), normal_sample(gen, 30, 0, 1), normal_sample(gen, 30, 0, 1)};
  const auto base = one_way_anova(g);
  Groups shifted = g;
  for (auto& v : shifted)
    for (auto& x : v) x += 1234.5;
  EXPECT_NEAR(one_way_anova(shifted).f_statistic, base.f_statistic, 1e-9);
  double prev = 1.0;
  for (double d : {1.0, 2.0, 4.0}) {
    Groups moved = g;
    for (auto& x : moved[2]) x += d;
    const double p = one_way_anova(moved).p_value;
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(Anova, SmallGroupThrows) {
  expect_error([] { one_way_anova({{1, 2}, {3}}); }, "insufficient-group");
  expect_error([] { one_way_anova({{1, 2}}); }, "insufficient-group");
}

// studentized range

TEST(StudentizedRange, TwoGroupsReduceToStudentT) {
  const std::pair<double, double> t975[] = {{5, 2.570582}, {10, 2.228139}, {30, 2.042272}, {60, 2.000298}};
  for (auto [df, t] : t975) EXPECT_NEAR(studentized_range_quantile(2, df, 0.05), std::sqrt(2.0) * t, 1e-3);
}

TEST(StudentizedRange, PublishedTable) {
  const double table[4][4] = {{3.64, 4.60, 5.22, 5.67},
                              {3.15, 3.88, 4.33, 4.65},
                              {2.89, 3.49, 3.85, 4.10},
                              {2.83, 3.40, 3.74, 3.98}};
  const double dfs[] = {5, 10, 30, 60};
  for (int r = 0; r < 4; ++r)
    for (int k = 2; k <= 5; ++k) EXPECT_NEAR(studentized_range_quantile(k, dfs[r], 0.05), table[r][k - 2], 0.01);
  EXPECT_NEAR(studentized_range_quantile(3, 10, 0.05), 3.877, 0.01);
}

TEST(StudentizedRange, QuantileInvertsCdf) {
  for (int k : {2, 3, 7})
    for (double df : {4.0, 40.0, 900.0}) {
      const double q = studentized_range_quantile(k, df, 0.05);
      EXPECT_NEAR(studentized_range_cdf(q, k, df), 0.95, 1e-6);
    }
}

TEST(StudentizedRange, IncreasesWithGroups) {
  double prev = 0;
  for (int k = 2; k <= 8; ++k) {
    const double q = studentized_range_quantile(k, 20, 0.05);
    EXPECT_GT(q, prev);
    prev = q;
  }
}

// tukey_hsd

TEST(Tukey, IdenticalGroupsHaveNoOutlier) {
  const auto r = tukey_hsd({{1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}});
  ASSERT_EQ(r.pairwise.size(), 3u);
  for (const auto& p : r.pairwise) EXPECT_FALSE(p.significant);
  EXPECT_FALSE(r.outlier_group);
}

TEST(Tukey, CoversEveryPairOnce) {
  std::mt19937_64 gen(24);
  Groups g;
  for (int i = 0; i < 5; ++i) g.push_back(normal_sample(gen, 8, i, 1));
  const auto r = tukey_hsd(g);
  ASSERT_EQ(r.pairwise.size(), 10u);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& p : r.pairwise) {
    EXPECT_LT(p.group_a, p.group_b);
    EXPECT_TRUE(seen.insert({p.group_a, p.group_b}).second);
  }
}

TEST(Tukey, FindsShiftedGroup) {
  std::mt19937_64 gen(25);
  int found = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const auto r = tukey_hsd({normal_sample(gen, 50, 0, 1), normal_sample(gen, 50, 0, 1), normal_sample(gen, 50, 5, 1)});
    const bool both = r.pairwise[1].significant && r.pairwise[2].significant;  // (0,2), (1,2)
    found += r.outlier_group == std::optional<std::size_t>(2) && both;
  }
  EXPECT_GE(found, 99);
}

TEST(Tukey, TwoGroupsAgreeWithAnova) {
  std::mt19937_64 gen(26);
  for (int trial = 0; trial < 200; ++trial) {
    const Groups g{normal_sample(gen, 12, 0, 1), normal_sample(gen, 15, 0.8, 1)};
    const auto a = one_way_anova(g);
    const auto t = tukey_hsd(g);
    const double q = t.pairwise[0].q_statistic;
    EXPECT_NEAR(q * q, 2 * a.f_statistic, 1e-9 * std::max(1.0, a.f_statistic));
    if (std::abs(a.p_value - 0.05) > 1e-4) EXPECT_EQ(t.pairwise[0].significant, a.p_value < 0.05);
  }
}

TEST(Tukey, DegenerateVariance) {
  expect_error([] { tukey_hsd({{1, 1}, {2, 2}}); }, "degenerate-variance");
}
