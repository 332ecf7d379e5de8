// Copyright 2026 The Lexiprec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lexiprec/stats.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <vector>

#include "lexiprec/prng.hpp"

namespace lexiprec::stats {
namespace {

// Reference values below were computed with scipy 1.x
// (scipy.stats.ttest_1samp, studentized_range, pearsonr, numpy lstsq) and
// are frozen here.

TEST(IncompleteBetaTest, AgainstBoostStudentT) {
  for (double df : {1.0, 2.5, 7.0, 30.0, 250.0}) {
    const boost::math::students_t dist(df);
    for (double t : {0.0, 0.3, 1.0, 2.2, 5.0, 12.0}) {
      const double expected = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
      EXPECT_NEAR(student_t_two_sided_p(t, df), expected, 1e-12 + 1e-10 * expected)
          << "df=" << df << " t=" << t;
    }
  }
  EXPECT_DOUBLE_EQ(incomplete_beta(2, 3, 0), 0.0);
  EXPECT_DOUBLE_EQ(incomplete_beta(2, 3, 1), 1.0);
  EXPECT_NEAR(incomplete_beta(2, 3, 0.4), 0.5248, 1e-12);  // 1 - 0.6^4 - 4*0.4*0.6^3
}

struct TFixture {
  std::vector<double> d;
  double t;
  double p;
};

TEST(PairedTTest, ReferenceFixtures) {
  const std::vector<TFixture> fixtures{
      {{0.1, 0.2, -0.05, 0.3, 0.15}, 2.4188315916278085, 0.07285505961025567},
      {{0.5, -0.25, 0.125, 0.0, 0.75, -0.1, 0.3, 0.2}, 1.6583681058724624,
       0.14120758608956305},
      {{1, 2, 3, 4, 5, 6, 7, 8, 9, -10}, 2.0493901531919194, 0.07068345813502643},
      {{0.01, 0.02, 0.015, 0.03, -0.005, 0.012}, 2.8847499333941964,
       0.03439683330804114},
  };
  for (const auto& f : fixtures) {
    const auto r = paired_t_test(f.d);
    EXPECT_NEAR(r.statistic, f.t, 1e-9);
    EXPECT_NEAR(r.p_value, f.p, 1e-9);
    EXPECT_EQ(r.n, f.d.size());
    EXPECT_EQ(r.df, static_cast<double>(f.d.size() - 1));
  }
}

TEST(PairedTTest, DegenerateCases) {
  const std::vector<double> zeros{0, 0, 0};
  EXPECT_EQ(paired_t_test(zeros).p_value, 1.0);
  EXPECT_EQ(paired_t_test(zeros).statistic, 0.0);
  const std::vector<double> alt{1, -1, 1, -1};
  EXPECT_EQ(paired_t_test(alt).statistic, 0.0);
  EXPECT_NEAR(paired_t_test(alt).p_value, 1.0, 1e-15);
  const std::vector<double> constant{0.5, 0.5, 0.5};
  EXPECT_EQ(paired_t_test(constant).p_value, 0.0);
  EXPECT_THROW(paired_t_test(std::vector<double>{1.0}), DataError);
}

TEST(PairedTTest, ScaleInvariant) {
  const std::vector<double> d{0.3, -0.1, 0.7, 0.2, 0.05, 0.4};
  std::vector<double> scaled;
  for (double v : d) scaled.push_back(v * 37.5);
  EXPECT_NEAR(paired_t_test(d).p_value, paired_t_test(scaled).p_value, 1e-12);
}

TEST(SignTest, Examples) {
  EXPECT_NEAR(sign_test(8, 2).p_value, 0.109375, 1e-12);
  EXPECT_EQ(sign_test(5, 5).p_value, 1.0);
  EXPECT_NEAR(sign_test(10, 0).p_value, 0.001953125, 1e-12);
  EXPECT_THROW(sign_test(0, 0), DataError);
  for (std::uint64_t a = 0; a <= 12; ++a) {
    for (std::uint64_t b = 0; b <= 12; ++b) {
      if (a + b == 0) continue;
      EXPECT_EQ(sign_test(a, b).p_value, sign_test(b, a).p_value);
    }
  }
  // Large n stays exact and finite.
  EXPECT_GT(sign_test(600, 400).p_value, 0.0);
  EXPECT_LT(sign_test(600, 400).p_value, 1e-9);
}

TEST(StudentizedRangeTest, Cdf) {
  EXPECT_NEAR(studentized_range_cdf(3.0, 3, 10), 0.8650165848104374, 1e-8);
  EXPECT_NEAR(studentized_range_cdf(3.0, 3, kInfiniteDf), 0.9144574283450421, 1e-8);
  EXPECT_EQ(studentized_range_cdf(0.0, 3, 10), 0.0);
  EXPECT_NEAR(studentized_range_cdf(3.0, 4, 20) + studentized_range_sf(3.0, 4, 20), 1.0,
              1e-12);
}

struct QFixture {
  int k;
  double df;
  double q;
};

TEST(StudentizedRangeTest, QuantilesAgainstReference) {
  const std::vector<QFixture> fixtures{
      {2, kInfiniteDf, 2.771807648699356}, {2, 1, 17.969287064187434},
      {3, 10, 3.876776750013158},          {5, 10, 4.6542929978545375},
      {10, 10, 5.598386466470144},         {3, 30, 3.486420064705315},
      {5, 30, 4.102079019506422},          {10, 30, 4.824141286183106},
      {3, 120, 3.3561383961506337},        {5, 120, 3.9169376908061198},
      {10, 120, 4.55953799405391},         {3, 20, 3.577934725220134},
      {4, 20, 3.9582935609453846},
  };
  for (const auto& f : fixtures) {
    EXPECT_NEAR(studentized_range_quantile(0.05, f.k, f.df), f.q, 1e-6)
        << "k=" << f.k << " df=" << f.df;
  }
}

TEST(StudentizedRangeTest, NormalLimitAndMonotonicity) {
  EXPECT_NEAR(studentized_range_quantile(0.05, 2, kInfiniteDf), std::sqrt(2.0) * 1.959963984540054,
              1e-4);
  EXPECT_GT(studentized_range_quantile(0.05, 4, 20), studentized_range_quantile(0.05, 3, 20));
  EXPECT_THROW(studentized_range_quantile(0.0, 3, 10), DataError);
  EXPECT_THROW(studentized_range_quantile(0.05, 1, 10), DataError);
}

Eigen::MatrixXd hsd_fixture() {
  Eigen::MatrixXd m(3, 10);
  m << 0.50, 0.33, 1.00, 0.25, 0.50, 0.20, 1.00, 0.50, 0.33, 0.10,  //
      1.00, 0.50, 1.00, 0.50, 1.00, 0.33, 1.00, 1.00, 0.50, 0.25,   //
      0.45, 0.30, 0.90, 0.30, 0.50, 0.25, 0.80, 0.60, 0.33, 0.12;
  return m;
}

TEST(TukeyHsdTest, ReferenceFixture) {
  const auto r = tukey_hsd(hsd_fixture(), 0.05);
  EXPECT_NEAR(r.mse, 0.012386296296296296, 1e-12);
  EXPECT_EQ(r.df, 18.0);
  EXPECT_NEAR(r.critical_q, 3.609303828706538, 1e-6);
  ASSERT_EQ(r.pairs.size(), 3u);
  const double stat[] = {6.734069800640407, 0.45462074603479585, 7.188690546675203};
  const double p[] = {0.00043657129894625335, 0.9448008413106084, 0.0002185698086609733};
  const bool sig[] = {true, false, true};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.pairs[i].result.statistic, stat[i], 1e-9);
    EXPECT_NEAR(r.pairs[i].result.p_value, p[i], 1e-7);
    EXPECT_EQ(r.pairs[i].significant, sig[i]);
  }
  EXPECT_EQ(r.pairs[0].a, 0u);
  EXPECT_EQ(r.pairs[0].b, 1u);
  EXPECT_EQ(r.pairs[2].a, 1u);
}

TEST(TukeyHsdTest, IdenticalRowsNeverSignificant) {
  Eigen::MatrixXd m = hsd_fixture();
  m.row(2) = m.row(0);
  for (double alpha : {0.5, 0.2, 0.05}) {
    const auto r = tukey_hsd(m, alpha);
    EXPECT_FALSE(r.pairs[1].significant);
    EXPECT_EQ(r.pairs[1].result.statistic, 0.0);
    EXPECT_EQ(r.pairs[1].result.p_value, 1.0);
  }
}

TEST(TukeyHsdTest, InvariantUnderScalingAndTopicShift) {
  const auto m = hsd_fixture();
  const auto base = tukey_hsd(m);
  Eigen::MatrixXd scaled = m * 4.5;
  Eigen::MatrixXd shifted = m;
  for (Eigen::Index t = 0; t < m.cols(); ++t) shifted.col(t).array() += 0.1 * t;
  for (const auto& other : {tukey_hsd(scaled), tukey_hsd(shifted)}) {
    for (std::size_t i = 0; i < base.pairs.size(); ++i) {
      EXPECT_EQ(other.pairs[i].significant, base.pairs[i].significant);
      EXPECT_NEAR(other.pairs[i].result.statistic, base.pairs[i].result.statistic, 1e-9);
    }
  }
}

TEST(TukeyHsdTest, ZeroResidual) {
  // Additive system + topic effects only: MSE is 0.
  Eigen::MatrixXd m(3, 4);
  for (int s = 0; s < 3; ++s) {
    for (int t = 0; t < 4; ++t) m(s, t) = (s == 2 ? 0.0 : 0.25 * s) + 0.1 * t;
  }
  const auto r = tukey_hsd(m);
  EXPECT_TRUE(r.pairs[0].significant);   // 0 vs 1
  EXPECT_FALSE(r.pairs[1].significant);  // 0 vs 2 identical
  EXPECT_TRUE(r.pairs[2].significant);
}

TEST(TukeyHsdTest, ThreadCountDoesNotMatter) {
  Prng rng(3);
  Eigen::MatrixXd m(6, 15);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = static_cast<double>(rng.uniform_below(1000)) / 1000.0;
  }
  HsdOptions one, many;
  many.threads = 8;
  const auto a = tukey_hsd(m, 0.05, one);
  const auto b = tukey_hsd(m, 0.05, many);
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    EXPECT_EQ(a.pairs[i].result.p_value, b.pairs[i].result.p_value);
  }
  EXPECT_THROW(tukey_hsd(Eigen::MatrixXd(1, 5)), DataError);
}

TEST(BonferroniTest, Examples) {
  EXPECT_EQ(bonferroni(std::vector<double>{0.01, 0.2}), (std::vector<double>{0.02, 0.4}));
  EXPECT_EQ(bonferroni(std::vector<double>{0.9}), (std::vector<double>{0.9}));
  EXPECT_EQ(bonferroni(std::vector<double>{0.6, 0.7}), (std::vector<double>{1.0, 1.0}));
}

TEST(PearsonTest, Examples) {
  const std::vector<double> x{1, 2, 3};
  const std::vector<double> neg{-1, -2, -3};
  EXPECT_NEAR(*pearson(x, x), 1.0, 1e-15);
  EXPECT_NEAR(*pearson(x, neg), -1.0, 1e-15);
  EXPECT_NEAR(*pearson(x, std::vector<double>{2, 4, 7}), 0.9933992677987828, 1e-12);
  EXPECT_FALSE(pearson(x, std::vector<double>{5, 5, 5}).has_value());
  EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), DataError);
}

TEST(OlsTest, ExactAndReference) {
  Eigen::MatrixXd X(5, 2);
  Eigen::VectorXd y(5);
  for (int i = 0; i < 5; ++i) {
    X(i, 0) = 1;
    X(i, 1) = i * 0.7 - 1;
    y(i) = 0.25 + 3.0 * X(i, 1);
  }
  const auto b = ols(X, y);
  EXPECT_NEAR(b(0), 0.25, 1e-10);
  EXPECT_NEAR(b(1), 3.0, 1e-10);

  y.setConstant(2.0);
  const auto c = ols(X, y);
  EXPECT_NEAR(c(0), 2.0, 1e-12);
  EXPECT_NEAR(c(1), 0.0, 1e-12);

  Eigen::MatrixXd R(8, 3);
  R << 1, 0.5, -0.2, 1, 1.5, 0.3, 1, -0.7, 0.8, 1, 2.2, -1.1, 1, 0.0, 0.4, 1, -1.3, -0.6,
      1, 0.9, 1.7, 1, 1.1, 0.05;
  Eigen::VectorXd ry(8);
  ry << 0.3, 1.9, -0.4, 1.2, 0.6, -1.5, 2.1, 1.0;
  const auto d = ols(R, ry);
  EXPECT_NEAR(d(0), 0.033820903176255676, 1e-8);
  EXPECT_NEAR(d(1), 0.9450955645972297, 1e-8);
  EXPECT_NEAR(d(2), 0.7111343728011718, 1e-8);

  Eigen::MatrixXd deficient(4, 2);
  deficient << 1, 2, 1, 2, 1, 2, 1, 2;
  EXPECT_THROW(ols(deficient, Eigen::VectorXd::Ones(4)), DataError);
}

}  // namespace
}  // namespace lexiprec::stats
