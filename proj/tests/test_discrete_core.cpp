#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "gmkdv/discrete_core.hpp"
#include "gmkdv/errors.hpp"
#include "test_support.hpp"

using namespace gmkdv;
using gmkdv::testing::max_abs;
using gmkdv::testing::random_state;

namespace {

// Straight transcription of the forms with zero ghosts, kept independent of
// the library's flux-based evaluation.
struct Naive {
  const std::vector<double>& y;
  double h;
  double at(long k) const {
    return (k < 0 || k >= static_cast<long>(y.size())) ? 0.0 : y[static_cast<std::size_t>(k)];
  }
  double x(long k) const { return (at(k + 1) - at(k)) / h; }
  double xb(long k) const { return (at(k) - at(k - 1)) / h; }
  double c(long k) const { return (at(k + 1) - at(k - 1)) / (2 * h); }
  double xxb(long k) const { return (at(k + 1) - 2 * at(k) + at(k - 1)) / (h * h); }
};

std::vector<double> naive_q1(const std::vector<double>& y, double h) {
  const Naive n{y, h};
  std::vector<double> out(y.size(), 0.0);
  for (long i = 1; i + 1 < static_cast<long>(y.size()); ++i) {
    const double u = n.at(i), up = n.at(i + 1), um = n.at(i - 1);
    const double sq_c = (up * up - um * um) / (2 * h);
    const double cu_c = (up * up * up - um * um * um) / (2 * h);
    out[i] = 0.5 * (u * u * n.c(i) + u * sq_c + cu_c);
  }
  return out;
}

std::vector<double> naive_q2(const std::vector<double>& y, double h, double c2, double c3) {
  const Naive n{y, h};
  auto G = [&](long k) {
    const double yx = n.x(k), yxb = n.xb(k);
    return c2 * yx * yxb + 0.5 * c3 * (2 * n.at(k) * n.xxb(k) + yx * yx - 2 * yx * yxb + yxb * yxb);
  };
  std::vector<double> out(y.size(), 0.0);
  for (long i = 1; i + 1 < static_cast<long>(y.size()); ++i) out[i] = (G(i + 1) - G(i - 1)) / (2 * h);
  return out;
}

std::vector<double> naive_r1(const std::vector<double>& u, const std::vector<double>& v, double h) {
  const Naive nu{u, h}, nv{v, h};
  std::vector<double> out(u.size(), 0.0);
  for (long i = 1; i + 1 < static_cast<long>(u.size()); ++i) {
    auto cen = [&](auto f) { return (f(i + 1) - f(i - 1)) / (2 * h); };
    const double U = nu.at(i), V = nv.at(i);
    const double uv_c = cen([&](long k) { return nu.at(k) * nv.at(k); });
    const double uuv_c = cen([&](long k) { return nu.at(k) * nu.at(k) * nv.at(k); });
    const double uu_c = cen([&](long k) { return nu.at(k) * nu.at(k); });
    out[i] = 0.5 * (U * U * nv.c(i) + 2 * U * uv_c + 3 * uuv_c + 2 * U * V * nu.c(i) + V * uu_c);
  }
  return out;
}

std::vector<double> naive_r2(const std::vector<double>& u, const std::vector<double>& w, double h,
                             double c2, double c3) {
  const Naive a{u, h}, b{w, h};
  auto G = [&](long k) {
    return (c2 - c3) * (a.x(k) * b.xb(k) + a.xb(k) * b.x(k)) +
           c3 * (a.at(k) * b.xxb(k) + a.x(k) * b.x(k) + a.xb(k) * b.xb(k) + a.xxb(k) * b.at(k));
  };
  std::vector<double> out(u.size(), 0.0);
  for (long i = 1; i + 1 < static_cast<long>(u.size()); ++i) out[i] = (G(i + 1) - G(i - 1)) / (2 * h);
  return out;
}

double hsum(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return h * s;
}

double hdot(const std::vector<double>& f, const std::vector<double>& g, double h) {
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i] * g[i];
  return h * s;
}

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

}  // namespace

TEST(Mesh, FromNodesKeepsLengthAndTimeStep) {
  const Mesh m = Mesh::from_nodes(10.0, 1000, 1.0);
  EXPECT_DOUBLE_EQ(m.h, 0.01);
  EXPECT_DOUBLE_EQ(m.h * static_cast<double>(m.I), m.L);
  EXPECT_LE(m.tau, m.h * m.h * (1 + 1e-12));
  EXPECT_DOUBLE_EQ(m.tau * static_cast<double>(m.J), m.T);
  EXPECT_EQ(m.nodes().size(), 1001u);
  EXPECT_DOUBLE_EQ(m.nodes().back(), m.L);
}

TEST(Mesh, FromStepRoundsNodeCount) {
  const Mesh m = Mesh::from_step(20.0, 0.0041, 1.0);
  EXPECT_EQ(m.I, 4878u);
  EXPECT_NEAR(m.h, 0.0041, 1e-6);
  EXPECT_LE(m.tau, 0.0041 * 0.0041);
}

TEST(Mesh, ExplicitTimeStepIsNeverExceeded) {
  const Mesh m = Mesh::from_nodes(10.0, 100, 1.0, 0.3);
  EXPECT_EQ(m.J, 4u);
  EXPECT_DOUBLE_EQ(m.tau, 0.25);
}

TEST(Mesh, RejectsBadSizes) {
  EXPECT_THROW(Mesh::from_nodes(10.0, 15, 1.0), DomainError);
  EXPECT_THROW(Mesh::from_nodes(-1.0, 100, 1.0), DomainError);
  EXPECT_THROW(Mesh::from_nodes(1.0, 100, 0.0), DomainError);
  EXPECT_THROW(Mesh::from_step(1.0, 0.0, 1.0), DomainError);
}

TEST(GridState, BoundaryPinning) {
  GridState s(20);
  EXPECT_TRUE(s.satisfies_boundary());
  s[2] = 1.0;
  s[18] = 1.0;
  s[10] = 1.0;
  EXPECT_FALSE(s.satisfies_boundary());
  s.enforce_boundary();
  EXPECT_TRUE(s.satisfies_boundary());
  EXPECT_EQ(s[2], 0.0);
  EXPECT_EQ(s[18], 0.0);
  EXPECT_EQ(s[10], 1.0);
}

TEST(Differences, LinearRampAndQuadratic) {
  const double h = 0.1;
  std::vector<double> ramp(21), quad(21);
  for (std::size_t i = 0; i <= 20; ++i) {
    ramp[i] = 3.0 * h * static_cast<double>(i);
    quad[i] = std::pow(h * static_cast<double>(i), 2);
  }
  for (std::size_t i = 1; i < 20; ++i) {
    EXPECT_NEAR(diff_cen(ramp, i, h), 3.0, 1e-13);
    EXPECT_NEAR(diff_2nd(quad, i, h), 2.0, 1e-11);
  }
}

TEST(Differences, CentralIsMeanOfOneSided) {
  std::mt19937_64 rng(1);
  const std::vector<double> y = random_state(64, rng);
  const double h = 0.05;
  for (std::size_t i = 1; i < 64; ++i) {
    const double c = diff_cen(y, i, h);
    EXPECT_NEAR(c, 0.5 * (diff_fwd(y, i, h) + diff_bwd(y, i, h)), 1e-16 * std::max(1.0, std::abs(c)) * 8);
  }
}

TEST(Differences, IndexOutsideStencilThrows) {
  const std::vector<double> y(17, 0.0);
  EXPECT_THROW(diff_fwd(y, 0, 0.1), std::out_of_range);
  EXPECT_THROW(diff_bwd(y, 16, 0.1), std::out_of_range);
  EXPECT_THROW(diff_cen(y, 0, 0.1), std::out_of_range);
  EXPECT_THROW(diff_2nd(y, 16, 0.1), std::out_of_range);
}

TEST(Forms, MatchNaiveTranscription) {
  std::mt19937_64 rng(2);
  const std::size_t I = 64;
  const double h = 10.0 / I, c2 = 1.3, c3 = 0.7;
  const std::vector<double> u = random_state(I, rng), v = random_state(I, rng);
  const auto cmp = [](const std::vector<double>& a, const std::vector<double>& b) {
    ASSERT_EQ(a.size(), b.size());
    const double s = std::max(1.0, max_abs(b));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-13 * s) << i;
  };
  cmp(q1(u, h), naive_q1(u, h));
  cmp(q2(u, h, c2, c3), naive_q2(u, h, c2, c3));
  cmp(r1(u, v, h), naive_r1(u, v, h));
  cmp(r2(u, v, h, c2, c3), naive_r2(u, v, h, c2, c3));
}

TEST(Forms, VanishOnConstantInterior) {
  // Constant on nodes 10..I-10; only the ramps at the ends see differences.
  const std::size_t I = 64;
  const double h = 0.1;
  std::vector<double> y(I + 1, 0.0);
  for (std::size_t i = 10; i + 10 <= I; ++i) y[i] = 0.8;
  const auto Q1 = q1(y, h), Q2 = q2(y, h, 1.0, 1.0);
  for (std::size_t i = 14; i + 14 <= I; ++i) {
    EXPECT_EQ(Q1[i], 0.0) << i;
    EXPECT_EQ(Q2[i], 0.0) << i;
  }
}

TEST(Forms, LinearFormsVanishOnZeroDirection) {
  std::mt19937_64 rng(3);
  const std::vector<double> u = random_state(32, rng), zero(33, 0.0);
  for (double v : r1(u, zero, 0.3)) EXPECT_EQ(v, 0.0);
  for (double v : r2(u, zero, 0.3, 1.0, 2.0)) EXPECT_EQ(v, 0.0);
}

TEST(Forms, EndEntriesAreZero) {
  std::mt19937_64 rng(4);
  const std::vector<double> u = random_state(32, rng);
  for (const auto& f : {q1(u, 0.1), q2(u, 0.1, 1, 1), r1(u, u, 0.1), r2(u, u, 0.1, 1, 1)}) {
    EXPECT_EQ(f.front(), 0.0);
    EXPECT_EQ(f.back(), 0.0);
  }
}

// The summation and decomposition identities on several mesh sizes.
class Identities : public ::testing::TestWithParam<std::size_t> {};

TEST_P(Identities, HoldToRoundoff) {
  const std::size_t I = GetParam();
  const double h = 10.0 / static_cast<double>(I);
  std::mt19937_64 rng(100 + I);
  std::uniform_real_distribution<double> Uc(0.5, 2.5);
  for (int sample = 0; sample < 20; ++sample) {
    const double c2 = Uc(rng), c3 = Uc(rng);
    const std::vector<double> a = random_state(I, rng), b = random_state(I, rng);
    const std::vector<double> Q1a = q1(a, h), Q2a = q2(a, h, c2, c3);
    const double inv_h = 1.0 / h;  // differences scale like 1/h on random data

    // Sums vanish.
    EXPECT_NEAR(hsum(Q1a, h), 0.0, 1e-13 * inv_h * 10);
    EXPECT_NEAR(hsum(Q2a, h), 0.0, 1e-13 * std::pow(inv_h, 3) * 10);
    EXPECT_NEAR(hdot(a, Q1a, h), 0.0, 1e-13 * inv_h * 10);

    // Cross term of Q2.
    const double lhs = hdot(a, Q2a, h);
    const double rhs = 0.5 * (c3 - 2 * c2) * cubic_gradient_sum(a, h);
    EXPECT_NEAR(lhs, rhs, 1e-12 * 10.0 * std::pow(inv_h, 3));

    // Decompositions and diagonal values.
    const auto ab = add(a, b);
    const auto Q1ab = q1(ab, h), Q2ab = q2(ab, h, c2, c3);
    const auto Q1b = q1(b, h), Q2b = q2(b, h, c2, c3);
    const auto R1ab = r1(a, b, h), R1ba = r1(b, a, h), R2ab = r2(a, b, h, c2, c3);
    const auto R1aa = r1(a, a, h), R2aa = r2(a, a, h, c2, c3);
    const double s1 = std::max(1.0, max_abs(Q1ab)), s2 = std::max(1.0, max_abs(Q2ab));
    for (std::size_t i = 0; i <= I; ++i) {
      EXPECT_NEAR(Q1ab[i], Q1a[i] + R1ab[i] + R1ba[i] + Q1b[i], 1e-13 * s1 * 10) << i;
      EXPECT_NEAR(Q2ab[i], Q2a[i] + R2ab[i] + Q2b[i], 1e-13 * s2 * 10) << i;
      EXPECT_NEAR(R1aa[i], 3 * Q1a[i], 1e-13 * s1 * 10) << i;
      EXPECT_NEAR(R2aa[i], 2 * Q2a[i], 1e-13 * s2 * 10) << i;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(MeshSizes, Identities, ::testing::Values(16, 64, 256, 1024));

TEST(ProductRule, CentralDifferenceOfProduct) {
  std::mt19937_64 rng(5);
  const std::size_t I = 128;
  const double h = 0.05;
  const std::vector<double> y = random_state(I, rng), g = random_state(I, rng);
  std::vector<double> yg(I + 1);
  for (std::size_t i = 0; i <= I; ++i) yg[i] = y[i] * g[i];
  // (y_x g_x) at i needs i+1, its backward difference at i needs i-1..i+1.
  for (std::size_t i = 1; i < I; ++i) {
    const double lhs = diff_cen(yg, i, h);
    const double pxx = (diff_fwd(y, i, h) * diff_fwd(g, i, h) - diff_bwd(y, i, h) * diff_bwd(g, i, h)) / h;
    const double rhs = diff_cen(y, i, h) * g[i] + y[i] * diff_cen(g, i, h) + 0.5 * h * h * pxx;
    EXPECT_NEAR(lhs, rhs, 1e-13 * (std::abs(lhs) + 1.0 / h)) << i;
  }
}

TEST(Norms, ZeroAndSpike) {
  const std::vector<double> z(41, 0.0);
  const GridNorms n0 = norms(z, 0.25, 0.1);
  EXPECT_EQ(n0.l2, 0.0);
  EXPECT_EQ(n0.l2_grad_eps, 0.0);
  EXPECT_EQ(n0.l2_2nd_eps, 0.0);
  std::vector<double> spike(41, 0.0);
  spike[20] = 1.0;
  EXPECT_DOUBLE_EQ(norms(spike, 0.25, 0.1).l2 * norms(spike, 0.25, 0.1).l2, 0.25);
}

TEST(Norms, LpTwoIsL2) {
  std::mt19937_64 rng(6);
  const std::vector<double> y = random_state(200, rng);
  const double h = 0.05;
  EXPECT_NEAR(lp_norm(y, h, 2.0), norms(y, h, 0.1).l2, 1e-15);
  EXPECT_THROW(lp_norm(y, h, 0.5), DomainError);
}

TEST(Norms, MaxNormBound) {
  // max|f| <= sqrt(2) ||f||^(1/2) ||f_x||^(1/2) for zero-boundary f.
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> Ui(16, 400);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t I = Ui(rng);
    const double h = 1.0 / static_cast<double>(I);
    const std::vector<double> f = random_state(I, rng);
    double fx2 = 0.0;
    for (std::size_t i = 0; i < I; ++i) fx2 += std::pow((f[i + 1] - f[i]) / h, 2);
    const double l2 = norms(f, h, 1.0).l2, fx = std::sqrt(h * fx2);
    EXPECT_LE(max_abs(f), std::sqrt(2.0) * std::sqrt(l2 * fx) * (1 + 1e-14));
  }
}

TEST(Norms, SummationByParts) {
  std::mt19937_64 rng(9);
  for (std::size_t I : {16u, 64u, 256u, 1024u}) {
    const double h = 1.0 / static_cast<double>(I);
    const std::vector<double> y = random_state(I, rng);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 1; i < I; ++i) lhs += y[i] * diff_2nd(y, i, h);
    for (std::size_t i = 0; i < I; ++i) rhs -= std::pow((y[i + 1] - y[i]) / h, 2);
    EXPECT_NEAR(h * lhs, h * rhs, 1e-13 * std::abs(h * rhs)) << I;
  }
}

TEST(CubicGradientSum, MatchesDirectSum) {
  std::mt19937_64 rng(10);
  const std::vector<double> y = random_state(50, rng);
  const double h = 0.2;
  double s = 0.0;
  for (std::size_t i = 1; i < 50; ++i) s += diff_fwd(y, i, h) * diff_bwd(y, i, h) * diff_cen(y, i, h);
  EXPECT_NEAR(cubic_gradient_sum(y, h), h * s, 1e-13 * std::abs(h * s));
}
