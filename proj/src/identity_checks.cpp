#include "gmkdv/identity_checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <random>

#include "gmkdv/discrete_core.hpp"

namespace gmkdv {
namespace {

using Vec = std::vector<double>;

Vec random_state(std::size_t I, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  GridState y(I);
  for (std::size_t i = GridState::kPinned; i + GridState::kPinned <= I; ++i) y[i] = dist(rng);
  return y.data();
}

double hsum(const Vec& v, double h) {
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return h * s;
}

double habs(const Vec& v, double h) {
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += std::abs(v[i]);
  return h * s;
}

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// max_i |sum_k sign_k terms_k[i]| / max_k max_i |terms_k[i]|.
double pointwise_defect(std::initializer_list<std::pair<double, const Vec*>> terms) {
  const std::size_t n = terms.begin()->second->size();
  double worst = 0.0, scale = 0.0;
  for (const auto& [s, v] : terms) scale = std::max(scale, max_abs(*v));
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const auto& [s, v] : terms) acc += s * (*v)[i];
    worst = std::max(worst, std::abs(acc));
  }
  return scale > 0.0 ? worst / scale : worst;
}

Vec mul(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

bool IdentitySuiteResult::all_passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

IdentitySuiteResult run_identity_suite(std::size_t samples, std::size_t I, std::uint64_t seed,
                                       double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(0.5, 2.5);
  const double h = 10.0 / static_cast<double>(I);

  // Insertion order of the report.
  const std::vector<std::string> names = {
      "sum Q1 = 0",          "sum Q2 = 0",           "sum y Q1 = 0",
      "sum y Q2 cross term", "Q1(a+b) decomposition", "Q2(a+b) decomposition",
      "R1(u,u) = 3 Q1(u)",   "R2(u,u) = 2 Q2(u)",    "sum R1(u,v) = 0",
      "discrete product rule"};
  std::map<std::string, double> worst;
  for (const auto& n : names) worst[n] = 0.0;
  auto note = [&](const std::string& n, double v) {
    worst[n] = std::max(worst[n], std::isfinite(v) ? v : 1e300);
  };

  for (std::size_t k = 0; k < samples; ++k) {
    const double c2 = coef(rng), c3 = coef(rng);
    const Vec y = random_state(I, rng);
    const Vec b = random_state(I, rng);

    const Vec Q1 = q1(y, h);
    const Vec Q2 = q2(y, h, c2, c3);
    note(names[0], std::abs(hsum(Q1, h)) / habs(Q1, h));
    note(names[1], std::abs(hsum(Q2, h)) / habs(Q2, h));
    const Vec yQ1 = mul(y, Q1);
    note(names[2], std::abs(hsum(yQ1, h)) / habs(yQ1, h));

    const Vec yQ2 = mul(y, Q2);
    const double cubic = cubic_gradient_sum(y, h);
    const double rhs = 0.5 * (c3 - 2.0 * c2) * cubic;
    note(names[3], std::abs(hsum(yQ2, h) - rhs) / (habs(yQ2, h) + std::abs(rhs)));

    Vec ab(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) ab[i] = y[i] + b[i];
    const Vec Q1ab = q1(ab, h), Q1b = q1(b, h);
    const Vec R1yb = r1(y, b, h), R1by = r1(b, y, h);
    note(names[4], pointwise_defect({{1.0, &Q1ab}, {-1.0, &Q1}, {-1.0, &R1yb}, {-1.0, &R1by},
                                     {-1.0, &Q1b}}));
    const Vec Q2ab = q2(ab, h, c2, c3), Q2b = q2(b, h, c2, c3);
    const Vec R2yb = r2(y, b, h, c2, c3);
    note(names[5], pointwise_defect({{1.0, &Q2ab}, {-1.0, &Q2}, {-1.0, &R2yb}, {-1.0, &Q2b}}));

    const Vec R1yy = r1(y, y, h);
    note(names[6], pointwise_defect({{1.0, &R1yy}, {-3.0, &Q1}}));
    const Vec R2yy = r2(y, y, h, c2, c3);
    note(names[7], pointwise_defect({{1.0, &R2yy}, {-2.0, &Q2}}));
    note(names[8], std::abs(hsum(R1yb, h)) / habs(R1yb, h));

    // (yg)_c = y_c g + y g_c + h^2/2 (y_x g_x)_xb at interior nodes.
    Vec lhs(y.size(), 0.0), t1(y.size(), 0.0), t2(y.size(), 0.0), t3(y.size(), 0.0);
    const Vec yg = mul(y, b);
    for (std::size_t i = 2; i + 1 < y.size(); ++i) {
      lhs[i] = diff_cen(yg, i, h);
      t1[i] = diff_cen(y, i, h) * b[i];
      t2[i] = y[i] * diff_cen(b, i, h);
      const double here = diff_fwd(y, i, h) * diff_fwd(b, i, h);
      const double left = diff_fwd(y, i - 1, h) * diff_fwd(b, i - 1, h);
      t3[i] = 0.5 * h * h * (here - left) / h;
    }
    note(names[9], pointwise_defect({{1.0, &lhs}, {-1.0, &t1}, {-1.0, &t2}, {-1.0, &t3}}));
  }

  IdentitySuiteResult res;
  res.samples = samples;
  res.I = I;
  for (const auto& n : names) {
    res.checks.push_back({n, worst[n], tolerance, worst[n] <= tolerance});
  }
  res.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

void print_identity_suite(std::ostream& out, const IdentitySuiteResult& result) {
  const auto old = out.precision(3);
  for (const IdentityCheck& c : result.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": worst " << std::scientific << c.worst
        << " <= " << c.tolerance << std::defaultfloat << '\n';
  }
  out << result.samples << " samples, I=" << result.I << ", " << result.seconds << " s\n";
  out.precision(old);
}

}  // namespace gmkdv
