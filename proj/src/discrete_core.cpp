#include "gmkdv/discrete_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gmkdv/errors.hpp"

namespace gmkdv {
namespace {

void check_stencil(std::span<const double> y, std::size_t i) {
  if (y.size() < 3 || i < 1 || i + 1 >= y.size()) {
    std::ostringstream os;
    os << "stencil index " << i << " outside [1, " << (y.size() < 2 ? 0 : y.size() - 2) << "]";
    throw std::out_of_range(os.str());
  }
}

void check_sizes(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("grid functions differ in length");
  if (a.size() < 3) throw DomainError("grid function needs at least three nodes");
}

/// Copy of y with two zero ghost nodes on each side; index k maps to k + 2.
std::vector<double> with_ghosts(std::span<const double> y) {
  std::vector<double> p(y.size() + 4, 0.0);
  std::copy(y.begin(), y.end(), p.begin() + 2);
  return p;
}

}  // namespace

Mesh Mesh::from_nodes(double L, std::size_t I, double T, std::optional<double> tau_nominal) {
  if (!(L > 0.0)) throw DomainError("mesh length must be positive");
  if (I < 16) throw DomainError("mesh needs I >= 16");
  if (!(T > 0.0)) throw DomainError("final time must be positive");
  Mesh m;
  m.L = L;
  m.I = I;
  m.h = L / static_cast<double>(I);
  m.T = T;
  const double nominal = tau_nominal.value_or(m.h * m.h);
  if (!(nominal > 0.0)) throw DomainError("time step must be positive");
  m.J = static_cast<std::size_t>(std::ceil(T / nominal - 1e-9));
  m.J = std::max<std::size_t>(m.J, 1);
  m.tau = T / static_cast<double>(m.J);
  return m;
}

Mesh Mesh::from_step(double L, double h_target, double T, std::optional<double> tau_nominal) {
  if (!(h_target > 0.0)) throw DomainError("mesh step must be positive");
  const auto I = static_cast<std::size_t>(std::llround(L / h_target));
  if (tau_nominal) return from_nodes(L, I, T, tau_nominal);
  // Keep the tau = h^2 rule tied to the requested step.
  return from_nodes(L, I, T, h_target * h_target);
}

std::vector<double> Mesh::nodes() const {
  std::vector<double> xs(I + 1);
  for (std::size_t i = 0; i <= I; ++i) xs[i] = x(i);
  return xs;
}

bool GridState::satisfies_boundary() const {
  if (values_.size() < 2 * kPinned) return false;
  for (std::size_t l = 0; l < kPinned; ++l) {
    if (values_[l] != 0.0 || values_[values_.size() - 1 - l] != 0.0) return false;
  }
  return true;
}

void GridState::enforce_boundary() {
  const std::size_t n = values_.size();
  for (std::size_t l = 0; l < kPinned && l < n; ++l) {
    values_[l] = 0.0;
    values_[n - 1 - l] = 0.0;
  }
}

double diff_fwd(std::span<const double> y, std::size_t i, double h) {
  check_stencil(y, i);
  return (y[i + 1] - y[i]) / h;
}

double diff_bwd(std::span<const double> y, std::size_t i, double h) {
  check_stencil(y, i);
  return (y[i] - y[i - 1]) / h;
}

double diff_cen(std::span<const double> y, std::size_t i, double h) {
  check_stencil(y, i);
  return 0.5 * ((y[i + 1] - y[i]) / h + (y[i] - y[i - 1]) / h);
}

double diff_2nd(std::span<const double> y, std::size_t i, double h) {
  check_stencil(y, i);
  return ((y[i + 1] - y[i]) / h - (y[i] - y[i - 1]) / h) / h;
}

std::vector<double> q1(std::span<const double> y, double h) {
  check_sizes(y, y);
  const std::size_t n = y.size();
  std::vector<double> out(n, 0.0);
  const double inv2h = 0.5 / h;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ym = y[i - 1], y0 = y[i], yp = y[i + 1];
    const double d1 = (yp - ym) * inv2h;
    const double d2 = (yp * yp - ym * ym) * inv2h;
    const double d3 = (yp * yp * yp - ym * ym * ym) * inv2h;
    out[i] = 0.5 * (y0 * y0 * d1 + y0 * d2 + d3);
  }
  return out;
}

std::vector<double> q2(std::span<const double> y, double h, double c2, double c3) {
  check_sizes(y, y);
  const std::size_t n = y.size();
  const std::vector<double> p = with_ghosts(y);
  // flux[k] for k = 0..I, stored at k.
  std::vector<double> flux(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double ym = p[k + 1], y0 = p[k + 2], yp = p[k + 3];
    const double fx = (yp - y0) / h;
    const double bx = (y0 - ym) / h;
    const double xx = (fx - bx) / h;
    flux[k] = c2 * fx * bx + 0.5 * c3 * (2.0 * y0 * xx + fx * fx - 2.0 * fx * bx + bx * bx);
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (flux[i + 1] - flux[i - 1]) / (2.0 * h);
  return out;
}

std::vector<double> r1(std::span<const double> u, std::span<const double> v, double h) {
  check_sizes(u, v);
  const std::size_t n = u.size();
  std::vector<double> out(n, 0.0);
  const double inv2h = 0.5 / h;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double um = u[i - 1], u0 = u[i], up = u[i + 1];
    const double vm = v[i - 1], v0 = v[i], vp = v[i + 1];
    const double t1 = u0 * u0 * (vp - vm) * inv2h;
    const double t2 = 2.0 * u0 * (up * vp - um * vm) * inv2h;
    const double t3 = 3.0 * (up * up * vp - um * um * vm) * inv2h;
    const double t4 = 2.0 * u0 * v0 * (up - um) * inv2h;
    const double t5 = v0 * (up * up - um * um) * inv2h;
    out[i] = 0.5 * (t1 + t2 + t3 + t4 + t5);
  }
  return out;
}

std::vector<double> r2(std::span<const double> u, std::span<const double> w, double h,
                       double c2, double c3) {
  check_sizes(u, w);
  const std::size_t n = u.size();
  const std::vector<double> pu = with_ghosts(u);
  const std::vector<double> pw = with_ghosts(w);
  std::vector<double> flux(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double u0 = pu[k + 2], w0 = pw[k + 2];
    const double ux = (pu[k + 3] - u0) / h, uxb = (u0 - pu[k + 1]) / h;
    const double wx = (pw[k + 3] - w0) / h, wxb = (w0 - pw[k + 1]) / h;
    const double uxx = (ux - uxb) / h, wxx = (wx - wxb) / h;
    flux[k] = (c2 - c3) * (ux * wxb + uxb * wx) + c3 * (u0 * wxx + ux * wx + uxb * wxb + uxx * w0);
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (flux[i + 1] - flux[i - 1]) / (2.0 * h);
  return out;
}

double cubic_gradient_sum(std::span<const double> y, double h) {
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    const double fx = (y[i + 1] - y[i]) / h;
    const double bx = (y[i] - y[i - 1]) / h;
    sum += fx * bx * 0.5 * (fx + bx);
  }
  return h * sum;
}

GridNorms norms(std::span<const double> y, double h, double eps) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    const double fx = (y[i + 1] - y[i]) / h;
    const double xx = (fx - (y[i] - y[i - 1]) / h) / h;
    s0 += y[i] * y[i];
    s1 += fx * fx;
    s2 += xx * xx;
  }
  return GridNorms{std::sqrt(h * s0), eps * std::sqrt(h * s1), eps * eps * std::sqrt(h * s2)};
}

double lp_norm(std::span<const double> f, double h, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += std::pow(std::abs(f[i]), p);
  return std::pow(h * sum, 1.0 / p);
}

}  // namespace gmkdv
