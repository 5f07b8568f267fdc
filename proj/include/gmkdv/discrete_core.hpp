#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gmkdv {

/// Uniform mesh x_i = i h, i = 0..I, on [0, L] and time levels t_j = j tau,
/// j = 0..J, with J tau = T.
struct Mesh {
  double L = 0.0;
  std::size_t I = 0;
  double h = 0.0;
  double tau = 0.0;
  double T = 0.0;
  std::size_t J = 0;

  /// tau_nominal defaults to h^2. The step actually used is T / J with
  /// J = ceil(T / tau_nominal), so tau never exceeds the nominal value.
  static Mesh from_nodes(double L, std::size_t I, double T,
                         std::optional<double> tau_nominal = std::nullopt);
  /// I = round(L / h_target), then h = L / I.
  static Mesh from_step(double L, double h_target, double T,
                        std::optional<double> tau_nominal = std::nullopt);

  double x(std::size_t i) const { return h * static_cast<double>(i); }
  std::vector<double> nodes() const;
};

/// Values y_0..y_I at one time level. Three nodes at each end are pinned
/// to zero by the boundary conditions.
class GridState {
 public:
  static constexpr std::size_t kPinned = 3;

  GridState() = default;
  explicit GridState(std::size_t I) : values_(I + 1, 0.0) {}
  explicit GridState(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t last_index() const { return values_.empty() ? 0 : values_.size() - 1; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }

  bool satisfies_boundary() const;
  void enforce_boundary();

 private:
  std::vector<double> values_;
};

// Pointwise difference quotients; i must satisfy 1 <= i <= I-1.
double diff_fwd(std::span<const double> y, std::size_t i, double h);
double diff_bwd(std::span<const double> y, std::size_t i, double h);
double diff_cen(std::span<const double> y, std::size_t i, double h);
double diff_2nd(std::span<const double> y, std::size_t i, double h);

// Nonlinear forms and their linearisations. Every operator is evaluated at
// nodes 1..I-1 with values outside [0, I] taken as zero; entries 0 and I of
// the result are zero.

/// Q1(y) = 1/2 (y^2 y_c + y (y^2)_c + (y^3)_c), subscript c = central difference.
std::vector<double> q1(std::span<const double> y, double h);

/// Q2(y) = D_c { c2 y_x y_xb + c3/2 (2 y y_xxb + y_x^2 - 2 y_x y_xb + y_xb^2) }.
std::vector<double> q2(std::span<const double> y, double h, double c2, double c3);

/// Derivative of Q1 at u in direction v:
/// 1/2 (u^2 v_c + 2u (uv)_c + 3 (u^2 v)_c + 2 u v u_c + v (u^2)_c).
std::vector<double> r1(std::span<const double> u, std::span<const double> v, double h);

/// Symmetric bilinear form with r2(u, u) = 2 q2(u):
/// D_c { (c2-c3)(u_x w_xb + u_xb w_x) + c3 (u w_xxb + u_x w_x + u_xb w_xb + u_xxb w) }.
std::vector<double> r2(std::span<const double> u, std::span<const double> w, double h,
                       double c2, double c3);

/// h sum_{i=1}^{I-1} y_x y_xb y_c.
double cubic_gradient_sum(std::span<const double> y, double h);

struct GridNorms {
  double l2 = 0.0;          ///< ||y||
  double l2_grad_eps = 0.0; ///< ||eps y_x||
  double l2_2nd_eps = 0.0;  ///< ||eps^2 y_xxb||
};

/// Discrete L2 norms with ||f||^2 = h sum_{i=1}^{I-1} f_i^2.
GridNorms norms(std::span<const double> y, double h, double eps);

/// (h sum_{i=1}^{I-1} |f_i|^p)^(1/p).
double lp_norm(std::span<const double> f, double h, double p);

}  // namespace gmkdv
