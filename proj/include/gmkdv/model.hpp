#pragma once

#include <string>

namespace gmkdv {

/// Coefficients of the cubic general mKdV equation
///
///   d/dt (u - alpha^2 eps^2 u_xx)
///     + d/dx (c0 u + c1 u^3 - c2 eps^2 u_x^2 + eps^2 (gamma - c3 u) u_xx) = 0.
struct ModelParams {
  double alpha = 0.0;
  double gamma = 1.0;
  double c0 = 0.0;
  double c1 = 2.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double epsilon = 0.1;
  int n = 3;

  /// Throws DomainError when the coefficient restrictions are violated
  /// (alpha, gamma >= 0 with alpha + gamma > 0, c2, c3 >= 0, eps > 0, n = 3).
  void validate() const;

  /// c3 / (c2 + c3); only meaningful when c3 > 0.
  double r() const;

  /// True for the pure mKdV case u_t + 6 u^2 u_x + eps^2 u_xxx = 0 whose
  /// exact sech soliton is available.
  bool is_mkdv() const;

  bool operator==(const ModelParams&) const = default;
};

/// u_t + (2u^3 + eps^2 u_xx)_x = 0.
ModelParams mkdv_params(double epsilon = 0.1);
/// c3 = c2 = 2, gamma = 2, c1 = c0 = alpha = 1.
ModelParams mgdp_example2_params(double epsilon = 0.1);
/// alpha = c1 = c3 = c2 = 1, gamma = c0 = 2.
ModelParams mgdp_example3_params(double epsilon = 0.1);

std::string describe(const ModelParams& params);

}  // namespace gmkdv
