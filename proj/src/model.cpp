#include "gmkdv/model.hpp"

#include <sstream>

#include "gmkdv/errors.hpp"

namespace gmkdv {

void ModelParams::validate() const {
  if (n != 3) throw DomainError("only the cubic nonlinearity n = 3 is supported");
  if (alpha < 0.0 || gamma < 0.0) throw DomainError("alpha and gamma must be non-negative");
  if (!(alpha + gamma > 0.0)) throw DomainError("alpha + gamma must be positive");
  if (c2 < 0.0 || c3 < 0.0) throw DomainError("c2 and c3 must be non-negative");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
}

double ModelParams::r() const {
  if (!(c3 > 0.0)) throw DomainError("r = c3/(c2+c3) requires c3 > 0");
  return c3 / (c2 + c3);
}

bool ModelParams::is_mkdv() const {
  return alpha == 0.0 && c0 == 0.0 && c2 == 0.0 && c3 == 0.0 && c1 == 2.0 && gamma == 1.0;
}

ModelParams mkdv_params(double epsilon) {
  return ModelParams{.alpha = 0.0, .gamma = 1.0, .c0 = 0.0, .c1 = 2.0, .c2 = 0.0, .c3 = 0.0,
                     .epsilon = epsilon, .n = 3};
}

ModelParams mgdp_example2_params(double epsilon) {
  return ModelParams{.alpha = 1.0, .gamma = 2.0, .c0 = 1.0, .c1 = 1.0, .c2 = 2.0, .c3 = 2.0,
                     .epsilon = epsilon, .n = 3};
}

ModelParams mgdp_example3_params(double epsilon) {
  return ModelParams{.alpha = 1.0, .gamma = 2.0, .c0 = 2.0, .c1 = 1.0, .c2 = 1.0, .c3 = 1.0,
                     .epsilon = epsilon, .n = 3};
}

std::string describe(const ModelParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "alpha=" << p.alpha << " gamma=" << p.gamma << " c0=" << p.c0 << " c1=" << p.c1
     << " c2=" << p.c2 << " c3=" << p.c3 << " eps=" << p.epsilon << " n=" << p.n;
  return os.str();
}

}  // namespace gmkdv
