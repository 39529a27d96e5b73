#include "svcub/kernel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace svcub {

Kernel Kernel::one() { return Kernel(); }

Kernel Kernel::power_law(double hurst) {
  if (!(hurst > 0.5) || !std::isfinite(hurst)) {
    throw std::invalid_argument("power-law kernel requires H > 1/2, got H = " +
                                std::to_string(hurst));
  }
  Kernel k;
  k.kind_ = KernelKind::power_law;
  k.hurst_ = hurst;
  return k;
}

double Kernel::at_lag(double u) const {
  if (kind_ == KernelKind::one) return 1.0;
  if (u <= 0.0) return 0.0;
  const double p = hurst_ - 0.5;
  if (p == 1.0) return u;
  if (p == 2.0) return u * u;
  return std::pow(u, p);
}

double Kernel::operator()(double t, double r) const {
  if (r > t) {
    std::ostringstream os;
    os << "kernel evaluated with r > t (t = " << t << ", r = " << r << ")";
    throw std::domain_error(os.str());
  }
  return at_lag(t - r);
}

std::string Kernel::describe() const {
  if (kind_ == KernelKind::one) return "one";
  std::ostringstream os;
  os << "power(H=" << hurst_ << ")";
  return os.str();
}

}  // namespace svcub
