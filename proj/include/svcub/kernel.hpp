#pragma once

#include <string>

namespace svcub {

enum class KernelKind { one, power_law };

// Convolution kernel K(t, r): identically one, or (t - r)^(H - 1/2) with H > 1/2.
class Kernel {
 public:
  Kernel() = default;

  static Kernel one();
  static Kernel power_law(double hurst);

  KernelKind kind() const { return kind_; }
  double hurst() const { return hurst_; }
  // H - 1/2 for power-law kernels, 0 for the constant kernel.
  double exponent() const { return kind_ == KernelKind::one ? 0.0 : hurst_ - 0.5; }
  bool is_constant() const { return kind_ == KernelKind::one; }
  // Value on the diagonal r = t.
  double diagonal() const { return kind_ == KernelKind::one ? 1.0 : 0.0; }

  // Throws std::domain_error when r > t.
  double operator()(double t, double r) const;
  // Value at lag u = t - r >= 0 without argument checks.
  double at_lag(double u) const;

  std::string describe() const;

 private:
  KernelKind kind_ = KernelKind::one;
  double hurst_ = 0.0;
};

}  // namespace svcub
