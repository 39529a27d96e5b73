#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

namespace svcub {

// G applied to one coordinate of the terminal state.
struct Payoff {
  std::string name;
  std::function<double(double)> g;
  int read_index = 0;
  bool smooth = true;           // false for payoffs with a kink (e.g. calls)
  std::optional<double> kink;   // location of the kink, used by the quadrature oracle

  double operator()(std::span<const double> state) const { return g(state[read_index]); }
  double at(double x) const { return g(x); }
  // Non-empty for payoffs that violate the smoothness assumed by the error bounds.
  std::string warning() const;
};

Payoff payoff_cos(int read_index = 0);
Payoff payoff_square(int read_index = 0);
Payoff payoff_call(double strike, int read_index = 0);
Payoff payoff_identity(int read_index = 0);
// Accepts cos, x2 / square, call:K (also "(x-K)+"), identity.
Payoff parse_payoff(const std::string& text, int read_index = 0);

}  // namespace svcub
