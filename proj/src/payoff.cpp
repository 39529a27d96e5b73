#include "svcub/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace svcub {

std::string Payoff::warning() const {
  if (smooth) return {};
  return "payoff " + name + " is not smooth; error bounds assume a smooth G";
}

Payoff payoff_cos(int read_index) {
  return {"cos", [](double x) { return std::cos(x); }, read_index, true, std::nullopt};
}

Payoff payoff_square(int read_index) {
  return {"x^2", [](double x) { return x * x; }, read_index, true, std::nullopt};
}

Payoff payoff_call(double strike, int read_index) {
  std::ostringstream os;
  os << "(x-" << strike << ")+";
  return {os.str(), [strike](double x) { return std::max(x - strike, 0.0); }, read_index, false, strike};
}

Payoff payoff_identity(int read_index) {
  return {"x", [](double x) { return x; }, read_index, true, std::nullopt};
}

Payoff parse_payoff(const std::string& text, int read_index) {
  if (text == "cos") return payoff_cos(read_index);
  if (text == "x2" || text == "square" || text == "x^2") return payoff_square(read_index);
  if (text == "x" || text == "identity") return payoff_identity(read_index);
  std::string body;
  if (text.rfind("call:", 0) == 0) {
    body = text.substr(5);
  } else if (text.rfind("(x-", 0) == 0 && text.size() > 5 && text.substr(text.size() - 2) == ")+") {
    body = text.substr(3, text.size() - 5);
  }
  if (!body.empty()) {
    try {
      return payoff_call(std::stod(body), read_index);
    } catch (const std::exception&) {
    }
  }
  throw std::invalid_argument("unknown payoff '" + text + "' (expected cos, x2, x, call:K)");
}

}  // namespace svcub
