#include "svcub/moment_systems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace svcub {
namespace {

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

void finalize_targets(MomentSystem& system) {
  for (auto& c : system.conditions) c.target = condition_expectation(c, system);
}

// All anchor tuples with kappa_l in {0..l-1}, l = 1..n.
std::vector<std::vector<int>> anchor_tuples(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  std::function<void(int)> rec = [&](int l) {
    if (l == n) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= l; ++k) {
      cur[l] = k;
      rec(l + 1);
    }
  };
  rec(0);
  return out;
}

IteratedIntegralSpec ones_spec(const std::vector<int>& anchors, double start, double end) {
  IteratedIntegralSpec s;
  const int n = static_cast<int>(anchors.size());
  s.word.assign(n, 1);
  for (int l = 1; l <= n; ++l) s.factors.push_back({0, anchors[l - 1], l});
  s.start = start;
  s.end = end;
  return s;
}

MomentSystem base_1d(const std::string& name, std::vector<Kernel> kernels, double start, double horizon) {
  MomentSystem s;
  s.name = name;
  s.drivers = 1;
  s.kernels = std::move(kernels);
  s.corr = Eigen::MatrixXd::Identity(1, 1);
  s.start = start;
  s.horizon = horizon;
  return s;
}

}  // namespace

double condition_expectation(const MomentCondition& c, const MomentSystem& system) {
  double sum = 0.0;
  for (const auto& t : c.terms) {
    sum += t.coef * wiener_expectation(t.spec, system.kernels, system.corr).value;
  }
  return sum;
}

std::vector<int> anchor_group_key(const std::vector<int>& anchors) {
  const int n = static_cast<int>(anchors.size());
  std::vector<int> counts(n, 0);
  int at_end = 0;
  for (int k : anchors) {
    if (k == 0) {
      ++at_end;
    } else {
      ++counts[k - 1];
    }
  }
  std::sort(counts.begin(), counts.end(), std::greater<int>());
  std::vector<int> key{at_end};
  key.insert(key.end(), counts.begin(), counts.end());
  return key;
}

MomentSystem moment_targets_1d_oneperiod(double hurst, double horizon, int order) {
  if (order < 3 || order % 2 == 0) throw std::invalid_argument("order must be odd and at least 3");
  MomentSystem s = base_1d("1d-n" + std::to_string(order) + "-oneperiod", {Kernel::power_law(hurst)}, 0.0, horizon);
  s.params = {{"H", hurst}, {"T", horizon}, {"N", order}};
  for (int n = 2; n < order; n += 2) {
    std::vector<std::pair<std::vector<int>, std::vector<std::vector<int>>>> groups;
    for (const auto& anchors : anchor_tuples(n)) {
      const auto key = anchor_group_key(anchors);
      auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == key; });
      if (it == groups.end()) {
        groups.push_back({key, {anchors}});
      } else {
        it->second.push_back(anchors);
      }
    }
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    if (n == 2) {
      // Order 3 keeps the two anchor tuples as separate conditions.
      for (const auto& anchors : anchor_tuples(2)) {
        s.conditions.push_back({"K(" + join(anchors) + ")", {{1.0, ones_spec(anchors, 0.0, horizon)}}, 0.0});
      }
      continue;
    }
    int index = 1;
    for (const auto& [key, members] : groups) {
      MomentCondition c;
      c.label = "phi" + std::to_string(index++) + "[n=" + std::to_string(n) + ",key=" + join(key) + "]";
      for (const auto& anchors : members) c.terms.push_back({1.0, ones_spec(anchors, 0.0, horizon)});
      s.conditions.push_back(std::move(c));
    }
  }
  s.weight_constraint = order > 3;
  finalize_targets(s);
  return s;
}

MomentSystem moment_targets_1d_n3_oneperiod(double hurst, double horizon) {
  return moment_targets_1d_oneperiod(hurst, horizon, 3);
}

MomentSystem moment_targets_1d_n5_oneperiod(double hurst, double horizon) {
  return moment_targets_1d_oneperiod(hurst, horizon, 5);
}

MomentSystem moment_targets_1d_n3_multi(double delta, double start) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  MomentSystem s = base_1d("1d-n3-multi", {Kernel::one()}, start, delta);
  s.params = {{"delta", delta}, {"start", start}};
  IteratedIntegralSpec pair{{1, 1}, {}, {}, start, start + delta};
  s.conditions.push_back({"B(1,1)", {{1.0, pair}}, 0.0});
  finalize_targets(s);
  return s;
}

MomentSystem moment_targets_1d_n5_multi(double delta, double start) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  MomentSystem s = base_1d("1d-n5-multi", {Kernel::one()}, start, delta);
  s.params = {{"delta", delta}, {"start", start}};
  const double end = start + delta;
  s.conditions.push_back({"B(1,1)", {{1.0, {{1, 1}, {}, {}, start, end}}}, 0.0});
  s.conditions.push_back({"(t1-s)B(1,1)+(t2-s)B(1,1)",
                          {{1.0, {{1, 1}, {}, {1, 0}, start, end}}, {1.0, {{1, 1}, {}, {0, 1}, start, end}}},
                          0.0});
  s.conditions.push_back({"B(1,1,1,1)", {{1.0, {{1, 1, 1, 1}, {}, {}, start, end}}}, 0.0});
  finalize_targets(s);
  return s;
}

MomentSystem moment_targets_2d_n3_multi(double delta, double rho, double start) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (std::abs(rho) > 1.0) throw std::domain_error("|rho| must not exceed 1");
  MomentSystem s;
  s.name = "2d-n3-multi";
  s.drivers = 2;
  s.kernels = {Kernel::one(), Kernel::one()};
  s.corr.resize(2, 2);
  s.corr << 1.0, rho, rho, 1.0;
  s.start = start;
  s.horizon = delta;
  s.params = {{"delta", delta}, {"rho", rho}, {"start", start}};
  const double end = start + delta;
  for (auto w : std::vector<std::vector<int>>{{1, 1}, {2, 2}, {1, 2}, {2, 1}}) {
    s.conditions.push_back({"B(" + join(w) + ")", {{1.0, {w, {}, {}, start, end}}}, 0.0});
  }
  finalize_targets(s);
  return s;
}

MomentSystem moment_targets_2d_n5_oneperiod(double hurst, double horizon, double rho, bool homogeneous) {
  if (std::abs(rho) > 1.0) throw std::domain_error("|rho| must not exceed 1");
  MomentSystem s;
  s.name = "2d-n5-oneperiod";
  s.drivers = 2;
  s.kernels = {Kernel::one(), Kernel::power_law(hurst)};
  s.corr.resize(2, 2);
  s.corr << 1.0, rho, rho, 1.0;
  s.start = 0.0;
  s.horizon = horizon;
  s.weight_constraint = true;
  s.params = {{"H", hurst}, {"T", horizon}, {"rho", rho}, {"homogeneous", homogeneous ? 1.0 : 0.0}};
  const double T = horizon;
  // Paper indices are 1-based: state i is kernel i-1 and is driven by letter i.
  auto K = [](int i, int anchor, int leg) { return KernelFactor{i - 1, anchor, leg}; };
  auto add = [&](const std::string& label, std::vector<int> word, std::vector<KernelFactor> factors) {
    s.conditions.push_back({label, {{1.0, {std::move(word), std::move(factors), {}, 0.0, T}}}, 0.0});
  };

  for (int i : {1, 2}) add("G2(1," + std::to_string(i) + ")", {1, i}, {K(i, 1, 2)});

  const std::vector<std::array<int, 3>> triples = {{1, 1, 1}, {1, 2, 1}, {1, 2, 2}, {2, 1, 1}, {2, 2, 1}, {2, 2, 2}};
  for (const auto& [i, j, k] : triples) {
    add("G4b(" + join({i, j, k}) + ")", {0, i, j}, {K(i, 1, 2), K(j, k, 3)});
  }
  if (!homogeneous) {
    for (int i2 : {1, 2}) add("G4s0(" + std::to_string(i2) + ")", {1, 0, i2}, {K(i2, 1, 3)});
  }
  for (const auto& [i1, i2, k2] : triples) {
    add("G4s1(" + join({i1, i2, k2}) + ")", {1, 0, i2}, {K(i1, 1, 2), K(i2, k2, 3)});
  }
  for (const auto& [i1, i2, k2] : triples) {
    add("G4s2(" + join({i1, i2, k2}) + ")", {1, i1, 0}, {K(i1, 1, 2), K(i2, k2, 3)});
  }
  const std::vector<std::array<int, 5>> quintuples = {
      {1, 1, 1, 1, 1}, {1, 1, 2, 1, 1}, {1, 1, 2, 1, 2}, {1, 1, 2, 1, 3}, {1, 2, 1, 1, 1}, {1, 2, 1, 2, 1},
      {1, 2, 2, 1, 1}, {1, 2, 2, 1, 2}, {1, 2, 2, 1, 3}, {1, 2, 2, 2, 1}, {1, 2, 2, 2, 2}, {1, 2, 2, 2, 3},
      {2, 1, 1, 1, 1}, {2, 1, 2, 1, 1}, {2, 1, 2, 1, 2}, {2, 1, 2, 1, 3}, {2, 2, 1, 1, 1}, {2, 2, 1, 2, 1},
      {2, 2, 2, 1, 1}, {2, 2, 2, 1, 2}, {2, 2, 2, 1, 3}, {2, 2, 2, 2, 1}, {2, 2, 2, 2, 2}, {2, 2, 2, 2, 3}};
  for (const auto& [i1, i2, i3, k2, k3] : quintuples) {
    add("G4s3(" + join({i1, i2, i3, k2, k3}) + ")", {1, i1, i2, i3}, {K(i1, 1, 2), K(i2, k2, 3), K(i3, k3, 4)});
  }
  finalize_targets(s);
  return s;
}

MomentSystem build_moment_system(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  if (name == "1d-n3-oneperiod") return moment_targets_1d_n3_oneperiod(get("H", 1.5), get("T", 1.0));
  if (name == "1d-n5-oneperiod") return moment_targets_1d_n5_oneperiod(get("H", 1.5), get("T", 1.0));
  if (name == "1d-n3-multi") return moment_targets_1d_n3_multi(get("delta", 1.0), get("start", 0.0));
  if (name == "1d-n5-multi") return moment_targets_1d_n5_multi(get("delta", 1.0), get("start", 0.0));
  if (name == "2d-n3-multi") return moment_targets_2d_n3_multi(get("delta", 1.0), get("rho", 0.5), get("start", 0.0));
  if (name == "2d-n5-oneperiod") {
    return moment_targets_2d_n5_oneperiod(get("H", 1.5), get("T", 1.0), get("rho", 0.5), get("homogeneous", 1.0) != 0.0);
  }
  throw std::invalid_argument("unknown moment system '" + name + "'");
}

}  // namespace svcub
