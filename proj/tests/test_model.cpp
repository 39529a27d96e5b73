#include <gtest/gtest.h>

#include <cmath>

#include "svcub/kernel.hpp"
#include "svcub/model.hpp"
#include "svcub/payoff.hpp"

using namespace svcub;

TEST(Kernel, PowerLawValues) {
  const Kernel k = Kernel::power_law(1.5);
  EXPECT_DOUBLE_EQ(k(1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(k(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(k(2.0, 0.0), 2.0 * k(1.0, 0.0));
  EXPECT_NEAR(Kernel::power_law(2.5)(3.0, 1.0), 4.0, 1e-15);
  EXPECT_NEAR(Kernel::power_law(0.8)(1.0, 0.5), std::pow(0.5, 0.3), 1e-15);
}

TEST(Kernel, ConstantKernel) {
  const Kernel k = Kernel::one();
  EXPECT_TRUE(k.is_constant());
  EXPECT_DOUBLE_EQ(k(5.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(k.diagonal(), 1.0);
}

TEST(Kernel, RejectsReversedArguments) {
  EXPECT_THROW(Kernel::power_law(1.5)(0.0, 1.0), std::domain_error);
  EXPECT_THROW(Kernel::one()(0.0, 1.0), std::domain_error);
}

TEST(Hypotheses, SmoothKernelSatisfied) {
  EXPECT_TRUE(validate_hypotheses(linear_model(2.5, 0.0), 3).all_satisfied());
}

TEST(Hypotheses, RoughKernelWarns) {
  HestonSpec s;
  s.hurst = 1.0;
  const auto r = validate_hypotheses(heston_model(s), 3);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("<= 1.5"), std::string::npos);
}

TEST(Hypotheses, ConstantKernelAnyOrder) {
  const SVIEModel m(1, {Kernel::one()}, {{CoefficientSpec::zero(), CoefficientSpec::constant(1.0)}},
                    Eigen::MatrixXd::Identity(1, 1), {0.0});
  EXPECT_TRUE(validate_hypotheses(m, 5).all_satisfied());
  EXPECT_TRUE(validate_hypotheses(m, 9).all_satisfied());
}

TEST(Coefficients, ParsedFamilies) {
  const double x[] = {0.3, 2.0};
  EXPECT_DOUBLE_EQ(CoefficientSpec::parse("cos", 0).compile()(x), std::cos(0.3));
  EXPECT_DOUBLE_EQ(CoefficientSpec::parse("U", 1).compile()(x), 2.0);
  EXPECT_DOUBLE_EQ(CoefficientSpec::parse("sqrt", 1).compile()(x), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(CoefficientSpec::parse("affine:0.5,-0.25", 1).compile()(x), 0.0);
  EXPECT_DOUBLE_EQ(CoefficientSpec::parse("const:3", 0).compile()(x), 3.0);
  EXPECT_DOUBLE_EQ(CoefficientSpec::parse("cos", 1).scaled_by(0).compile()(x), 0.3 * std::cos(2.0));
  EXPECT_THROW(CoefficientSpec::parse("tanh", 0), std::invalid_argument);
}

TEST(Coefficients, RegisteredUserFunction) {
  register_coefficient("test_square", [](StateView x) { return x[0] * x[0]; });
  const double x[] = {3.0};
  EXPECT_DOUBLE_EQ(CoefficientSpec::user("test_square").compile()(x), 9.0);
  EXPECT_THROW(CoefficientSpec::user("missing_fn").compile(), std::invalid_argument);
}

TEST(Model, HestonStructure) {
  HestonSpec s;
  s.rho = 0.5;
  const SVIEModel m = heston_model(s);
  EXPECT_EQ(m.drivers(), 2);
  EXPECT_EQ(m.states(), 2);
  EXPECT_TRUE(m.is_semimartingale(0));
  EXPECT_FALSE(m.is_semimartingale(1));
  const Eigen::MatrixXd a = m.correlation_factor();
  EXPECT_LT((a * a.transpose() - m.correlation()).norm(), 1e-14);
  // U drift 1/2 - U/3 at U = 1.
  const double x[] = {1.0, 1.0};
  EXPECT_NEAR(m.coefficient(1, 0, x), 0.5 - 1.0 / 3.0, 1e-15);
}

TEST(Model, RejectsBadCorrelation) {
  Eigen::MatrixXd c(2, 2);
  c << 1.0, 1.5, 1.5, 1.0;
  EXPECT_THROW(SVIEModel(2, {Kernel::one()},
                         {{CoefficientSpec::zero(), CoefficientSpec::constant(1), CoefficientSpec::zero()}}, c, {0.0}),
               std::invalid_argument);
}

TEST(Payoff, Families) {
  const Payoff call = parse_payoff("call:0.5");
  EXPECT_DOUBLE_EQ(call.at(1.0), 0.5);
  EXPECT_DOUBLE_EQ(call.at(0.2), 0.0);
  EXPECT_FALSE(call.smooth);
  EXPECT_FALSE(call.warning().empty());
  EXPECT_DOUBLE_EQ(parse_payoff("x2").at(3.0), 9.0);
  EXPECT_DOUBLE_EQ(parse_payoff("cos").at(0.0), 1.0);
  EXPECT_TRUE(parse_payoff("cos").warning().empty());
  EXPECT_THROW(parse_payoff("digital"), std::invalid_argument);
}
