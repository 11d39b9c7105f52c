#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "magweyl/grid.hpp"
#include "magweyl/symbols.hpp"

using namespace magweyl;

namespace {

double eval(const ExprPtr& e, const Eigen::VectorXd& x, const Eigen::VectorXd& xi) {
  return e->eval(x, xi);
}

Eigen::VectorXd v2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

// 5-point Richardson first derivative of an expression evaluation
double fd_oracle(const ExprPtr& e, Eigen::VectorXd x, const Eigen::VectorXd& xi, int axis,
                 bool wrt_x, double h = 1e-3) {
  auto at = [&](double t) {
    Eigen::VectorXd xx = x, kk = xi;
    if (wrt_x)
      xx[axis] += t;
    else
      kk[axis] += t;
    return eval(e, xx, kk);
  };
  return (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12 * h);
}

}  // namespace

TEST_CASE("parser grammar: arithmetic, powers, functions, precedence") {
  ExprPtr e = parse_expr("2*x1 + xi2^3 - 0.5*exp(-x2^2)*cos(xi1) + sqrt(1+x1^2)", 2);
  auto want = [](const Eigen::VectorXd& x, const Eigen::VectorXd& k) {
    return 2 * x[0] + k[1] * k[1] * k[1] - 0.5 * std::exp(-x[1] * x[1]) * std::cos(k[0]) +
           std::sqrt(1 + x[0] * x[0]);
  };
  const double pts[3][4] = {{0, 0, 0, 0}, {1.5, -0.5, 0.7, -1.2}, {-2, 1, 2, 0.3}};
  for (auto& p : pts) {
    Eigen::VectorXd x = v2(p[0], p[1]), k = v2(p[2], p[3]);
    CHECK(std::abs(eval(e, x, k) - want(x, k)) < 1e-14);
  }
}

TEST_CASE("parser rejects malformed input and out-of-range variables") {
  CHECK_THROWS_AS(parse_expr("x3 + 1", 2), Error);
  CHECK_THROWS_AS(parse_expr("xi1 +", 1), Error);
  CHECK_THROWS_AS(parse_expr("foo(x1)", 1), Error);
  CHECK_THROWS_AS(parse_expr("", 1), Error);
}

TEST_CASE("exact differentiation vs Richardson oracle") {
  ExprPtr e = parse_expr("exp(-x1^2 - 0.5*xi1^2)*sin(x1*xi1) + (1+xi1^2)^1.5", 1);
  Eigen::VectorXd x(1), k(1);
  const double pts[3][2] = {{0.3, -0.8}, {1.1, 0.4}, {-0.7, 1.3}};
  for (auto& p : pts) {
    x << p[0];
    k << p[1];
    ExprPtr dx = differentiate(e, 0, true);
    ExprPtr dk = differentiate(e, 0, false);
    CHECK(std::abs(eval(dx, x, k) - fd_oracle(e, x, k, 0, true)) < 1e-9);
    CHECK(std::abs(eval(dk, x, k) - fd_oracle(e, x, k, 0, false)) < 1e-9);
  }
}

TEST_CASE("erf derivative chain") {
  ExprPtr e = eerf(evar_x(0));
  Eigen::VectorXd x(1), k(1);
  x << 0.6;
  k << 0.0;
  ExprPtr d = differentiate(e, 0, true);
  double want = 2.0 / std::sqrt(M_PI) * std::exp(-0.36);
  CHECK(std::abs(eval(d, x, k) - want) < 1e-14);
}

TEST_CASE("sampled field derivative: descriptor path is analytic") {
  SpatialGrid g = make_grid(1, 48, 16.0);
  ExprPtr e = eexp(eneg(eadd(emul(evar_x(0), evar_x(0)), emul(evar_xi(0), evar_xi(0)))));
  SymbolField f = sample(g, e);
  SymbolField d = derivative(f, 0, true);
  ExprPtr de = differentiate(e, 0, true);
  double r = 0.0;
  Eigen::VectorXd x(1), k(1);
  for (long i = 0; i < g.n; ++i)
    for (long q = 0; q < g.n; ++q) {
      x << g.x[i];
      k << g.xi[q];
      r = std::max(r, std::abs(d.values(i, q) - eval(de, x, k)));
    }
  CHECK(r < 1e-13);
}

TEST_CASE("fd_derivative tracks the analytic derivative on smooth data") {
  SpatialGrid g = make_grid(1, 64, 20.0);
  ExprPtr e = eexp(eneg(eadd(emul(econst(0.5), emul(evar_x(0), evar_x(0))),
                             emul(econst(0.5), emul(evar_xi(0), evar_xi(0))))));
  SymbolField f = sample(g, e);
  CHECK((derivative(f, 0, true).values - fd_derivative(f, 0, true).values).cwiseAbs().maxCoeff() <
        1e-2);
  CHECK((derivative(f, 0, false).values - fd_derivative(f, 0, false).values).cwiseAbs().maxCoeff() <
        5e-2);
}

TEST_CASE("field algebra keeps descriptors exact") {
  SpatialGrid g = make_grid(1, 32, 12.0);
  SymbolField a = sample(g, parse_expr("exp(-x1^2)", 1));
  SymbolField b = sample(g, parse_expr("xi1^2", 1));
  SymbolField s = mul(a, b);
  CHECK(s.has_descriptor());
  SymbolField ds = derivative(s, 0, false);  // product rule through the tree
  Eigen::VectorXd x(1), k(1);
  x << g.x[5];
  k << g.xi[20];
  double want = std::exp(-x[0] * x[0]) * 2.0 * k[0];
  CHECK(std::abs(ds.values(5, 20) - want) < 1e-13);
}

TEST_CASE("order weight and shifted kinetic evaluate to their formulas") {
  SpatialGrid g = make_grid(2, 8, 8.0);
  SymbolField w = sample(g, order_weight_expr(2, -1.5));
  SymbolField sk = sample(g, shifted_kinetic_expr(2, 3.0));
  int idx[2] = {3, 6};
  long I = g.flatten(idx);
  // row index encodes x, column index encodes xi; xi of column K
  for (long K = 0; K < g.points(); ++K) {
    int kd[2];
    g.unflatten(K, kd);
    double q2 = g.xi[kd[0]] * g.xi[kd[0]] + g.xi[kd[1]] * g.xi[kd[1]];
    CHECK(std::abs(w.values(I, K).real() - std::pow(1.0 + q2, -0.75)) < 1e-13);
    CHECK(std::abs(sk.values(I, K).real() - (3.0 + q2)) < 1e-12);
  }
}

TEST_CASE("plateau windows: flat center, vanishing edge") {
  SpatialGrid g = make_grid(1, 64, 16.0);
  SymbolField wx = sample(g, window_x_expr(g));
  // center column block ~1, edge ~0
  CHECK(std::abs(wx.values(32, 0).real() - 1.0) < 1e-6);
  CHECK(std::abs(wx.values(0, 0).real()) < 1e-3);
}

TEST_CASE("exp_linear_form is unimodular with the right phase") {
  SpatialGrid g = make_grid(1, 24, 12.0);
  Eigen::VectorXd x0(1), k0(1);
  x0 << 1.0;
  k0 << -0.5;
  double t = 0.7;
  SymbolField e = exp_linear_form(g, x0, k0, t);
  ExprPtr l = linear_form_expr(x0, k0);
  Eigen::VectorXd x(1), k(1);
  for (long i : {0L, 7L, 13L})
    for (long q : {2L, 11L, 23L}) {
      x << g.x[i];
      k << g.xi[q];
      std::complex<double> want = std::polar(1.0, -t * eval(l, x, k));
      CHECK(std::abs(e.values(i, q) - want) < 1e-13);
      CHECK(std::abs(std::abs(e.values(i, q)) - 1.0) < 1e-14);
    }
}

TEST_CASE("seminorm of the Gaussian: order-0 value and monotonicity") {
  SpatialGrid g = make_grid(1, 32, 16.0);
  SymbolField f = sample(g, parse_expr("exp(-x1^2 - xi1^2)", 1));
  double s0 = seminorm(f, 0.0, 0.0, 0.0, 0);
  CHECK(std::abs(s0 - 1.0) < 1e-12);  // sup |f| attained at the origin
  CHECK(seminorm(f, 0.0, 1.0, 0.0, 2) >= s0);
}

TEST_CASE("seminorm with weight: sup of |f| <xi>^{-m}") {
  SpatialGrid g = make_grid(1, 32, 16.0);
  SymbolField f = sample(g, parse_expr("1 + xi1^2", 1));
  // |f| <xi>^{-2} = 1 everywhere
  CHECK(std::abs(seminorm(f, 2.0, 1.0, 0.0, 0) - 1.0) < 1e-12);
}

TEST_CASE("ellipticity margin: elliptic vs oscillatory") {
  SpatialGrid g = make_grid(2, 16, 8.0);
  EllipticityMargin kin = ellipticity_margin(sample(g, kinetic_expr(2)), 2.0);
  CHECK(kin.ok);
  CHECK(kin.constant > 0.2);
  EllipticityMargin wgt = ellipticity_margin(sample(g, order_weight_expr(2, 2.0)), 2.0);
  CHECK(wgt.ok);
  CHECK(std::abs(wgt.constant - 1.0) < 1e-9);
  EllipticityMargin osc = ellipticity_margin(sample(g, esin(evar_xi(0))), 0.0);
  CHECK_FALSE(osc.ok);
}

TEST_CASE("comparison window: residual of a constant offset is the offset") {
  SpatialGrid g = make_grid(1, 32, 16.0);
  SymbolField f = sample(g, parse_expr("exp(-x1^2-xi1^2)", 1));
  SymbolField fc = add(f, sample(g, econst(0.25)));
  CHECK(std::abs(window_residual(f, fc) - 0.25) < 1e-13);
  CHECK(window_residual(f, f) == 0.0);
}

TEST_CASE("grid mismatch in field algebra is rejected") {
  SymbolField a = sample(make_grid(1, 16, 8.0), econst(1.0));
  SymbolField b = sample(make_grid(1, 32, 8.0), econst(1.0));
  CHECK_THROWS_AS(add(a, b), Error);
}
