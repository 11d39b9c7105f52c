#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "magweyl/field.hpp"
#include "magweyl/grid.hpp"
#include "magweyl/moyal.hpp"
#include "magweyl/quantize.hpp"
#include "magweyl/symbols.hpp"

using namespace magweyl;
using Cplx = std::complex<double>;
static const Cplx kI(0.0, 1.0);

namespace {

Eigen::VectorXd v2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

double maxdiff(const SymbolField& a, const SymbolField& b) {
  return (a.values - b.values).cwiseAbs().maxCoeff();
}

SymbolField gauss2(const SpatialGrid& g) {
  return sample(g, parse_expr("exp(-x1^2-x2^2-xi1^2-xi2^2)", 2));
}

SymbolField gauss2_shift(const SpatialGrid& g) {
  return sample(g, parse_expr("exp(-(x1-1)^2-x2^2-(xi1-0.5)^2-xi2^2)", 2));
}

}  // namespace

TEST_CASE("product: unit, associativity, involution (operator route)") {
  SpatialGrid g = make_grid(2, 12, 12.0);
  Gauge A = symmetric_gauge(make_scalar_field(1.0));
  SymbolField f = gauss2(g), h = gauss2_shift(g);
  SymbolField one = sample(g, econst(1.0));

  CHECK(maxdiff(compose_operator_route(f, one, A), f) < 1e-12);
  CHECK(maxdiff(compose_operator_route(one, f, A), f) < 1e-12);

  SymbolField k = sample(g, parse_expr("xi1*exp(-x1^2-x2^2-xi1^2-xi2^2)", 2));
  SymbolField lhs = compose_operator_route(compose_operator_route(f, h, A), k, A);
  SymbolField rhs = compose_operator_route(f, compose_operator_route(h, k, A), A);
  CHECK(maxdiff(lhs, rhs) < 1e-10);

  // conj(f # h) = conj(h) # conj(f); spectral property, needs a grid that
  // resolves both factors (x-Nyquist and max-displacement content < tol)
  SpatialGrid gr = make_grid(1, 80, 22.0);
  Gauge Ar = make_zero_gauge(1);
  SymbolField fr = add(sample(gr, parse_expr("exp(-0.8*(x1^2+xi1^2))", 1)),
                       scale(sample(gr, parse_expr("x1*exp(-0.5*(x1^2+xi1^2))", 1)), kI));
  SymbolField hr = add(sample(gr, parse_expr("exp(-0.6*((x1-1)^2+(xi1-0.5)^2))", 1)),
                       scale(sample(gr, parse_expr("xi1*exp(-0.6*(x1^2+xi1^2))", 1)),
                             Cplx(0, -0.7)));
  SymbolField il = compose_operator_route(fr, hr, Ar);
  il.values = il.values.conjugate().eval();
  SymbolField fc = fr, hc = hr;
  fc.values = fr.values.conjugate();
  hc.values = hr.values.conjugate();
  CHECK(maxdiff(il, compose_operator_route(hc, fc, Ar)) < 1e-11);
}

TEST_CASE("product is gauge-independent") {
  SpatialGrid g = make_grid(2, 12, 12.0);
  MagneticField B = make_scalar_field(1.0);
  SymbolField f = gauss2(g), h = gauss2_shift(g);
  SymbolField a = compose_operator_route(f, h, symmetric_gauge(B));
  SymbolField b = compose_operator_route(f, h, landau_gauge(1.0));
  CHECK(maxdiff(a, b) < 1e-11);
}

TEST_CASE("zero-field ground-state projector identity, mode route") {
  // exp(-(x^2+xi^2)) # exp(-(x^2+xi^2)) = exp(-(x^2+xi^2))/2 in 1D
  SpatialGrid g = make_grid(1, 48, 14.0);
  Gauge A0 = make_zero_gauge(1);
  SymbolField f = sample(g, parse_expr("exp(-x1^2-xi1^2)", 1));
  SymbolField p = compose_operator_route(f, f, A0);
  SymbolField want = sample(g, parse_expr("0.5*exp(-x1^2-xi1^2)", 1));
  CHECK(window_residual(p, want) < 1e-6);
}

TEST_CASE("canonical commutator at zero field (windowed)") {
  SpatialGrid g = make_grid(1, 128, 16.0);
  Gauge A0 = make_zero_gauge(1);
  Eigen::MatrixXcd Q = quantize(sample(g, emul(evar_x(0), window_x_expr(g))), A0).mat;
  Eigen::MatrixXcd D = quantize(sample(g, emul(evar_xi(0), window_xi_expr(g))), A0).mat;
  SymbolField c = dequantize(Q * D - D * Q, A0, g);
  CHECK(window_residual_const(c, kI) < 1e-8);
}

TEST_CASE("integral route agrees with the mode route pointwise") {
  SpatialGrid g = make_grid(1, 28, 14.0);
  MagneticField B0 = make_constant_field(1, Eigen::MatrixXd::Zero(1, 1));
  Gauge A0 = make_zero_gauge(1);
  SymbolField f = sample(g, parse_expr("exp(-x1^2-xi1^2)", 1));
  SymbolField h = sample(g, parse_expr("exp(-(x1-0.5)^2-(xi1+0.5)^2)", 1));
  SymbolField ref = compose_operator_route(f, h, A0);
  std::vector<std::pair<long, long>> pts;
  for (long i = 11; i <= 17; ++i) pts.push_back({i, 28 - i});
  for (long i = 12; i <= 16; ++i) pts.push_back({i, i});
  auto got = compose_integral_at(f, h, B0, pts);
  double r = 0.0;
  for (size_t k = 0; k < pts.size(); ++k)
    r = std::max(r, std::abs(got[k] - ref.values(pts[k].first, pts[k].second)));
  CHECK(r < 1e-4);
}

TEST_CASE("integral route reproduces the projector identity at its points") {
  SpatialGrid g = make_grid(1, 28, 14.0);
  MagneticField B0 = make_constant_field(1, Eigen::MatrixXd::Zero(1, 1));
  SymbolField f = sample(g, parse_expr("exp(-x1^2-xi1^2)", 1));
  std::vector<std::pair<long, long>> pts = {{14, 14}, {13, 15}, {15, 13}, {12, 14}};
  auto got = compose_integral_at(f, f, B0, pts);
  for (size_t k = 0; k < pts.size(); ++k) {
    double x = g.x[pts[k].first], xi = g.xi[pts[k].second];
    CHECK(std::abs(got[k] - 0.5 * std::exp(-(x * x + xi * xi))) < 5e-3);
  }
}

TEST_CASE("integral route rejects non-decaying input") {
  SpatialGrid g = make_grid(1, 16, 8.0);
  MagneticField B0 = make_constant_field(1, Eigen::MatrixXd::Zero(1, 1));
  SymbolField one = sample(g, econst(1.0));
  std::vector<std::pair<long, long>> pts = {{8, 8}};
  CHECK_THROWS_AS(compose_integral_at(one, one, B0, pts), Error);
}

TEST_CASE("integral route is capped at desk scale") {
  SpatialGrid g = make_grid(2, 32, 16.0);  // 1024 points > 512
  MagneticField B = make_scalar_field(0.5);
  SymbolField f = gauss2(g);
  std::vector<std::pair<long, long>> pts = {{0, 0}};
  CHECK_THROWS_AS(compose_integral_at(f, f, B, pts), Error);
}

TEST_CASE("expansion order 0 is the pointwise product") {
  SpatialGrid g = make_grid(2, 12, 12.0);
  MagneticField B = make_scalar_field(1.0);
  SymbolField f = gauss2(g), h = gauss2_shift(g);
  CHECK(maxdiff(expansion_term(f, h, B, 0), mul(f, h)) < 1e-13);
}

TEST_CASE("expansion order 1 at zero field is the scaled bracket") {
  SpatialGrid g = make_grid(2, 12, 12.0);
  MagneticField B0 = make_constant_field(2, Eigen::MatrixXd::Zero(2, 2));
  SymbolField f = gauss2(g), h = gauss2_shift(g);
  SymbolField h1 = expansion_term(f, h, B0, 1);
  SymbolField want = sample(g, econst(0.0));
  want.re = nullptr;
  for (int j = 0; j < 2; ++j) {
    want = add(want, scale(mul(derivative(f, j, true), derivative(h, j, false)), 0.5 * kI));
    want = add(want, scale(mul(derivative(f, j, false), derivative(h, j, true)), -0.5 * kI));
  }
  CHECK(maxdiff(h1, want) < 1e-12);
}

TEST_CASE("first magnetic correction carries the field term") {
  // for f = g = |xi|^2-free pure momenta the l=1 magnetic part vanishes; use
  // xi-linear pair where h1's B-term is absent but l=2's B-term is not:
  // check instead h1(xi1, xi2) at constant b: bracket part is zero, so
  // h1 = 0 identically (the B-term enters first at l=2)
  SpatialGrid g = make_grid(2, 12, 12.0);
  MagneticField B = make_scalar_field(1.0);
  SymbolField f = sample(g, evar_xi(0)), h = sample(g, evar_xi(1));
  SymbolField h1 = expansion_term(f, h, B, 1);
  CHECK(h1.values.cwiseAbs().maxCoeff() < 1e-14);
  // l=2: the printed closed form and the general formula agree here because
  // the pure-diagonal second xi-derivatives of xi-linear symbols vanish
  SymbolField h2g = expansion_term(f, h, B, 2);
  SymbolField h2p = printed_h2(f, h, B);
  CHECK(maxdiff(h2g, h2p) < 1e-13);
  // and the commutator assembled from the expansion: xi1 # xi2 - xi2 # xi1
  // picks up i*B12 from the two l=2 B-terms (the series terminates at l=2
  // for xi-linear symbols, so this is the whole commutator)
  SymbolField h2r = expansion_term(h, f, B, 2);
  SymbolField comm = sub(h2g, h2r);
  CHECK((comm.values.array() - Cplx(0.0, 1.0)).abs().maxCoeff() < 1e-13);
}

TEST_CASE("printed and general second-order forms differ only on the diagonal") {
  SpatialGrid g = make_grid(2, 12, 12.0);
  MagneticField B = make_scalar_field(1.0);
  SymbolField f = gauss2(g), h = gauss2_shift(g);
  double gap = maxdiff(expansion_term(f, h, B, 2), printed_h2(f, h, B));
  CHECK(gap > 1e-6);  // the discrepancy is real and recorded
}

TEST_CASE("expansion of degree-2 xi-polynomials terminates at order 4") {
  SpatialGrid g = make_grid(2, 16, 12.0);
  MagneticField B = make_scalar_field(0.5);
  ExprPtr wx = window_x_expr(g);
  SymbolField f = sample(g, emul(wx, eadd(kinetic_expr(2), econst(1.0))));
  SymbolField h = sample(g, emul(wx, emul(evar_xi(0), evar_xi(1))));
  for (int l : {5, 6}) {
    SymbolField t = expansion_term(f, h, B, l);
    CHECK(t.values.cwiseAbs().maxCoeff() == 0.0);  // zero-tree detection
  }
}

TEST_CASE("expansion partial sums approach the mode-route product") {
  // slowly varying pair: each extra order gains roughly 2x-8x here
  SpatialGrid g = make_grid(1, 96, 24.0);
  MagneticField B0 = make_constant_field(1, Eigen::MatrixXd::Zero(1, 1));
  Gauge A0 = make_zero_gauge(1);
  SymbolField f = sample(g, parse_expr("exp(-0.2*(x1^2+xi1^2))", 1));
  SymbolField h = sample(g, parse_expr("exp(-0.25*((x1-1)^2+(xi1-0.5)^2))", 1));
  SymbolField full = compose_operator_route(f, h, A0);
  double prev = 1e300;
  std::vector<ExpansionTermEntry> table;
  SymbolField acc = compose_expansion(f, h, B0, 0, &table);
  for (int k : {1, 2, 3, 4}) {
    double r = window_residual(full, acc);
    CHECK(r < prev * 1.2);  // monotone up to noise floor
    prev = r;
    acc = compose_expansion(f, h, B0, k, &table);
  }
  CHECK(window_residual(full, acc) < 1e-3);  // measured 2.6e-4 at l<=4
  CHECK(!table.empty());
}

TEST_CASE("ad of a constant symbol vanishes; ad matches its definition") {
  SpatialGrid g = make_grid(1, 32, 16.0);
  Gauge A0 = make_zero_gauge(1);
  Eigen::VectorXd x0(1), k0(1);
  x0 << 1.0;
  k0 << 0.5;
  SymbolField one = sample(g, econst(3.0));
  CHECK(ad_b(one, A0, x0, k0).values.cwiseAbs().maxCoeff() < 1e-12);

  SymbolField f = sample(g, parse_expr("exp(-x1^2-xi1^2)", 1));
  SymbolField got = ad_b(f, A0, x0, k0);
  Eigen::MatrixXcd L = quantize(sample(g, linear_form_expr(x0, k0)), A0).mat;
  Eigen::MatrixXcd K = quantize(f, A0).mat;
  SymbolField want = dequantize(L * K - K * L, A0, g);
  CHECK(maxdiff(got, want) < 1e-12);
}

TEST_CASE("twisted translation at t=0 is the identity map") {
  SpatialGrid g = make_grid(1, 32, 16.0);
  Gauge A0 = make_zero_gauge(1);
  SymbolField f = sample(g, parse_expr("exp(-x1^2-xi1^2)", 1));
  Eigen::VectorXd x0(1), k0(1);
  x0 << 1.0;
  k0 << 0.5;
  CHECK(maxdiff(twisted_translation(f, A0, x0, k0, 0.0), f) < 1e-12);
}

TEST_CASE("central difference of the twisted flow converges to ad at order 2") {
  SpatialGrid g = make_grid(1, 48, 16.0);
  Gauge A0 = make_zero_gauge(1);
  SymbolField f = sample(g, parse_expr("exp(-x1^2-xi1^2)", 1));
  Eigen::VectorXd x0(1), k0(1);
  x0 << 1.0;
  k0 << 0.5;
  SymbolField adf = ad_b(f, A0, x0, k0);
  auto dev = [&](double t) {
    SymbolField p = twisted_translation(f, A0, x0, k0, t);
    SymbolField m = twisted_translation(f, A0, x0, k0, -t);
    return window_residual(scale(sub(p, m), Cplx(0.0, -0.5 / t)), adf);
  };
  double r1 = dev(0.2), r2 = dev(0.1);
  double order = std::log2(r1 / r2);
  CHECK(std::abs(order - 2.0) < 0.4);
}

TEST_CASE("commutator seminorm: empty direction list is the weighted norm") {
  SpatialGrid g = make_grid(1, 24, 12.0);
  Gauge A0 = make_zero_gauge(1);
  SymbolField f = sample(g, parse_expr("exp(-x1^2-xi1^2)", 1));
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> dirs;
  double got = beals_bony_seminorm(f, A0, dirs, 0.0, 0.0);
  double want = operator_norm(quantize(f, A0).mat);
  CHECK(std::abs(got - want) < 1e-10);
}

TEST_CASE("commutator seminorm: one direction matches the direct commutator") {
  SpatialGrid g = make_grid(1, 24, 12.0);
  Gauge A0 = make_zero_gauge(1);
  SymbolField f = sample(g, parse_expr("exp(-x1^2-xi1^2)", 1));
  Eigen::VectorXd x0(1), k0(1);
  x0 << 1.0;
  k0 << -0.5;
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> dirs = {{x0, k0}};
  double got = beals_bony_seminorm(f, A0, dirs, 0.0, 0.0);
  Eigen::MatrixXcd L = quantize(sample(g, linear_form_expr(x0, k0)), A0).mat;
  Eigen::MatrixXcd K = quantize(f, A0).mat;
  CHECK(std::abs(got - operator_norm(L * K - K * L)) < 1e-10);
}
