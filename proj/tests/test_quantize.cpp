#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "magweyl/field.hpp"
#include "magweyl/grid.hpp"
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

SymbolField gauss1(const SpatialGrid& g) {
  return sample(g, parse_expr("exp(-x1^2 - xi1^2)", 1));
}

}  // namespace

TEST_CASE("quantize/dequantize round trip is exact (zero, Landau, symmetric)") {
  SpatialGrid g1 = make_grid(1, 32, 16.0);
  Gauge A0 = make_zero_gauge(1);
  SymbolField f1 = gauss1(g1);
  CHECK((dequantize(quantize(f1, A0), A0).values - f1.values).cwiseAbs().maxCoeff() < 1e-13);

  SpatialGrid g2 = make_grid(2, 12, 12.0);
  SymbolField f2 = sample(g2, parse_expr("exp(-x1^2-x2^2-xi1^2-xi2^2)*(1+xi1)", 2));
  for (const Gauge& A : {landau_gauge(1.0), symmetric_gauge(make_scalar_field(1.0))}) {
    SymbolField back = dequantize(quantize(f2, A), A);
    CHECK((back.values - f2.values).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("round trip in the other order: matrix -> symbol -> matrix") {
  SpatialGrid g = make_grid(1, 16, 8.0);
  Gauge A0 = make_zero_gauge(1);
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Random(16, 16);
  SymbolField s = dequantize(K, A0, g);
  CHECK((quantize(s, A0).mat - K).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("constant symbol quantizes to the identity in any gauge") {
  SpatialGrid g = make_grid(2, 10, 10.0);
  Gauge A = symmetric_gauge(make_scalar_field(1.5));
  Eigen::MatrixXcd K = quantize(sample(g, econst(1.0)), A).mat;
  CHECK((K - Eigen::MatrixXcd::Identity(100, 100)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("x-only symbols quantize to multiplication operators") {
  SpatialGrid g = make_grid(1, 32, 16.0);
  Gauge A0 = make_zero_gauge(1);
  SymbolField f = sample(g, parse_expr("exp(-0.5*x1^2)", 1));
  Eigen::MatrixXcd K = quantize(f, A0).mat;
  double off = 0.0, diag = 0.0;
  for (long i = 0; i < 32; ++i)
    for (long j = 0; j < 32; ++j) {
      if (i == j)
        diag = std::max(diag, std::abs(K(i, i) - std::exp(-0.5 * g.x[i] * g.x[i])));
      else
        off = std::max(off, std::abs(K(i, j)));
    }
  CHECK(diag < 1e-13);
  CHECK(off < 1e-13);
}

TEST_CASE("xi-only symbols quantize to Fourier multipliers") {
  SpatialGrid g = make_grid(1, 32, 16.0);
  Gauge A0 = make_zero_gauge(1);
  CHECK((quantize(sample(g, evar_xi(0)), A0).mat - multiplier_matrix(g, 0)).cwiseAbs().maxCoeff() <
        1e-12);
  // plane wave at an exact dual frequency is an eigenvector
  long k = 20;
  Eigen::VectorXcd u(32);
  for (long i = 0; i < 32; ++i) u[i] = std::polar(1.0, g.xi[k] * g.x[i]);
  Eigen::VectorXcd r = multiplier_matrix(g, 0) * u - g.xi[k] * u;
  CHECK(r.cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("quantization is complex-linear") {
  SpatialGrid g = make_grid(2, 10, 10.0);
  Gauge A = landau_gauge(0.7);
  SymbolField f = sample(g, parse_expr("exp(-x1^2-x2^2-xi1^2-xi2^2)", 2));
  SymbolField h = sample(g, parse_expr("exp(-(x1-1)^2-x2^2-(xi1+0.5)^2-xi2^2)", 2));
  Cplx al(0.3, -1.2), be(2.0, 0.4);
  Eigen::MatrixXcd lhs = quantize(add(scale(f, al), scale(h, be)), A).mat;
  Eigen::MatrixXcd rhs = al * quantize(f, A).mat + be * quantize(h, A).mat;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("real symbols give Hermitian kernels") {
  SpatialGrid g = make_grid(2, 12, 12.0);
  Gauge A = symmetric_gauge(make_scalar_field(1.0));
  SymbolField f = sample(g, parse_expr("1 + xi1^2 + xi2^2 - 2*exp(-x1^2-x2^2)", 2));
  CHECK(quantize(f, A).herm_residual < 1e-12);
}

TEST_CASE("gauge covariance: kernels conjugate by the phase diagonal") {
  SpatialGrid g = make_grid(2, 12, 12.0);
  MagneticField B = make_scalar_field(1.0);
  Gauge AL = landau_gauge(1.0);
  auto phi = [](const Eigen::VectorXd& x) { return -0.5 * x[0] * x[1]; };
  Gauge AS = symmetric_gauge(B);  // equals AL + grad(phi)
  SymbolField f = sample(g, parse_expr("exp(-x1^2-x2^2-xi1^2-xi2^2)", 2));
  Eigen::MatrixXcd KL = quantize(f, AL).mat, KS = quantize(f, AS).mat;
  long P = g.points();
  Eigen::VectorXcd u(P);
  for (long I = 0; I < P; ++I) u[I] = std::polar(1.0, phi(g.point(I)));
  Eigen::MatrixXcd conj = u.asDiagonal() * KL * u.conjugate().asDiagonal();
  CHECK((KS - conj).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("coherent states are L2-normalized and well-localized") {
  SpatialGrid g = make_grid(2, 32, 16.0);
  WaveFunction psi = coherent_state(g, v2(0.5, -0.5), v2(1.0, 0.0), 0.9);
  CHECK(std::abs(l2_norm(psi) - 1.0) < 1e-12);
  // position expectation via the diagonal multiplication operator
  Gauge A0 = make_zero_gauge(2);
  SymbolField x1 = sample(g, evar_x(0));
  WaveFunction qp{g, quantize(x1, A0).mat * psi.v};
  CHECK(std::abs(l2_inner(psi, qp) - Cplx(0.5, 0.0)) < 1e-6);
}

TEST_CASE("kinetic momentum: expectation on a boosted coherent state") {
  SpatialGrid g = make_grid(1, 64, 16.0);
  Gauge A0 = make_zero_gauge(1);
  Eigen::VectorXd x0(1), k0(1);
  x0 << 0.0;
  k0 << 1.5;
  WaveFunction psi = coherent_state(g, x0, k0, 0.9);
  Eigen::VectorXcd dp = kinetic_momentum(g, A0, 0) * psi.v;
  WaveFunction w{g, dp};
  CHECK(std::abs(l2_inner(psi, w) - Cplx(1.5, 0.0)) < 1e-8);
}

TEST_CASE("weyl_system: identity at the origin, unitary, order-1 generator") {
  SpatialGrid g = make_grid(1, 32, 16.0);
  Gauge A0 = make_zero_gauge(1);
  Eigen::VectorXd z1 = Eigen::VectorXd::Zero(1);
  CHECK((weyl_system(g, A0, z1, z1).mat - Eigen::MatrixXcd::Identity(32, 32))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  Eigen::VectorXd x0(1), k0(1);
  x0 << 1.0;
  k0 << -0.5;
  Eigen::MatrixXcd W = weyl_system(g, A0, x0, k0).mat;
  CHECK((W * W.adjoint() - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("magnetic translation: exact shift action and composition cocycle") {
  SpatialGrid g = make_grid(2, 12, 12.0);
  Gauge A = landau_gauge(1.0);
  MagneticField B = make_scalar_field(1.0);
  double h = g.h();
  Eigen::VectorXd s = v2(2 * h, -h);

  // action on a basis vector: modulus-preserving relocation
  Eigen::MatrixXcd T = magnetic_translation(g, A, s).mat;
  CHECK((T * T.adjoint() - Eigen::MatrixXcd::Identity(144, 144)).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::VectorXd y = v2(h, 3 * h);
  Eigen::MatrixXcd T2 = magnetic_translation(g, A, y).mat;
  Eigen::MatrixXcd T12 = magnetic_translation(g, A, s + y).mat;
  // the cocycle law holds on rows whose hops stay inside the box; rows that
  // wrap pick up the gauge holonomy of a torus cycle (the flux through the
  // box is not an integer multiple of 2*pi, so no periodic gauge exists)
  Eigen::MatrixXcd D = T * T2;
  long checked = 0;
  int idx[8];
  for (long I = 0; I < g.points(); ++I) {
    g.unflatten(I, idx);
    bool interior = true;
    for (int a = 0; a < 2; ++a) {
      int j1 = idx[a] + int(std::lround(s[a] / h));
      int j2 = idx[a] + int(std::lround((s[a] + y[a]) / h));
      if (j1 < 0 || j1 >= g.n || j2 < 0 || j2 >= g.n) interior = false;
    }
    if (!interior) continue;
    ++checked;
    CHECK((D.row(I) - T12.row(I) * cocycle(B, g.point(I), s, y)).cwiseAbs().maxCoeff() <
          1e-12);
  }
  CHECK(checked == 81);  // 9 x 9 interior rows for these hop lengths

  // off-lattice displacement is rejected
  CHECK_THROWS_AS(magnetic_translation(g, A, v2(0.3 * h, 0.0)), Error);
}

TEST_CASE("sobolev norm: exact on dual plane waves, m=0 is L2") {
  SpatialGrid g = make_grid(1, 32, 16.0);
  Gauge A0 = make_zero_gauge(1);
  long k = 22;
  WaveFunction u{g, Eigen::VectorXcd(32)};
  for (long i = 0; i < 32; ++i) u.v[i] = std::polar(1.0, g.xi[k] * g.x[i]);
  double w = std::pow(1.0 + g.xi[k] * g.xi[k], 1.0);  // <xi_k>^2
  CHECK(std::abs(sobolev_norm(u, 2.0, A0) - w * l2_norm(u)) < 1e-9);
  CHECK(std::abs(sobolev_norm(u, 0.0, A0) - l2_norm(u)) < 1e-12);
}

TEST_CASE("hermitian_eigensolve: ascending values, exact on diagonal input") {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(6, 6);
  double vals[6] = {3.0, -1.0, 0.5, 7.0, -2.5, 0.0};
  for (int i = 0; i < 6; ++i) D(i, i) = vals[i];
  EigenSystem es = hermitian_eigensolve(D);
  double sorted[6] = {-2.5, -1.0, 0.0, 0.5, 3.0, 7.0};
  for (int i = 0; i < 6; ++i) CHECK(std::abs(es.values[i] - sorted[i]) < 1e-14);
  // residual check on a dense Hermitian matrix
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Random(24, 24);
  H = ((H + H.adjoint()) / 2.0).eval();
  EigenSystem e2 = hermitian_eigensolve(H);
  for (int k = 0; k < 24; ++k) {
    Eigen::VectorXcd r = H * e2.vectors.col(k) - e2.values[k] * e2.vectors.col(k);
    CHECK(r.norm() < 1e-11);
  }
}

TEST_CASE("operator_norm equals the top singular value") {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Random(20, 20);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  CHECK(std::abs(operator_norm(M) - svd.singularValues()[0]) < 1e-10);
}

TEST_CASE("kernel/gauge tag mismatch is rejected") {
  SpatialGrid g = make_grid(1, 16, 8.0);
  Gauge A0 = make_zero_gauge(1);
  Gauge A1 = gauge_transform(A0, [](const Eigen::VectorXd& x) { return x[0]; }, "lin-shift");
  OperatorMatrix K = quantize(gauss1(g), A0);
  CHECK_THROWS_AS(dequantize(K, A1), Error);
}

TEST_CASE("dimension mismatch between symbol and gauge is rejected") {
  SpatialGrid g = make_grid(1, 16, 8.0);
  SymbolField f = gauss1(g);
  Gauge A2 = landau_gauge(1.0);  // 2D gauge against a 1D symbol
  CHECK_THROWS_AS(quantize(f, A2), Error);
}
