#include "magweyl/funcalc.hpp"

#include <algorithm>
#include <cmath>

namespace magweyl {

using Cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXd;

double ScalarProfile::operator()(double t, int k) const {
  if (ds.empty()) ds.push_back(expr);
  while (int(ds.size()) <= k) ds.push_back(differentiate(ds.back(), 0, true));
  VectorXd x(1), xi(1);
  x[0] = t;
  xi[0] = 0.0;
  const ExprPtr& e = ds[size_t(k)];
  return e ? e->eval(x, xi) : 0.0;
}

ScalarProfile bump_profile(double center, double width) {
  require(width > 0.0, ErrorCode::ConfigError, "bump width must be positive");
  // gaussian * erf plateau; plateau extent 6w so the shoulders sit at +-3w
  ExprPtr u = esub(evar_x(0), econst(center));
  ExprPtr gauss = eexp(eneg(ediv(emul(u, u), econst(2.0 * width * width))));
  double a = 3.0 * width, s = 0.5 * width;
  ExprPtr win = emul(econst(0.5),
                     esub(eerf(ediv(eadd(u, econst(a)), econst(s))),
                          eerf(ediv(esub(u, econst(a)), econst(s)))));
  ScalarProfile p;
  p.expr = emul(gauss, win);
  p.lo = center - 7.0 * width;
  p.hi = center + 7.0 * width;
  return p;
}

QuasiAnalyticExtension make_extension(const ScalarProfile& phi, int k_max) {
  require(k_max >= 1 && k_max <= 4, ErrorCode::ConfigError, "extension order must be 1..4");
  QuasiAnalyticExtension e;
  e.phi = phi;
  e.k_max = k_max;
  e.chi = plateau_expr(0, true, 1.0);
  return e;
}

namespace {

double eval1(const ExprPtr& e, double t) {
  VectorXd x(1), xi(1);
  x[0] = t;
  xi[0] = 0.0;
  return e->eval(x, xi);
}

double fct(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace

Cplx QuasiAnalyticExtension::value(double x, double y) const {
  double bx = std::sqrt(1.0 + x * x);
  double r = y / bx;
  double c = eval1(chi, r);
  if (c == 0.0) return Cplx(0.0, 0.0);
  Cplx iy(0.0, y), p(1.0, 0.0), s(0.0, 0.0);
  for (int k = 0; k <= k_max; ++k) {
    s += phi(x, k) * p / fct(k);
    p *= iy;
  }
  return c * s;
}

Cplx QuasiAnalyticExtension::dbar(double x, double y) const {
  double bx = std::sqrt(1.0 + x * x);
  double r = y / bx;
  double c = eval1(chi, r);
  if (!chi_d) chi_d = differentiate(chi, 0, true);
  double cd = eval1(chi_d, r);
  if (c == 0.0 && cd == 0.0) return Cplx(0.0, 0.0);

  Cplx iy(0.0, y);
  // taylor sum and its top-order tail
  Cplx p(1.0, 0.0), s(0.0, 0.0);
  for (int k = 0; k <= k_max; ++k) {
    s += phi(x, k) * p / fct(k);
    p *= iy;
  }
  Cplx top = std::pow(iy, k_max) / fct(k_max) * phi(x, k_max + 1);
  Cplx out = 0.5 * c * top;
  if (cd != 0.0) {
    // chain terms: dbar = ... + (chi'(r)/2)(d_x r + i d_y r) S
    double dxr = -y * x / (bx * bx * bx);
    out += 0.5 * cd * Cplx(dxr, 1.0 / bx) * s;
  }
  return out;
}

SymbolField sharp_inverse(const SymbolField& f, const Gauge& A) {
  OperatorMatrix K = quantize(f, A);
  Eigen::PartialPivLU<MatrixXcd> lu(K.mat);
  double rc = lu.rcond();
  require(std::isfinite(rc) && rc > 1e-12, ErrorCode::NotInvertible,
          "kernel matrix is singular or ill-conditioned at this resolution");
  MatrixXcd inv = lu.inverse();
  return dequantize(inv, A, f.grid);
}

SymbolField resolvent_symbol(const SymbolField& f, Cplx z, const Gauge& A) {
  OperatorMatrix K = quantize(f, A);
  if (!std::isnan(K.herm_residual)) {
    EigenSystem es = hermitian_eigensolve(K.mat, false);
    double d = std::numeric_limits<double>::infinity();
    for (long i = 0; i < es.values.size(); ++i)
      d = std::min(d, std::abs(Cplx(es.values[i], 0.0) - z));
    require(d >= 1e-6, ErrorCode::SpectrumHit, "z is within 1e-6 of the spectrum");
  }
  MatrixXcd Kz = K.mat;
  Kz.diagonal().array() -= z;
  Eigen::PartialPivLU<MatrixXcd> lu(Kz);
  double rc = lu.rcond();
  require(std::isfinite(rc) && rc > 1e-12, ErrorCode::SpectrumHit,
          "z is numerically on the spectrum");
  MatrixXcd inv = lu.inverse();
  return dequantize(inv, A, f.grid);
}

SymbolField make_s_m(double m, const SpatialGrid& g, const Gauge& A) {
  if (m == 0.0) return sample(g, econst(1.0));
  const double am = std::abs(m);
  SymbolField base = sample(g, order_weight_expr(g.dim, am));
  OperatorMatrix K0 = quantize(base, A);
  EigenSystem es = hermitian_eigensolve(K0.mat, false);
  const double lmin = es.values[0];
  double a = 1.0;
  while (a + lmin < 0.5) {
    a *= 2.0;
    require(a <= 65536.0, ErrorCode::SearchFailed, "no shift a <= 2^16 makes p_{m,a} coercive");
  }
  SymbolField p = sample(g, eadd(econst(a), order_weight_expr(g.dim, am)));
  if (m > 0.0) return p;
  MatrixXcd Kp = K0.mat;
  Kp.diagonal().array() += a;
  Eigen::PartialPivLU<MatrixXcd> lu(Kp);
  MatrixXcd inv = lu.inverse();
  return dequantize(inv, A, g);
}

SymbolField hs_function(const QuasiAnalyticExtension& ext, const SymbolField& f, const Gauge& A,
                        const HsOptions& opt) {
  OperatorMatrix K = quantize(f, A);
  require(!std::isnan(K.herm_residual), ErrorCode::HypothesisViolated,
          "functional calculus needs a real symbol");
  EigenSystem es = hermitian_eigensolve(K.mat, true);
  const long P = es.values.size();

  const double lo = ext.phi.lo, hi = ext.phi.hi;
  const double Y = hi - lo;
  require(Y > 0.0, ErrorCode::ConfigError, "profile support is empty");

  Eigen::VectorXcd g_prev, g_cur;
  int M = opt.mesh0;
  for (;; M *= 2) {
    require(M <= opt.mesh_max, ErrorCode::MeshTooCoarse,
            "quadrature did not settle below tolerance within the mesh cap");
    const double dx = (hi - lo) / M, dy = 2.0 * Y / M;

    // two-height decay of dbar near the axis: expect ~ (3)^k_max
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < M; ++i) {
      double xx = lo + (i + 0.5) * dx;
      m1 = std::max(m1, std::abs(ext.dbar(xx, 0.5 * dy)));
      m2 = std::max(m2, std::abs(ext.dbar(xx, 1.5 * dy)));
    }
    if (m1 > 0.0) {
      double expect = std::pow(3.0, ext.k_max);
      double ratio = m2 / m1;
      require(ratio > expect / 3.0 && ratio < expect * 3.0, ErrorCode::MeshTooCoarse,
              "dbar height-ratio test failed; profile or mesh unusable");
    }

    // nodes with non-negligible dbar
    std::vector<double> zx, zy;
    std::vector<Cplx> zw;
    double wmax = 0.0;
    for (int i = 0; i < M; ++i) {
      double xx = lo + (i + 0.5) * dx;
      for (int j = 0; j < M; ++j) {
        double yy = -Y + (j + 0.5) * dy;
        Cplx d = ext.dbar(xx, yy);
        double ad = std::abs(d);
        if (ad == 0.0) continue;
        zx.push_back(xx);
        zy.push_back(yy);
        zw.push_back(d * (dx * dy / kPi));
        wmax = std::max(wmax, ad);
      }
    }

    g_cur.resize(P);
#pragma omp parallel for schedule(static)
    for (long j = 0; j < P; ++j) {
      Cplx acc(0.0, 0.0);
      const double lam = es.values[j];
      for (size_t q = 0; q < zw.size(); ++q)
        acc += zw[q] / Cplx(lam - zx[q], -zy[q]);
      g_cur[j] = acc;
    }
    if (g_prev.size() == P) {
      double change = (g_cur - g_prev).cwiseAbs().maxCoeff();
      if (change <= opt.tol) break;
    }
    g_prev = g_cur;
  }

  MatrixXcd R = es.vectors * g_cur.asDiagonal() * es.vectors.adjoint();
  return dequantize(R, A, f.grid);
}

double default_shift(const SymbolField& f, const Gauge& A) {
  OperatorMatrix K = quantize(f, A);
  require(!std::isnan(K.herm_residual), ErrorCode::HypothesisViolated,
          "shift search needs a real symbol");
  EigenSystem es = hermitian_eigensolve(K.mat, false);
  return 1.0 + std::max(0.0, -es.values[0]);
}

SymbolField fractional_power(const SymbolField& f, double s, double t0, const Gauge& A) {
  OperatorMatrix K = quantize(f, A);
  require(!std::isnan(K.herm_residual), ErrorCode::HypothesisViolated,
          "fractional powers need a real symbol");
  MatrixXcd H = K.mat;
  H.diagonal().array() += t0;
  EigenSystem es = hermitian_eigensolve(H, true);
  require(es.values[0] > 0.0, ErrorCode::NotPositive,
          "shifted operator is not strictly positive");
  Eigen::VectorXd pw(es.values.size());
  for (long i = 0; i < es.values.size(); ++i) pw[i] = std::pow(es.values[i], s);
  MatrixXcd R = es.vectors * pw.asDiagonal() * es.vectors.adjoint();
  return dequantize(R, A, f.grid);
}

}  // namespace magweyl
