#include "magweyl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <limits>
#include <random>

namespace magweyl {

using Cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

VectorXd participation(const MatrixXcd& vecs) {
  const long P = vecs.rows();
  VectorXd pr(vecs.cols());
  for (long j = 0; j < vecs.cols(); ++j) {
    double s2 = 0.0, s4 = 0.0;
    for (long i = 0; i < P; ++i) {
      double a2 = std::norm(vecs(i, j));
      s2 += a2;
      s4 += a2 * a2;
    }
    pr[j] = (s4 > 0.0) ? (s2 * s2) / (double(P) * s4) : 0.0;
  }
  return pr;
}

bool uses_x(const ExprPtr& e) {
  if (!e) return false;
  if (e->op == Expr::Op::VarX) return true;
  return uses_x(e->a) || uses_x(e->b);
}

}  // namespace

SpectralReport eigensolve(const OperatorMatrix& T) {
  const long P = T.mat.rows();
  SpectralReport rep;
  rep.grid = T.grid;
  rep.gauge_tag = T.gauge_tag;
  rep.herm_residual = (T.mat - T.mat.adjoint()).cwiseAbs().maxCoeff();

  if (rep.herm_residual <= 1e-8) {
    MatrixXcd H = 0.5 * (T.mat + T.mat.adjoint());
    EigenSystem es;
    try {
      es = hermitian_eigensolve(H, true);
    } catch (const Error&) {
      fail(ErrorCode::NonConvergence, "dense Hermitian eigensolver failed");
    }
    rep.eigenvalues = es.values;
    rep.localization = participation(es.vectors);
    return rep;
  }

  require(P <= 2048, ErrorCode::ComputeError, "general dense eigensolve is desk-scale");
  Eigen::ComplexEigenSolver<MatrixXcd> ces(T.mat, true);
  require(ces.info() == Eigen::Success, ErrorCode::NonConvergence,
          "general dense eigensolver failed");
  std::vector<long> idx(static_cast<size_t>(P), 0);
  for (long i = 0; i < P; ++i) idx[size_t(i)] = i;
  VectorXcd ev = ces.eigenvalues();
  std::sort(idx.begin(), idx.end(), [&](long a, long b) { return ev[a].real() < ev[b].real(); });
  rep.eigenvalues.resize(P);
  MatrixXcd vecs(P, P);
  for (long j = 0; j < P; ++j) {
    rep.eigenvalues[j] = ev[idx[size_t(j)]].real();
    vecs.col(j) = ces.eigenvectors().col(idx[size_t(j)]);
  }
  rep.localization = participation(vecs);
  return rep;
}

double garding_floor(const SymbolField& f, const Gauge& A) {
  const double scale = f.values.cwiseAbs().maxCoeff();
  require(f.values.imag().cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, scale),
          ErrorCode::HypothesisViolated, "floor needs a real symbol");
  require(f.values.real().minCoeff() >= -1e-12 * std::max(1.0, scale),
          ErrorCode::HypothesisViolated, "floor needs a pointwise nonnegative symbol");
  OperatorMatrix K = quantize(f, A);
  EigenSystem es = hermitian_eigensolve(K.mat, false);
  return es.values[0];
}

std::vector<double> critical_values(const ExprPtr& f0, const SpatialGrid& g) {
  require(f0 != nullptr, ErrorCode::ConfigError, "empty symbol");
  require(!uses_x(f0), ErrorCode::HypothesisViolated, "critical values need a xi-only symbol");
  const long P = g.points();
  const int n = g.n, dim = g.dim;
  VectorXd x0 = VectorXd::Zero(dim);

  VectorXd v(P);
  for (long K = 0; K < P; ++K) v[K] = f0->eval(x0, g.freq(K));

  // finite-difference gradient norm on the dual lattice (no wrap)
  const double dxi = g.xi_step();
  VectorXd gn = VectorXd::Zero(P);
  int idx[8];
  for (long K = 0; K < P; ++K) {
    g.unflatten(K, idx);
    double s = 0.0;
    for (int a = 0; a < dim; ++a) {
      long stride = 1;
      for (int t = a + 1; t < dim; ++t) stride *= n;
      double d;
      if (idx[a] == 0)
        d = (-3.0 * v[K] + 4.0 * v[K + stride] - v[K + 2 * stride]) / (2.0 * dxi);
      else if (idx[a] == n - 1)
        d = (3.0 * v[K] - 4.0 * v[K - stride] + v[K - 2 * stride]) / (2.0 * dxi);
      else
        d = (v[K + stride] - v[K - stride]) / (2.0 * dxi);
      s += d * d;
    }
    gn[K] = std::sqrt(s);
  }

  // threshold tight enough to separate on-grid zeros from their neighbors
  const double thr = 10.0 * dxi / n;
  std::vector<char> mask(static_cast<size_t>(P), 0), seen(static_cast<size_t>(P), 0);
  for (long K = 0; K < P; ++K) mask[size_t(K)] = gn[K] <= thr ? 1 : 0;

  std::vector<double> reps;
  for (long K0 = 0; K0 < P; ++K0) {
    if (!mask[size_t(K0)] || seen[size_t(K0)]) continue;
    // flood the component, keep its flattest point
    long best = K0;
    std::deque<long> q{K0};
    seen[size_t(K0)] = 1;
    while (!q.empty()) {
      long K = q.front();
      q.pop_front();
      if (gn[K] < gn[best]) best = K;
      g.unflatten(K, idx);
      for (int a = 0; a < dim; ++a) {
        long stride = 1;
        for (int t = a + 1; t < dim; ++t) stride *= n;
        if (idx[a] > 0 && mask[size_t(K - stride)] && !seen[size_t(K - stride)]) {
          seen[size_t(K - stride)] = 1;
          q.push_back(K - stride);
        }
        if (idx[a] < n - 1 && mask[size_t(K + stride)] && !seen[size_t(K + stride)]) {
          seen[size_t(K + stride)] = 1;
          q.push_back(K + stride);
        }
      }
    }
    reps.push_back(v[best]);
  }
  std::sort(reps.begin(), reps.end());
  std::vector<double> out;
  for (double r : reps)
    if (out.empty() || r - out.back() > 1e-6) out.push_back(r);
  return out;
}

std::vector<double> delocalized_set(const SpectralReport& rep, double pr_threshold,
                                    double cluster_eps) {
  std::vector<double> out;
  const long P = rep.eigenvalues.size();
  if (cluster_eps <= 0.0) {
    for (long i = 0; i < P; ++i)
      if (rep.localization[i] >= pr_threshold) out.push_back(rep.eigenvalues[i]);
    return out;
  }
  long i = 0;
  while (i < P) {
    long j = i, arg = i;
    while (j + 1 < P && rep.eigenvalues[j + 1] - rep.eigenvalues[j] <= cluster_eps) {
      ++j;
      if (rep.localization[j] > rep.localization[arg]) arg = j;
    }
    if (rep.localization[arg] >= pr_threshold) out.push_back(rep.eigenvalues[arg]);
    i = j + 1;
  }
  return out;
}

double hausdorff_window(const std::vector<double>& A, const std::vector<double>& B, double lo,
                        double hi) {
  std::vector<double> a, b;
  for (double t : A)
    if (t >= lo && t <= hi) a.push_back(t);
  for (double t : B)
    if (t >= lo && t <= hi) b.push_back(t);
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  auto one_sided = [](const std::vector<double>& from, const std::vector<double>& to) {
    double worst = 0.0;
    for (double t : from) {
      auto it = std::lower_bound(to.begin(), to.end(), t);
      double d = std::numeric_limits<double>::infinity();
      if (it != to.end()) d = std::min(d, *it - t);
      if (it != to.begin()) d = std::min(d, t - *(it - 1));
      worst = std::max(worst, d);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

namespace {

// max_edge |v(x)| <x>^{1+e} relative to max_grid |v(x)|
void check_edge_decay(const SpatialGrid& g, const std::function<double(const VectorXd&)>& v,
                      double exponent, const char* what) {
  const long P = g.points();
  const int n = g.n;
  int idx[8];
  double vmax = 0.0, edge = 0.0;
  for (long I = 0; I < P; ++I) {
    VectorXd x = g.point(I);
    double a = std::abs(v(x));
    vmax = std::max(vmax, a);
    g.unflatten(I, idx);
    bool on_edge = false;
    for (int t = 0; t < g.dim; ++t) on_edge = on_edge || idx[t] == 0 || idx[t] == n - 1;
    if (on_edge) edge = std::max(edge, a * std::pow(1.0 + x.squaredNorm(), 0.5 * (1.0 + exponent)));
  }
  if (vmax == 0.0) return;
  require(edge <= 1e-3 * vmax, ErrorCode::HypothesisViolated,
          std::string(what) + " does not satisfy the edge decay bound");
}

}  // namespace

EssReport ess_spectrum_decaying(const PerturbationSplit& split, const MagneticField& B,
                                const Gauge& A, const SpatialGrid& g, double pr_threshold,
                                double cluster_eps) {
  require(split.f0 != nullptr, ErrorCode::ConfigError, "split needs f0");
  require(!uses_x(split.f0), ErrorCode::HypothesisViolated, "f0 must be xi-only");
  require(B.dim == g.dim && A.dim == g.dim, ErrorCode::DimensionMismatch, "dimension mismatch");

  check_edge_decay(
      g, [&](const VectorXd& x) { return B.eval(x).cwiseAbs().maxCoeff(); }, split.eps, "field");
  VectorXd xi0 = VectorXd::Zero(g.dim);
  if (split.fS)
    check_edge_decay(
        g, [&](const VectorXd& x) { return split.fS->eval(x, xi0); }, split.eps, "short-range part");
  if (split.fL)
    check_edge_decay(
        g, [&](const VectorXd& x) { return split.fL->eval(x, xi0); }, split.eps - 1.0,
        "long-range part");

  ExprPtr f = split.f0;
  if (split.fS) f = eadd(f, split.fS);
  if (split.fL) f = eadd(f, split.fL);
  OperatorMatrix H = quantize(sample(g, f), A);
  SpectralReport rep = eigensolve(H);

  std::vector<double> v0;
  for (long K = 0; K < g.points(); ++K) v0.push_back(split.f0->eval(xi0, g.freq(K)));
  std::sort(v0.begin(), v0.end());

  EssReport out;
  out.window_lo = v0.front();
  double shift = 0.0;
  for (long I = 0; I < g.points(); ++I) {
    VectorXd x = g.point(I);
    double a = 0.0;
    if (split.fS) a += std::abs(split.fS->eval(x, xi0));
    if (split.fL) a += std::abs(split.fL->eval(x, xi0));
    shift = std::max(shift, a);
  }
  // the x-part shifts band-edge energies by up to its sup; retreat the
  // trusted window from the quarter-band cap accordingly
  out.window_hi = g.xi_max() * g.xi_max() / 4.0 - shift;
  require(out.window_hi > out.window_lo, ErrorCode::HypothesisViolated,
          "perturbation too large for the resolved band");
  double range = rep.eigenvalues[rep.eigenvalues.size() - 1] - rep.eigenvalues[0];
  if (cluster_eps < 0.0) cluster_eps = 1e-3 * range;
  std::vector<double> deloc = delocalized_set(rep, pr_threshold, cluster_eps);
  double pad = 1e-9 * std::max(1.0, range);
  out.hausdorff = hausdorff_window(deloc, v0, out.window_lo - pad, out.window_hi + pad);
  for (double t : deloc)
    if (t >= out.window_lo && t <= out.window_hi) out.delocalized.push_back(t);
  for (long i = 0; i < rep.eigenvalues.size(); ++i)
    if (rep.eigenvalues[i] < out.window_lo - 1e-9 && rep.localization[i] < pr_threshold)
      out.localized_below.push_back(rep.eigenvalues[i]);
  out.pass = out.hausdorff <= 0.05 * (out.window_hi - out.window_lo);
  return out;
}

std::vector<double> lap_probe(const SymbolField& f, const Gauge& A, double lambda,
                              const std::vector<double>& eps_list, double gamma, double m) {
  require(gamma > 0.5, ErrorCode::HypothesisViolated, "weight exponent must exceed 1/2");
  require(!eps_list.empty(), ErrorCode::ConfigError, "empty eps list");
  for (size_t i = 0; i < eps_list.size(); ++i) {
    require(eps_list[i] > 0.0, ErrorCode::ConfigError, "eps values must be positive");
    if (i) require(eps_list[i] < eps_list[i - 1], ErrorCode::ConfigError, "eps must decrease");
  }
  OperatorMatrix K = quantize(f, A);
  require(!std::isnan(K.herm_residual), ErrorCode::HypothesisViolated,
          "probe needs a real symbol");
  EigenSystem es = hermitian_eigensolve(K.mat, true);
  const long P = es.values.size();
  const SpatialGrid& g = f.grid;

  VectorXd w(P);
  for (long I = 0; I < P; ++I)
    w[I] = std::pow(1.0 + g.point(I).squaredNorm(), -0.5 * gamma);
  MatrixXcd S = quantize(sample(g, order_weight_expr(g.dim, 0.5 * m)), A).mat;
  MatrixXcd G = S * (w.asDiagonal() * es.vectors);
  MatrixXcd Gh = G.adjoint();

  std::vector<double> out;
  for (double eps : eps_list) {
    VectorXcd D(P);
    for (long j = 0; j < P; ++j) D[j] = 1.0 / Cplx(es.values[j] - lambda, -eps);
    // power iteration on M^H M with M = G diag(D) G^H
    std::mt19937_64 rng(42);
    std::normal_distribution<double> nd;
    VectorXcd v(P);
    for (long i = 0; i < P; ++i) v[i] = Cplx(nd(rng), nd(rng));
    v.normalize();
    double lam_prev = 0.0, lam = 0.0;
    for (int it = 0; it < 500; ++it) {
      VectorXcd t = G * D.cwiseProduct(Gh * v);               // M v
      VectorXcd u = G * D.conjugate().cwiseProduct(Gh * t);   // M^H M v
      lam = u.norm();
      if (lam == 0.0) break;
      v = u / lam;
      if (it > 4 && std::abs(lam - lam_prev) <= 1e-10 * lam) break;
      lam_prev = lam;
    }
    out.push_back(std::sqrt(lam));
  }
  return out;
}

Gauge limit_gauge(const MagneticField& B, int axis) {
  bool zero = B.kind == MagneticField::Kind::Constant && B.B0.cwiseAbs().maxCoeff() == 0.0;
  if (B.dim == 1 || zero) return make_zero_gauge(B.dim);
  require(B.dim == 2 && B.kind == MagneticField::Kind::Constant, ErrorCode::ConfigError,
          "limit gauges cover constant fields only");
  double b = B.B0(0, 1);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2, 2);
  char tag[64];
  if (axis == 0) {
    M(1, 0) = b;  // A = (0, b x1)
    std::snprintf(tag, sizeof(tag), "limit0(%.12g)", b);
  } else {
    M(0, 1) = -b;  // A = (-b x2, 0)
    std::snprintf(tag, sizeof(tag), "limit1(%.12g)", b);
  }
  return make_linear_gauge(2, M, tag);
}

AnisoReport anisotropic_ess(const AnisotropyProfile& p, const SymbolField& f_full,
                            const MagneticField& B_full, const Gauge& A_full,
                            double pr_threshold, double cluster_eps) {
  const SpatialGrid& g = f_full.grid;
  require(p.axis >= 0 && p.axis < g.dim, ErrorCode::ConfigError, "profile axis out of range");
  require(p.f_minus && p.f_plus, ErrorCode::ConfigError, "profile needs both limit symbols");
  require(B_full.dim == g.dim && A_full.dim == g.dim, ErrorCode::DimensionMismatch,
          "dimension mismatch");

  // the full symbol must flatten onto the limits at the box edges
  SymbolField fm = sample(g, p.f_minus), fp = sample(g, p.f_plus);
  const long P = g.points();
  int idx[8];
  double dm = 0.0, dp = 0.0;
  for (long I = 0; I < P; ++I) {
    g.unflatten(I, idx);
    if (idx[p.axis] == 0)
      dm = std::max(dm, (f_full.values.row(I) - fm.values.row(I)).cwiseAbs().maxCoeff());
    if (idx[p.axis] == g.n - 1)
      dp = std::max(dp, (f_full.values.row(I) - fp.values.row(I)).cwiseAbs().maxCoeff());
  }
  require(dm <= 1e-6 && dp <= 1e-6, ErrorCode::ProfileMismatch,
          "full symbol does not match its limits at the box edge");
  {
    VectorXd xm = VectorXd::Zero(g.dim), xp = VectorXd::Zero(g.dim);
    xm[p.axis] = g.x[0];
    xp[p.axis] = g.x[g.n - 1];
    double bm = (B_full.eval(xm) - p.B_minus.eval(xm)).cwiseAbs().maxCoeff();
    double bp = (B_full.eval(xp) - p.B_plus.eval(xp)).cwiseAbs().maxCoeff();
    require(bm <= 1e-6 && bp <= 1e-6, ErrorCode::ProfileMismatch,
            "full field does not match its limits at the box edge");
  }

  SpectralReport rep = eigensolve(quantize(f_full, A_full));
  SpectralReport rm = eigensolve(quantize(fm, limit_gauge(p.B_minus, p.axis)));
  SpectralReport rp = eigensolve(quantize(fp, limit_gauge(p.B_plus, p.axis)));

  std::vector<double> uni(rm.eigenvalues.data(), rm.eigenvalues.data() + rm.eigenvalues.size());
  uni.insert(uni.end(), rp.eigenvalues.data(), rp.eigenvalues.data() + rp.eigenvalues.size());
  std::sort(uni.begin(), uni.end());

  AnisoReport out;
  out.window_lo = uni.front();
  double shift = std::max((f_full.values - fm.values).cwiseAbs().maxCoeff(),
                          (f_full.values - fp.values).cwiseAbs().maxCoeff());
  // same band-edge retreat as the decaying case, drive by the larger of the
  // two limit mismatches
  out.window_hi = g.xi_max() * g.xi_max() / 4.0 - shift;
  require(out.window_hi > out.window_lo, ErrorCode::HypothesisViolated,
          "limit mismatch too large for the resolved band");
  double range = rep.eigenvalues[rep.eigenvalues.size() - 1] - rep.eigenvalues[0];
  if (cluster_eps < 0.0) cluster_eps = 1e-3 * range;
  std::vector<double> deloc = delocalized_set(rep, pr_threshold, cluster_eps);
  double pad = 1e-9 * std::max(1.0, range);
  out.hausdorff = hausdorff_window(deloc, uni, out.window_lo - pad, out.window_hi + pad);
  for (double t : deloc)
    if (t >= out.window_lo && t <= out.window_hi) out.delocalized.push_back(t);
  for (double t : uni)
    if (t >= out.window_lo && t <= out.window_hi) out.union_spectrum.push_back(t);
  out.pass = out.hausdorff <= 0.05 * (out.window_hi - out.window_lo);
  return out;
}

}  // namespace magweyl
