#include "magweyl/quantize.hpp"

#include <lapacke.h>

#include <map>
#include <mutex>

#include "magweyl/kernels.hpp"

namespace magweyl {

using kernels::CMat;
using kernels::Cplx;
using kernels::RMat;

namespace {

struct ModeMats {
  CMat F_xi, Fi_xi, F_x, Fi_x, mu;  // per-axis n x n
};

std::mutex g_cache_mtx;
std::map<std::string, std::shared_ptr<ModeMats>> g_mode_cache;
std::map<std::string, std::shared_ptr<RMat>> g_circ_cache;
std::map<std::string, std::shared_ptr<CMat>> g_mult_cache;

std::string grid_key(const SpatialGrid& g) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "d%d n%d L%.17g", g.dim, g.n, g.length);
  return buf;
}

std::shared_ptr<ModeMats> mode_mats(const SpatialGrid& g) {
  const std::string key = grid_key(g);
  {
    std::lock_guard<std::mutex> lk(g_cache_mtx);
    if (auto it = g_mode_cache.find(key); it != g_mode_cache.end()) return it->second;
  }
  auto mm = std::make_shared<ModeMats>();
  const int n = g.n;
  mm->F_xi.resize(n, n);
  mm->Fi_xi.resize(n, n);
  mm->F_x.resize(n, n);
  mm->Fi_x.resize(n, n);
  mm->mu.resize(n, n);
  for (int t = 0; t < n; ++t) {
    const double that = t - n / 2;
    for (int k = 0; k < n; ++k) {
      const double khat = k - n / 2;
      const double ang = 2.0 * kPi * that * khat / n;
      mm->F_xi(t, k) = Cplx(std::cos(ang), -std::sin(ang)) / double(n);
      mm->Fi_xi(t, k) = Cplx(std::cos(ang), std::sin(ang));
      // F_x[q,i] = exp(-i p_q x_i)/n with p_q = xi[q], x_i grid position
      const double px = g.xi[t] * g.x[k];
      mm->F_x(t, k) = Cplx(std::cos(px), -std::sin(px)) / double(n);
      mm->Fi_x(k, t) = Cplx(std::cos(px), std::sin(px));
      const double mang = kPi * that * khat / n;  // here t plays qhat, k plays that
      mm->mu(t, k) = Cplx(std::cos(mang), std::sin(mang));
    }
  }
  std::lock_guard<std::mutex> lk(g_cache_mtx);
  g_mode_cache[key] = mm;
  return mm;
}

// circulation phase table Circ(x_I -> x_J) for canonical representatives
std::shared_ptr<RMat> circ_table(const Gauge& A, const SpatialGrid& g) {
  require(A.dim == g.dim, ErrorCode::DimensionMismatch, "gauge dim vs grid dim");
  if (A.kind == Gauge::Kind::Zero && A.grads.empty()) return nullptr;
  const std::string key = grid_key(g) + "|" + A.tag;
  {
    std::lock_guard<std::mutex> lk(g_cache_mtx);
    if (auto it = g_circ_cache.find(key); it != g_circ_cache.end()) return it->second;
  }
  const long M = g.points();
  auto tab = std::make_shared<RMat>(M, M);
  std::vector<Eigen::VectorXd> pts(M);
  for (long I = 0; I < M; ++I) pts[I] = g.point(I);
  kernels::fill_pair_table(*tab, [&](long i, long j) { return circulation(A, pts[i], pts[j]); });
  std::lock_guard<std::mutex> lk(g_cache_mtx);
  g_circ_cache[key] = tab;
  return tab;
}

// multiply / divide by the factorized half-step phase mu(q_a, t_a)
void mu_apply(CMat& V, const CMat& mu, int dim, int n, bool invert) {
  const long M = V.rows();
#pragma omp parallel for schedule(static)
  for (long T = 0; T < M; ++T) {
    int tidx[8];
    long Tr = T;
    for (int a = dim - 1; a >= 0; --a) { tidx[a] = int(Tr % n); Tr /= n; }
    for (long Q = 0; Q < M; ++Q) {
      long Qr = Q;
      Cplx m = 1.0;
      for (int a = dim - 1; a >= 0; --a) {
        const int qa = int(Qr % n);
        Qr /= n;
        m *= mu(qa, tidx[a]);
      }
      V(Q, T) = invert ? V(Q, T) / m : V(Q, T) * m;
    }
  }
}

}  // namespace

void clear_mode_caches() {
  std::lock_guard<std::mutex> lk(g_cache_mtx);
  g_mode_cache.clear();
  g_circ_cache.clear();
  g_mult_cache.clear();
}

std::complex<double> l2_inner(const WaveFunction& a, const WaveFunction& b) {
  require(a.grid.same(b.grid), ErrorCode::GridMismatch, "inner product grids differ");
  double w = 1.0;
  for (int d = 0; d < a.grid.dim; ++d) w *= a.grid.h();
  return w * a.v.dot(b.v);  // Eigen dot conjugates the left argument
}

double l2_norm(const WaveFunction& a) { return std::sqrt(std::abs(l2_inner(a, a))); }

WaveFunction coherent_state(const SpatialGrid& g, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& k0, double s) {
  require(x0.size() == g.dim && k0.size() == g.dim, ErrorCode::DimensionMismatch,
          "coherent state center dim");
  const long M = g.points();
  WaveFunction u{g, Eigen::VectorXcd(M)};
  for (long I = 0; I < M; ++I) {
    const Eigen::VectorXd x = g.point(I);
    double amp = 0.0, ph = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      amp -= (x[a] - x0[a]) * (x[a] - x0[a]) / (2.0 * s * s);
      ph += k0[a] * x[a];
    }
    u.v[I] = std::exp(amp) * Cplx(std::cos(ph), std::sin(ph));
  }
  const double nrm = l2_norm(u);
  require(nrm > 0.0, ErrorCode::ComputeError, "coherent state collapsed to zero");
  u.v /= nrm;
  return u;
}

OperatorMatrix quantize(const SymbolField& f, const Gauge& A) {
  const SpatialGrid& g = f.grid;
  require(A.dim == g.dim, ErrorCode::DimensionMismatch, "quantize gauge dim");
  auto mm = mode_mats(g);
  const int n = g.n, dim = g.dim;
  const long M = g.points();
  const bool real_symbol = f.values.imag().cwiseAbs().maxCoeff() <=
                           1e-14 * std::max(1.0, f.values.cwiseAbs().maxCoeff());

  CMat V = f.values;
  for (int a = 0; a < dim; ++a) kernels::axis_apply_cols(V, mm->F_xi, a, dim, n);
  for (int a = 0; a < dim; ++a) kernels::axis_apply_rows(V, mm->F_x, a, dim, n);
  mu_apply(V, mm->mu, dim, n, false);
  for (int a = 0; a < dim; ++a) kernels::axis_apply_rows(V, mm->Fi_x, a, dim, n);

  OperatorMatrix K;
  K.grid = g;
  K.gauge_tag = A.tag;
  K.mat.resize(M, M);
  kernels::scatter_diagonals(V, K.mat, dim, n);
  if (auto tab = circ_table(A, g)) kernels::hadamard_cis(K.mat, *tab, -1.0);
  if (real_symbol)
    K.herm_residual = (K.mat - K.mat.adjoint()).cwiseAbs().maxCoeff();
  return K;
}

SymbolField dequantize(const Eigen::MatrixXcd& Kin, const Gauge& A, const SpatialGrid& g) {
  require(Kin.rows() == g.points() && Kin.cols() == g.points(), ErrorCode::GridMismatch,
          "kernel size vs grid");
  auto mm = mode_mats(g);
  const int n = g.n, dim = g.dim;
  CMat K = Kin;
  if (auto tab = circ_table(A, g)) kernels::hadamard_cis(K, *tab, +1.0);
  CMat G(K.rows(), K.cols());
  kernels::gather_diagonals(K, G, dim, n);
  for (int a = 0; a < dim; ++a) kernels::axis_apply_rows(G, mm->F_x, a, dim, n);
  mu_apply(G, mm->mu, dim, n, true);
  for (int a = 0; a < dim; ++a) kernels::axis_apply_rows(G, mm->Fi_x, a, dim, n);
  CMat FiT = mm->Fi_xi.transpose();
  for (int a = 0; a < dim; ++a) kernels::axis_apply_cols(G, FiT, a, dim, n);
  SymbolField f;
  f.grid = g;
  f.values = std::move(G);
  return f;
}

SymbolField dequantize(const OperatorMatrix& K, const Gauge& A) {
  require(K.gauge_tag == A.tag, ErrorCode::InconsistentPair,
          "kernel was quantized in gauge '" + K.gauge_tag + "', asked to dequantize in '" +
              A.tag + "'");
  return dequantize(K.mat, A, K.grid);
}

Eigen::MatrixXcd multiplier_matrix(const SpatialGrid& g, int axis) {
  require(axis >= 0 && axis < g.dim, ErrorCode::DimensionMismatch, "multiplier axis");
  const std::string key = grid_key(g) + "|D" + std::to_string(axis);
  {
    std::lock_guard<std::mutex> lk(g_cache_mtx);
    if (auto it = g_mult_cache.find(key); it != g_mult_cache.end()) return *it->second;
  }
  SymbolField xi = sample(g, evar_xi(axis));
  OperatorMatrix D = quantize(xi, make_zero_gauge(g.dim));
  auto sp = std::make_shared<CMat>(std::move(D.mat));
  std::lock_guard<std::mutex> lk(g_cache_mtx);
  g_mult_cache[key] = sp;
  return *sp;
}

Eigen::MatrixXcd kinetic_momentum(const SpatialGrid& g, const Gauge& A, int axis) {
  CMat P = multiplier_matrix(g, axis);
  const long M = g.points();
  for (long I = 0; I < M; ++I) {
    Eigen::VectorXd Ax = A.eval(g.point(I));
    for (const auto& gp : A.grads) {
      // grad phi contributes exactly through finite differences of phi? No:
      // structural grads shift the gauge; kinetic momentum needs A + grad phi
      // pointwise. Differentiate phi by central differences at grid scale.
      const double fd = 1e-6;
      for (int a = 0; a < g.dim; ++a) {
        Eigen::VectorXd xp = g.point(I), xm = g.point(I);
        xp[a] += fd;
        xm[a] -= fd;
        Ax[a] += (gp.phi(xp) - gp.phi(xm)) / (2 * fd);
      }
    }
    P(I, I) -= Ax[axis];
  }
  return P;
}

OperatorMatrix weyl_system(const SpatialGrid& g, const Gauge& A, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& xi0) {
  require(x0.size() == g.dim && xi0.size() == g.dim, ErrorCode::DimensionMismatch,
          "weyl system phase point dim");
  const long M = g.points();
  CMat G = CMat::Zero(M, M);
  for (int a = 0; a < g.dim; ++a) {
    if (x0[a] != 0.0) G += x0[a] * kinetic_momentum(g, A, a);
  }
  for (long I = 0; I < M; ++I) {
    const Eigen::VectorXd x = g.point(I);
    for (int a = 0; a < g.dim; ++a) G(I, I) -= xi0[a] * x[a];
  }
  OperatorMatrix W;
  W.grid = g;
  W.gauge_tag = A.tag;
  W.mat = kernels::expm_pade(Cplx(0.0, -1.0) * G);
  return W;
}

OperatorMatrix magnetic_translation(const SpatialGrid& g, const Gauge& A,
                                    const Eigen::VectorXd& x0) {
  require(x0.size() == g.dim, ErrorCode::DimensionMismatch, "translation vector dim");
  const double h = g.h();
  int shifts[8];
  for (int a = 0; a < g.dim; ++a) {
    const double s = x0[a] / h;
    shifts[a] = int(std::lround(s));
    require(std::abs(s - shifts[a]) <= 1e-9, ErrorCode::OffLattice,
            "translation must be a lattice vector");
  }
  const long M = g.points();
  OperatorMatrix T;
  T.grid = g;
  T.gauge_tag = A.tag;
  T.mat = CMat::Zero(M, M);
  int idx[8];
  for (long I = 0; I < M; ++I) {
    g.unflatten(I, idx);
    long J = 0;
    for (int a = 0; a < g.dim; ++a) {
      int j = (idx[a] + shifts[a]) % g.n;
      if (j < 0) j += g.n;
      J = J * g.n + j;
    }
    const Eigen::VectorXd x = g.point(I);
    const double c = circulation(A, x, x + x0);  // unwrapped endpoint
    T.mat(I, J) = Cplx(std::cos(c), -std::sin(c));
  }
  return T;
}

double sobolev_norm(const WaveFunction& u, double m, const Gauge& A) {
  SymbolField pm = sample(u.grid, order_weight_expr(u.grid.dim, m));
  OperatorMatrix P = quantize(pm, A);
  WaveFunction Pu{u.grid, P.mat * u.v};
  return l2_norm(Pu);
}

EigenSystem hermitian_eigensolve(const Eigen::MatrixXcd& H, bool vectors) {
  const lapack_int n = lapack_int(H.rows());
  require(H.cols() == n, ErrorCode::DimensionMismatch, "eigensolve needs a square matrix");
  EigenSystem es;
  es.values.resize(n);
  CMat A = H;
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
                                         reinterpret_cast<lapack_complex_double*>(A.data()), n,
                                         es.values.data());
  require(info == 0, ErrorCode::ComputeError,
          "zheevd failed with info=" + std::to_string(info));
  if (vectors) es.vectors = std::move(A);
  return es;
}

double operator_norm(const Eigen::MatrixXcd& M) {
  CMat H = M.adjoint() * M;
  EigenSystem es = hermitian_eigensolve(H, false);
  const double top = es.values[es.values.size() - 1];
  return std::sqrt(std::max(0.0, top));
}

}  // namespace magweyl
