#include "magweyl/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace magweyl::kernels {

namespace {
std::atomic<bool> g_parallel{true};
struct InitFromEnv {
  InitFromEnv() {
    if (const char* e = std::getenv("MAGWEYL_SERIAL"); e && e[0] == '1') g_parallel = false;
  }
} g_init;

long ipow(int n, int e) {
  long p = 1;
  for (int i = 0; i < e; ++i) p *= n;
  return p;
}
}  // namespace

bool parallel_enabled() { return g_parallel.load(); }
void set_parallel(bool on) { g_parallel = on; }

// ---- axis transforms ----------------------------------------------------
// Row multi-index I = p*(n*S) + t*S + q with S = n^(dim-1-axis), P = n^axis.
// For each (p,q) the n selected rows form a strided view; one gemm each.

void axis_apply_rows_serial(CMat& V, const CMat& T, int axis, int dim, int n) {
  const long S = ipow(n, dim - 1 - axis);
  const long P = ipow(n, axis);
  const long cols = V.cols();
  Eigen::VectorXcd buf(n);
  for (long p = 0; p < P; ++p)
    for (long q = 0; q < S; ++q)
      for (long c = 0; c < cols; ++c) {
        for (int s = 0; s < n; ++s) {
          Cplx acc = 0.0;
          for (int t = 0; t < n; ++t) acc += T(s, t) * V(p * n * S + t * S + q, c);
          buf[s] = acc;
        }
        for (int s = 0; s < n; ++s) V(p * n * S + s * S + q, c) = buf[s];
      }
}

void axis_apply_rows(CMat& V, const CMat& T, int axis, int dim, int n) {
  if (!parallel_enabled()) return axis_apply_rows_serial(V, T, axis, dim, n);
  const long S = ipow(n, dim - 1 - axis);
  const long P = ipow(n, axis);
  const long cols = V.cols();
  const long ld = V.outerStride();
  Cplx* base = V.data();
  using StrideD = Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>;
  using MapT = Eigen::Map<CMat, Eigen::Unaligned, StrideD>;
#pragma omp parallel for collapse(2) schedule(static)
  for (long p = 0; p < P; ++p)
    for (long q = 0; q < S; ++q) {
      MapT view(base + p * n * S + q, n, cols, StrideD(ld, S));
      CMat tmp = T * view;
      view = tmp;
    }
}

// Column multi-index K = p*(n*S) + t*S + q; selected columns stride S*ld.
void axis_apply_cols_serial(CMat& V, const CMat& T, int axis, int dim, int n) {
  const long S = ipow(n, dim - 1 - axis);
  const long P = ipow(n, axis);
  const long rows = V.rows();
  Eigen::VectorXcd buf(n);
  for (long p = 0; p < P; ++p)
    for (long q = 0; q < S; ++q)
      for (long r = 0; r < rows; ++r) {
        for (int s = 0; s < n; ++s) {
          Cplx acc = 0.0;
          for (int t = 0; t < n; ++t) acc += T(s, t) * V(r, p * n * S + t * S + q);
          buf[s] = acc;
        }
        for (int s = 0; s < n; ++s) V(r, p * n * S + s * S + q) = buf[s];
      }
}

void axis_apply_cols(CMat& V, const CMat& T, int axis, int dim, int n) {
  if (!parallel_enabled()) return axis_apply_cols_serial(V, T, axis, dim, n);
  const long S = ipow(n, dim - 1 - axis);
  const long P = ipow(n, axis);
  const long rows = V.rows();
  const long ld = V.outerStride();
  Cplx* base = V.data();
  using StrideD = Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>;
  using MapT = Eigen::Map<CMat, Eigen::Unaligned, StrideD>;
#pragma omp parallel for collapse(2) schedule(static)
  for (long p = 0; p < P; ++p)
    for (long q = 0; q < S; ++q) {
      MapT view(base + (p * n * S + q) * ld, rows, n, StrideD(S * ld, 1));
      CMat tmp = view * T.transpose();
      view = tmp;
    }
}

// ---- diagonal scatter/gather -------------------------------------------

namespace {
// j index for each (i,t) pair on one axis: j = (i + t - n/2) mod n
inline int wrap_j(int i, int t, int n) {
  int j = i + t - n / 2;
  j %= n;
  if (j < 0) j += n;
  return j;
}
}  // namespace

void scatter_diagonals_serial(const CMat& G, CMat& K, int dim, int n) {
  const long M = G.rows();
  K.resize(M, M);  // every (I,J) is hit: t -> j is a bijection per axis
  int iidx[8], tidx[8], jidx[8];
  for (long T = 0; T < M; ++T) {
    long Tr = T;
    for (int a = dim - 1; a >= 0; --a) { tidx[a] = int(Tr % n); Tr /= n; }
    for (long I = 0; I < M; ++I) {
      long Ir = I;
      for (int a = dim - 1; a >= 0; --a) { iidx[a] = int(Ir % n); Ir /= n; }
      long J = 0;
      for (int a = 0; a < dim; ++a) { jidx[a] = wrap_j(iidx[a], tidx[a], n); J = J * n + jidx[a]; }
      K(I, J) = G(I, T);
    }
  }
}

void scatter_diagonals(const CMat& G, CMat& K, int dim, int n) {
  if (!parallel_enabled()) return scatter_diagonals_serial(G, K, dim, n);
  const long M = G.rows();
  K.resize(M, M);
#pragma omp parallel for schedule(static)
  for (long T = 0; T < M; ++T) {
    int tidx[8], iidx[8];
    long Tr = T;
    for (int a = dim - 1; a >= 0; --a) { tidx[a] = int(Tr % n); Tr /= n; }
    for (long I = 0; I < M; ++I) {
      long Ir = I;
      for (int a = dim - 1; a >= 0; --a) { iidx[a] = int(Ir % n); Ir /= n; }
      long J = 0;
      for (int a = 0; a < dim; ++a) J = J * n + wrap_j(iidx[a], tidx[a], n);
      K(I, J) = G(I, T);
    }
  }
}

void gather_diagonals_serial(const CMat& K, CMat& G, int dim, int n) {
  const long M = K.rows();
  G.resize(M, M);
  int iidx[8], tidx[8];
  for (long T = 0; T < M; ++T) {
    long Tr = T;
    for (int a = dim - 1; a >= 0; --a) { tidx[a] = int(Tr % n); Tr /= n; }
    for (long I = 0; I < M; ++I) {
      long Ir = I;
      for (int a = dim - 1; a >= 0; --a) { iidx[a] = int(Ir % n); Ir /= n; }
      long J = 0;
      for (int a = 0; a < dim; ++a) J = J * n + wrap_j(iidx[a], tidx[a], n);
      G(I, T) = K(I, J);
    }
  }
}

void gather_diagonals(const CMat& K, CMat& G, int dim, int n) {
  if (!parallel_enabled()) return gather_diagonals_serial(K, G, dim, n);
  const long M = K.rows();
  G.resize(M, M);
#pragma omp parallel for schedule(static)
  for (long T = 0; T < M; ++T) {
    int tidx[8], iidx[8];
    long Tr = T;
    for (int a = dim - 1; a >= 0; --a) { tidx[a] = int(Tr % n); Tr /= n; }
    for (long I = 0; I < M; ++I) {
      long Ir = I;
      for (int a = dim - 1; a >= 0; --a) { iidx[a] = int(Ir % n); Ir /= n; }
      long J = 0;
      for (int a = 0; a < dim; ++a) J = J * n + wrap_j(iidx[a], tidx[a], n);
      G(I, T) = K(I, J);
    }
  }
}

// ---- elementwise --------------------------------------------------------

void hadamard_cis_serial(CMat& K, const RMat& phase, double sign) {
  const long rows = K.rows(), cols = K.cols();
  for (long c = 0; c < cols; ++c)
    for (long r = 0; r < rows; ++r)
      K(r, c) *= Cplx(std::cos(sign * phase(r, c)), std::sin(sign * phase(r, c)));
}

void hadamard_cis(CMat& K, const RMat& phase, double sign) {
  if (!parallel_enabled()) return hadamard_cis_serial(K, phase, sign);
  const long rows = K.rows(), cols = K.cols();
#pragma omp parallel for schedule(static)
  for (long c = 0; c < cols; ++c)
    for (long r = 0; r < rows; ++r)
      K(r, c) *= Cplx(std::cos(sign * phase(r, c)), std::sin(sign * phase(r, c)));
}

void hadamard_mul(CMat& K, const CMat& table) { K.array() *= table.array(); }
void hadamard_div(CMat& K, const CMat& table) { K.array() /= table.array(); }

void fill_pair_table_serial(RMat& out, const std::function<double(long, long)>& fn) {
  const long rows = out.rows(), cols = out.cols();
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) out(i, j) = fn(i, j);
}

void fill_pair_table(RMat& out, const std::function<double(long, long)>& fn) {
  if (!parallel_enabled()) return fill_pair_table_serial(out, fn);
  const long rows = out.rows(), cols = out.cols();
#pragma omp parallel for schedule(dynamic, 8)
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) out(i, j) = fn(i, j);
}

// ---- matrix exponential --------------------------------------------------

CMat expm_pade(const CMat& A) {
  // Higham scaling-and-squaring, [13/13] Pade.
  static const double b[14] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  const long m = A.rows();
  double norm = 0.0;
  for (long c = 0; c < A.cols(); ++c) norm = std::max(norm, A.col(c).cwiseAbs().sum());
  int s = 0;
  const double theta13 = 5.371920351148152;
  if (norm > theta13) s = int(std::ceil(std::log2(norm / theta13)));
  CMat As = A / std::pow(2.0, s);
  CMat A2 = As * As;
  CMat A4 = A2 * A2;
  CMat A6 = A2 * A4;
  CMat I = CMat::Identity(m, m);
  CMat U = As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) +
                 b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  CMat V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) +
           b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  CMat R = (V - U).partialPivLu().solve(V + U);
  for (int i = 0; i < s; ++i) R = R * R;
  return R;
}

double power_opnorm(const CMat& M, uint64_t seed, int max_iter, double tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(M.cols());
  for (long i = 0; i < v.size(); ++i) v[i] = Cplx(nd(rng), nd(rng));
  v.normalize();
  double lam = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXcd w = M.adjoint() * (M * v);
    double nl = std::sqrt(w.norm());
    if (std::abs(nl - lam) <= tol * std::max(1.0, nl)) { lam = nl; break; }
    lam = nl;
    v = w / w.norm();
  }
  return lam;
}

}  // namespace magweyl::kernels
