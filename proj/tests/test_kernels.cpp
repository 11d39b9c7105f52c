#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <complex>
#include <random>

#include "doctest.h"
#include "magweyl/kernels.hpp"

using namespace magweyl::kernels;

namespace {

CMat random_cmat(long r, long c, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  CMat M(r, c);
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j) M(i, j) = Cplx(N(rng), N(rng));
  return M;
}

// direct reference for axis application on the row multi-index
CMat axis_rows_oracle(const CMat& V, const CMat& T, int axis, int dim, int n) {
  long P = V.rows();
  CMat out = CMat::Zero(P, V.cols());
  std::vector<int> idx(dim);
  for (long I = 0; I < P; ++I) {
    long r = I;
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = int(r % n);
      r /= n;
    }
    long stride = 1;
    for (int a = dim - 1; a > axis; --a) stride *= n;
    long base = I - idx[axis] * stride;
    for (int t = 0; t < n; ++t) out.row(I) += T(idx[axis], t) * V.row(base + t * stride);
  }
  return out;
}

}  // namespace

TEST_CASE("axis_apply_rows matches the direct oracle and its serial twin") {
  int dim = 2, n = 6;
  long P = 36;
  CMat V = random_cmat(P, P, 11);
  CMat T = random_cmat(n, n, 12);
  for (int axis = 0; axis < dim; ++axis) {
    CMat want = axis_rows_oracle(V, T, axis, dim, n);
    CMat a = V, b = V;
    axis_apply_rows(a, T, axis, dim, n);
    axis_apply_rows_serial(b, T, axis, dim, n);
    CHECK((a - want).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("axis_apply_cols is the row action on the transpose") {
  int dim = 2, n = 5;
  long P = 25;
  CMat V = random_cmat(P, P, 21);
  CMat T = random_cmat(n, n, 22);
  for (int axis = 0; axis < dim; ++axis) {
    CMat a = V, b = V.transpose();
    axis_apply_cols(a, T, axis, dim, n);
    axis_apply_rows(b, T, axis, dim, n);
    CHECK((a - b.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CMat c = V;
    axis_apply_cols_serial(c, T, axis, dim, n);
    CHECK((a - c).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("scatter/gather diagonals: hand case and round trip") {
  int dim = 1, n = 4;
  CMat G = random_cmat(n, n, 31);
  CMat K;
  scatter_diagonals(G, K, dim, n);
  // j = (i + t - n/2) mod n
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < n; ++t) {
      int j = ((i + t - n / 2) % n + n) % n;
      CHECK(std::abs(K(i, j) - G(i, t)) == 0.0);
    }
  CMat G2;
  gather_diagonals(K, G2, dim, n);
  CHECK((G - G2).cwiseAbs().maxCoeff() == 0.0);

  // 2D round trip + serial equivalence
  int n2 = 5;
  CMat H = random_cmat(25, 25, 32), K1, K2, H2;
  scatter_diagonals(H, K1, 2, n2);
  scatter_diagonals_serial(H, K2, 2, n2);
  CHECK((K1 - K2).cwiseAbs().maxCoeff() == 0.0);  // pure reindex, no arithmetic
  gather_diagonals_serial(K1, H2, 2, n2);
  CHECK((H - H2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hadamard_cis applies exp(i*sign*phase) entrywise") {
  CMat K = random_cmat(7, 7, 41);
  Eigen::MatrixXd phase = Eigen::MatrixXd::Random(7, 7);
  CMat a = K, b = K;
  hadamard_cis(a, phase, -1.0);
  hadamard_cis_serial(b, phase, -1.0);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      Cplx want = K(i, j) * std::polar(1.0, -phase(i, j));
      CHECK(std::abs(a(i, j) - want) < 1e-15);
    }
}

TEST_CASE("hadamard mul/div are mutually inverse") {
  CMat K = random_cmat(9, 9, 51);
  CMat tab = random_cmat(9, 9, 52);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) tab(i, j) += Cplx(3.0, 0.0);  // keep away from zero
  CMat a = K;
  hadamard_mul(a, tab);
  hadamard_div(a, tab);
  CHECK((a - K).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("fill_pair_table parallel equals serial") {
  auto fn = [](long i, long j) { return std::sin(0.1 * i) * std::cos(0.07 * j) + i - 2.0 * j; };
  Eigen::MatrixXd A(33, 33), B(33, 33);
  fill_pair_table(A, fn);
  fill_pair_table_serial(B, fn);
  CHECK((A - B).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("expm_pade: unitary exponential of a skew-Hermitian generator") {
  CMat H = random_cmat(20, 20, 61);
  H = (H + H.adjoint()).eval() / 2.0;
  CMat W = expm_pade(Cplx(0.0, -1.0) * H);
  CHECK((W * W.adjoint() - CMat::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-12);

  // eigendecomposition oracle
  Eigen::SelfAdjointEigenSolver<CMat> es(H);
  CMat D = CMat::Zero(20, 20);
  for (int k = 0; k < 20; ++k) D(k, k) = std::polar(1.0, -es.eigenvalues()[k]);
  CMat want = es.eigenvectors() * D * es.eigenvectors().adjoint();
  CHECK((W - want).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("expm_pade handles larger norms through scaling and squaring") {
  CMat H = 40.0 * random_cmat(12, 12, 62);
  H = (H + H.adjoint()).eval() / 2.0;
  CMat W = expm_pade(Cplx(0.0, -1.0) * H);
  CHECK((W * W.adjoint() - CMat::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("power_opnorm agrees with the SVD oracle") {
  CMat M = random_cmat(30, 30, 71);
  Eigen::JacobiSVD<CMat> svd(M);
  double want = svd.singularValues()[0];
  double got = power_opnorm(M, 42);
  CHECK(std::abs(got - want) / want < 1e-7);
}

TEST_CASE("parallel switch round-trips") {
  bool was = parallel_enabled();
  set_parallel(false);
  CHECK_FALSE(parallel_enabled());
  set_parallel(was);
  CHECK(parallel_enabled() == was);
}
