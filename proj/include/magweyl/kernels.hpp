#pragma once
#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>

namespace magweyl::kernels {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

// Global switch between the OpenMP kernels and the serial reference twins.
// Tests compare both; MAGWEYL_SERIAL=1 forces serial at startup.
bool parallel_enabled();
void set_parallel(bool on);

// Apply T (n x n) along one axis of the row multi-index of V.
// Rows of V are flattened row-major multi-indices (axis 0 most significant),
// extent n per axis, `dim` axes. V'[..,s,..] = sum_t T(s,t) V[..,t,..].
void axis_apply_rows(CMat& V, const CMat& T, int axis, int dim, int n);
void axis_apply_rows_serial(CMat& V, const CMat& T, int axis, int dim, int n);

// Same along one axis of the column multi-index.
void axis_apply_cols(CMat& V, const CMat& T, int axis, int dim, int n);
void axis_apply_cols_serial(CMat& V, const CMat& T, int axis, int dim, int n);

// Diagonal reindex between profile G[I,T] and kernel K[I,J]:
// j_a = (i_a + t_a - n/2) mod n per axis.
void scatter_diagonals(const CMat& G, CMat& K, int dim, int n);
void scatter_diagonals_serial(const CMat& G, CMat& K, int dim, int n);
void gather_diagonals(const CMat& K, CMat& G, int dim, int n);
void gather_diagonals_serial(const CMat& K, CMat& G, int dim, int n);

// K(i,j) *= exp(i * sign * phase(i,j))
void hadamard_cis(CMat& K, const RMat& phase, double sign);
void hadamard_cis_serial(CMat& K, const RMat& phase, double sign);

// Elementwise product / quotient with a precomputed table.
void hadamard_mul(CMat& K, const CMat& table);
void hadamard_div(CMat& K, const CMat& table);

// Fill a pair table out(i,j) = fn(i,j) (used for circulation phases).
void fill_pair_table(RMat& out, const std::function<double(long, long)>& fn);
void fill_pair_table_serial(RMat& out, const std::function<double(long, long)>& fn);

// Oscillatory double-grid quadrature helper: out(X) accumulated by caller.
// (compose_integral keeps its own loop; reduction lives there.)

// Matrix exponential, scaling-and-squaring Pade 13 (Higham coefficients).
CMat expm_pade(const CMat& A);

// Largest singular value estimate by power iteration on M^H M. Deterministic
// seed. Used for benchmarking; certified norms go through the dense path.
double power_opnorm(const CMat& M, uint64_t seed, int max_iter = 200, double tol = 1e-10);

}  // namespace magweyl::kernels
