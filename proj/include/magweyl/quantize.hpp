#pragma once
#include <Eigen/Dense>
#include <complex>
#include <string>

#include "magweyl/field.hpp"
#include "magweyl/grid.hpp"
#include "magweyl/symbols.hpp"

namespace magweyl {

// Kernel matrix of a quantized symbol. Rows/cols index grid points; the
// matrix acts on sampled wave functions. gauge_tag records provenance for
// pairing checks. herm_residual = max|K - K^H| measured at construction
// for real symbols (NaN for complex ones).
struct OperatorMatrix {
  SpatialGrid grid;
  std::string gauge_tag;
  Eigen::MatrixXcd mat;
  double herm_residual = std::numeric_limits<double>::quiet_NaN();
};

struct WaveFunction {
  SpatialGrid grid;
  Eigen::VectorXcd v;
};

// L2 inner product / norm with the h^dim cell weight
std::complex<double> l2_inner(const WaveFunction& a, const WaveFunction& b);
double l2_norm(const WaveFunction& a);

// product over axes of exp(-(x-x0)^2/(2 s^2) + i k0 x), L2-normalized
WaveFunction coherent_state(const SpatialGrid& g, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& k0, double s);

// Weyl quantization on the periodic grid. Exact linear bijection with
// dequantize: per-axis DFTs, half-step interpolation phase, and the
// magnetic circulation phase exp(-i Circ(x_i -> x_j)) as entrywise factor.
OperatorMatrix quantize(const SymbolField& f, const Gauge& A);
// tag mismatch between the kernel and the gauge is an InconsistentPair
SymbolField dequantize(const OperatorMatrix& K, const Gauge& A);
SymbolField dequantize(const Eigen::MatrixXcd& K, const Gauge& A, const SpatialGrid& g);

// Fourier multiplier D_j (quantization of xi_j at zero gauge); cached.
Eigen::MatrixXcd multiplier_matrix(const SpatialGrid& g, int axis);

// Pi^A_j = D_j - diag(A_j(x)); the kinetic momentum matrix of the pinned form
Eigen::MatrixXcd kinetic_momentum(const SpatialGrid& g, const Gauge& A, int axis);

// W^A(X) = expm(-i (x0 . Pi^A - xi0 . Q)) for the phase point X = (x0, xi0)
OperatorMatrix weyl_system(const SpatialGrid& g, const Gauge& A, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& xi0);

// (T(x0)u)(x) = exp(-i Circ(x -> x+x0)) u(x+x0); x0 must lie on the lattice.
// Circulation endpoints are unwrapped, so T(x)T(y) = diag(cocycle) T(x+y)
// holds exactly on rows whose hops stay inside the box. Rows that wrap pick
// up the gauge holonomy of a torus cycle; for a non-quantized uniform field
// no gauge is periodic, so that phase is intrinsic to the finite model.
OperatorMatrix magnetic_translation(const SpatialGrid& g, const Gauge& A,
                                    const Eigen::VectorXd& x0);

// || quantize(order_weight(m)) u ||_L2
double sobolev_norm(const WaveFunction& u, double m, const Gauge& A);

// dense Hermitian eigensolve (LAPACK zheevd), ascending eigenvalues
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;  // empty when vectors not requested
};
EigenSystem hermitian_eigensolve(const Eigen::MatrixXcd& H, bool vectors = true);

// largest singular value via dense decomposition of M^H M
double operator_norm(const Eigen::MatrixXcd& M);

// drop cached DFT/circulation tables (memory control in long runs)
void clear_mode_caches();

}  // namespace magweyl
