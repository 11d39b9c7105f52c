#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "magweyl/field.hpp"
#include "magweyl/quantize.hpp"
#include "magweyl/symbols.hpp"

namespace magweyl {

// f #^B g through the kernel product: dequantize(Op(f) Op(g)).
// Gauge-independent to rounding by construction of the circulation phases.
SymbolField compose_operator_route(const SymbolField& f, const SymbolField& g, const Gauge& A);

// Direct oscillatory quadrature of the twisted product integral at selected
// grid points (desk-scale: cost (n^dim)^4 per point).
//   (f # g)(X) = pi^(-2 dim) sum_{Y,Z} w e^{-2i sigma(Y,Z)} omega_B(x,y,z)
//                f(X-Y) g(X-Z),  sigma((y,eta),(z,zeta)) = z.eta - y.zeta
// Throws NonDecaying when |f| or |g| at the grid boundary exceeds 1e-6 of max.
std::vector<std::complex<double>> compose_integral_at(
    const SymbolField& f, const SymbolField& g, const MagneticField& B,
    const std::vector<std::pair<long, long>>& points);

// l-th term of the product expansion. General multi-index formula; the
// triangle-flux factor enters through exact Taylor coefficients of
// omega_B(x,y,z) = exp(-i Gamma_B) for constant/affine fields (l <= 6),
// and analytically for any field when l <= 2.
struct ExpansionTermEntry {
  int l = 0;
  std::array<int, 3> a{}, alpha{}, b{}, beta{};
  std::complex<double> coeff;
  double max_abs = 0.0;
};
SymbolField expansion_term(const SymbolField& f, const SymbolField& g, const MagneticField& B,
                           int l, std::vector<ExpansionTermEntry>* table = nullptr);

// sum_{l<=order} expansion_term(l)
SymbolField compose_expansion(const SymbolField& f, const SymbolField& g,
                              const MagneticField& B, int order,
                              std::vector<ExpansionTermEntry>* table = nullptr);

// The closed-form second term as printed (diagonal epsilon = 1). Kept as a
// diagnostic: its diagonal coefficient differs from the general formula
// (which carries 1/2 there); the verify table reports the gap.
SymbolField printed_h2(const SymbolField& f, const SymbolField& g, const MagneticField& B);

// derivation by the linear form of X = (x0, xi0):
// ad_X[f] = dequantize([Op(l_X), Op(f)])
SymbolField ad_b(const SymbolField& f, const Gauge& A, const Eigen::VectorXd& x0,
                 const Eigen::VectorXd& xi0);

// twisted translation by t*X through kernel conjugation:
// dequantize(Op(e_{-tX}) Op(f) Op(e_{tX})), e_{tX} = exp(-i t l_X)
SymbolField twisted_translation(const SymbolField& f, const Gauge& A,
                                const Eigen::VectorXd& x0, const Eigen::VectorXd& xi0, double t);

// || Op(s_{-m + q*rho}) ad_{X_q} ... ad_{X_1} Op(f) ||, the iterated
// commutator seminorm with the order weight
double beals_bony_seminorm(const SymbolField& f, const Gauge& A,
                           const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& dirs,
                           double m, double rho);

}  // namespace magweyl
