#pragma once
#include <complex>
#include <vector>

#include "magweyl/quantize.hpp"
#include "magweyl/symbols.hpp"

namespace magweyl {

// Smooth compactly-supported-in-practice scalar profile with exact
// derivatives (expression tree in one variable). [lo, hi] bounds the support
// up to below-roundoff tails.
struct ScalarProfile {
  ExprPtr expr;
  double lo = 0.0, hi = 0.0;
  mutable std::vector<ExprPtr> ds;  // derivative chain cache

  double operator()(double t, int k = 0) const;
};

// Gaussian bump of the given center/width under an erf plateau that kills the
// tails; all derivatives analytic.
ScalarProfile bump_profile(double center, double width);

// Phi~(x+iy) = chi(y/<x>) sum_{k<=k_max} Phi^(k)(x) (iy)^k / k!
// dbar Phi~ vanishes to order k_max at the real axis.
struct QuasiAnalyticExtension {
  ScalarProfile phi;
  int k_max = 3;
  ExprPtr chi;              // plateau cutoff in r = y/<x>
  mutable ExprPtr chi_d;    // lazy derivative of chi

  std::complex<double> value(double x, double y) const;
  std::complex<double> dbar(double x, double y) const;
};
QuasiAnalyticExtension make_extension(const ScalarProfile& phi, int k_max = 3);

// dequantized matrix inverse; NotInvertible when cond exceeds ~1e12
SymbolField sharp_inverse(const SymbolField& f, const Gauge& A);

// sharp_inverse(f - z); SpectrumHit when z is within 1e-6 of an eigenvalue
SymbolField resolvent_symbol(const SymbolField& f, std::complex<double> z, const Gauge& A);

// s_0 = 1; s_m = a + <xi>^m for m > 0; the #^B-inverse of that for m < 0.
// a doubles from 1 until the quantization has smallest eigenvalue >= 0.5;
// SearchFailed beyond 2^16.
SymbolField make_s_m(double m, const SpatialGrid& g, const Gauge& A);

// functional calculus through the resolvent quadrature
//   Phi^B(f) = (1/pi) sum_mesh dA dbar(Phi~)(z) (f - z)^{(-1)_B}
// collapsed through one eigendecomposition; mesh doubles until the change
// is <= tol. MeshTooCoarse when the two-height dbar decay test fails or the
// mesh cap is hit.
struct HsOptions {
  int mesh0 = 64;
  int mesh_max = 512;
  double tol = 1e-4;
};
SymbolField hs_function(const QuasiAnalyticExtension& ext, const SymbolField& f, const Gauge& A,
                        const HsOptions& opt = HsOptions());

// dequantize(U diag((lambda + t0)^s) U^*); NotPositive unless min(lambda)+t0 > 0
SymbolField fractional_power(const SymbolField& f, double s, double t0, const Gauge& A);
// 1 + max(0, -lambda_min(quantize(f)))
double default_shift(const SymbolField& f, const Gauge& A);

}  // namespace magweyl
