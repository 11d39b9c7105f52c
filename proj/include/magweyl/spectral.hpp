#pragma once
#include <string>
#include <vector>

#include "magweyl/field.hpp"
#include "magweyl/quantize.hpp"
#include "magweyl/symbols.hpp"

namespace magweyl {

struct SpectralReport {
  SpatialGrid grid;
  std::string gauge_tag;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::VectorXd localization;  // participation ratio of each eigenvector, in (0, 1]
  double herm_residual = 0.0;
};

// Dense eigendecomposition. Hermitian path (residual <= 1e-8) symmetrizes and
// uses the LAPACK solver; otherwise a general dense solve (desk-scale only).
SpectralReport eigensolve(const OperatorMatrix& T);

// smallest eigenvalue of the quantization of a pointwise-nonnegative symbol
double garding_floor(const SymbolField& f, const Gauge& A);

// values of a xi-only symbol at dual points where the finite-difference
// gradient nearly vanishes; connected components reduced to their flattest
// point, values merged within 1e-6
std::vector<double> critical_values(const ExprPtr& f0, const SpatialGrid& g);

// eigenvalues of gap-separated groups whose best participation ratio clears
// the threshold; cluster_eps <= 0 applies the rule state by state
std::vector<double> delocalized_set(const SpectralReport& rep, double pr_threshold,
                                    double cluster_eps);

// symmetric Hausdorff distance between A and B restricted to [lo, hi];
// infinity when either restriction is empty
double hausdorff_window(const std::vector<double>& A, const std::vector<double>& B, double lo,
                        double hi);

// f = f0(xi) + fS + fL with decay hypotheses checked at the box edge
struct PerturbationSplit {
  ExprPtr f0;        // xi-only
  ExprPtr fS, fL;    // either may be null
  double eps = 1.0;  // decay exponent of the field/long-range bounds
};

struct EssReport {
  double window_lo = 0.0, window_hi = 0.0;
  double hausdorff = 0.0;
  std::vector<double> delocalized;      // inside the window
  std::vector<double> localized_below;  // localized states under inf f0
  bool pass = false;                    // hausdorff <= 5% of the window
};

// delocalized spectrum vs the f0 dual range on the comparison window, plus
// the localized states below inf f0 (discrete-spectrum proxy)
EssReport ess_spectrum_decaying(const PerturbationSplit& split, const MagneticField& B,
                                const Gauge& A, const SpatialGrid& g, double pr_threshold = 0.2,
                                double cluster_eps = -1.0);

// norms of <Q>^-gamma weighted resolvents at lambda + i*eps, Sobolev factors
// applied as quantized <xi>^{m/2} multipliers; one eigendecomposition total
std::vector<double> lap_probe(const SymbolField& f, const Gauge& A, double lambda,
                              const std::vector<double>& eps_list, double gamma, double m);

// directional two-limit profile: the full symbol/field approach (f-, B-) and
// (f+, B+) along -axis/+axis
struct AnisotropyProfile {
  int axis = 0;
  ExprPtr f_minus, f_plus;
  MagneticField B_minus, B_plus;
  double transition = 1.5;
};

struct AnisoReport {
  double window_lo = 0.0, window_hi = 0.0;
  double hausdorff = 0.0;
  std::vector<double> union_spectrum;  // inside the window
  std::vector<double> delocalized;     // inside the window
  bool pass = false;
};

// limit operators on the same grid; union of their spectra vs the
// delocalized set of the full operator
AnisoReport anisotropic_ess(const AnisotropyProfile& p, const SymbolField& f_full,
                            const MagneticField& B_full, const Gauge& A_full,
                            double pr_threshold = 0.2, double cluster_eps = -1.0);

// gauge with a directional primitive for a constant 2D field: A flows along
// the axis orthogonal to `axis` so limit operators stay comparable
Gauge limit_gauge(const MagneticField& B, int axis);

}  // namespace magweyl
