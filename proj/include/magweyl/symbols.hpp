#pragma once
#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "magweyl/errors.hpp"
#include "magweyl/grid.hpp"

namespace magweyl {

// Real-valued phase-space expression tree with exact partial derivatives.
// Variables: x_1..x_dim, xi_1..xi_dim.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Op {
    Const, VarX, VarXi,
    Add, Mul,
    Neg, Inv,
    PowInt, PowReal,  // u^k (k integer), u^p (p real, u > 0)
    Exp, Sin, Cos, Sqrt, Erf,
  };
  Op op = Op::Const;
  double value = 0.0;  // Const, PowReal exponent
  int index = 0;       // VarX / VarXi axis (0-based), PowInt exponent
  ExprPtr a, b;

  double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& xi) const;
};

ExprPtr econst(double v);
ExprPtr evar_x(int axis);
ExprPtr evar_xi(int axis);
ExprPtr eadd(ExprPtr a, ExprPtr b);
ExprPtr esub(ExprPtr a, ExprPtr b);
ExprPtr emul(ExprPtr a, ExprPtr b);
ExprPtr ediv(ExprPtr a, ExprPtr b);
ExprPtr eneg(ExprPtr a);
ExprPtr epow(ExprPtr a, int k);
ExprPtr epow(ExprPtr a, double p);
ExprPtr eexp(ExprPtr a);
ExprPtr esin(ExprPtr a);
ExprPtr ecos(ExprPtr a);
ExprPtr esqrt(ExprPtr a);
ExprPtr eerf(ExprPtr a);

// exact partial derivative; wrt_x selects x_axis vs xi_axis
ExprPtr differentiate(const ExprPtr& e, int axis, bool wrt_x);

// parse an expression over x1..x3, xi1..xi3, numbers, + - * / ^ ( ),
// functions exp sin cos sqrt erf pow(u,p)
ExprPtr parse_expr(const std::string& text, int dim);

// ---- sampled symbols -------------------------------------------------------

// Symbol sampled on the phase-space grid: rows flatten the x multi-index,
// columns the xi multi-index. Optional descriptor parts keep derivatives exact.
struct SymbolField {
  SpatialGrid grid;
  Eigen::MatrixXcd values;
  ExprPtr re, im;  // either may be null

  bool has_descriptor() const { return re != nullptr || im != nullptr; }
};

SymbolField sample(const SpatialGrid& g, const ExprPtr& re, const ExprPtr& im = nullptr);
SymbolField constant_symbol(const SpatialGrid& g, std::complex<double> c);

// arithmetic that preserves descriptors when both operands carry them
SymbolField add(const SymbolField& f, const SymbolField& g);
SymbolField sub(const SymbolField& f, const SymbolField& g);
SymbolField mul(const SymbolField& f, const SymbolField& g);
SymbolField scale(const SymbolField& f, std::complex<double> c);

// partial derivative: analytic when a descriptor is present, otherwise
// 4th-order central differences (periodic wrap).
SymbolField derivative(const SymbolField& f, int axis, bool wrt_x);
SymbolField fd_derivative(const SymbolField& f, int axis, bool wrt_x);

// named symbols
ExprPtr kinetic_expr(int dim);                    // |xi|^2
ExprPtr order_weight_expr(int dim, double m);     // (1+|xi|^2)^(m/2)
ExprPtr shifted_kinetic_expr(int dim, double a);  // a + |xi|^2
// 0.5*(erf((u+a)/s) - erf((u-a)/s)) with a = E/2, s = E/12; u = x_axis or xi_axis
ExprPtr plateau_expr(int axis, bool wrt_x, double extent);
ExprPtr window_x_expr(const SpatialGrid& g);    // product of x plateaus, E = L/2
ExprPtr window_xi_expr(const SpatialGrid& g);   // product of xi plateaus, E = xi_max
// linear form of the phase point X=(x0,xi0): l_X(y,eta) = y.xi0 - x0.eta
ExprPtr linear_form_expr(const Eigen::VectorXd& x0, const Eigen::VectorXd& xi0);
// exp(-i*t*l_X) as a complex pair
SymbolField exp_linear_form(const SpatialGrid& g, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& xi0, double t);

// sup over grid and |alpha|+|beta| <= order of
//   |d^beta_x d^alpha_xi f| * (1+|xi|^2)^(-(m - rho|alpha| + delta|beta|)/2)
double seminorm(const SymbolField& f, double m, double rho, double delta, int order);

// Scan of candidate dual radii R: C(R) = min over {|xi|>=R, all x} of
// |f|/(1+|xi|^2)^(m/2). Keeps radii retaining >= 10% of dual points.
struct EllipticityMargin {
  bool ok = false;
  double radius = 0.0;
  double constant = 0.0;
};
EllipticityMargin ellipticity_margin(const SymbolField& f, double m);

// points where every axis satisfies |x_a| <= L/(2*factor) and
// |xi_a| <= xi_max/factor; the default factor is the frozen comparison window
Eigen::ArrayXd comparison_mask_x(const SpatialGrid& g, double factor = 12.0);
Eigen::ArrayXd comparison_mask_xi(const SpatialGrid& g, double factor = 12.0);
// sup of |f - g| over the comparison window
double window_residual(const SymbolField& f, const SymbolField& g, double factor = 12.0);
double window_residual_const(const SymbolField& f, std::complex<double> c, double factor = 12.0);

}  // namespace magweyl
