#pragma once
#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "magweyl/errors.hpp"
#include "magweyl/grid.hpp"

namespace magweyl {

// Antisymmetric 2-form B_jk(x). Structured kinds keep flux/circulation exact;
// the general kind falls back to quadrature.
struct MagneticField {
  enum class Kind { Constant, Affine, General };
  int dim = 2;
  Kind kind = Kind::Constant;
  Eigen::MatrixXd B0;                 // constant part (antisymmetric)
  std::vector<Eigen::MatrixXd> lin;   // lin[l] = coefficient of x_l (affine)
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> fn;  // general

  Eigen::MatrixXd eval(const Eigen::VectorXd& x) const;
  // 2-form pairing u^T B(x) v
  double pair(const Eigen::VectorXd& x, const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
};

MagneticField make_constant_field(int dim, const Eigen::MatrixXd& B0);
// B(x) = B0 + sum_l x_l lin[l]
MagneticField make_affine_field(int dim, const Eigen::MatrixXd& B0,
                                const std::vector<Eigen::MatrixXd>& lin);
MagneticField make_general_field(int dim,
                                 std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> fn);
// 2D convenience: B12 = b
MagneticField make_scalar_field(double b);
// 2D general from a scalar profile B12(x)
MagneticField make_scalar_field(std::function<double(const Eigen::VectorXd&)> b12);

// max |dB_jkl| over samples; exact zero for constant, analytic for affine
double closedness_residual(const MagneticField& B, const SpatialGrid& sample);
double closedness_residual(const MagneticField& B, double box, int samples_per_axis);

// Vector potential A with structured kinds for exact line integrals.
//   Linear:    A(x) = M x
//   Quadratic: A_j(x) = (M x)_j + x^T Q[j] x
//   General:   callable, circulation via Gauss-Legendre 16
// Gradient parts are carried structurally: circulation(A + grad phi, x->y)
// = circulation(A, x->y) + phi(y) - phi(x), exactly.
struct Gauge {
  enum class Kind { Zero, Linear, Quadratic, General };
  int dim = 2;
  Kind kind = Kind::Zero;
  Eigen::MatrixXd M;
  std::vector<Eigen::MatrixXd> Q;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn;
  struct Grad {
    std::function<double(const Eigen::VectorXd&)> phi;
    std::string tag;
  };
  std::vector<Grad> grads;
  std::string tag;  // cache key; must be unique per distinct gauge

  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;  // includes nothing from grads
};

Gauge make_zero_gauge(int dim);
Gauge make_linear_gauge(int dim, const Eigen::MatrixXd& M, const std::string& tag);
// symmetric gauge of a constant field: A = -B0 x / 2
Gauge symmetric_gauge(const MagneticField& B);
// 2D Landau gauge of constant B12 = b: A = (0, b x1)
Gauge landau_gauge(double b);
// A_j(x) = -sum_k int_0^1 B_jk(s x) s x_k ds; exact for constant/affine B
Gauge transversal_gauge(const MagneticField& B);
Gauge make_general_gauge(int dim, std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn,
                         const std::string& tag);
// A + grad phi, phi carried structurally
Gauge gauge_transform(const Gauge& A, std::function<double(const Eigen::VectorXd&)> phi,
                      const std::string& phi_tag);

// line integral of A along the straight segment x -> y (includes grad parts)
double circulation(const Gauge& A, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// flux of B through the oriented triangle <a, b, c>
double flux(const MagneticField& B, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
            const Eigen::VectorXd& c);

// 2-cocycle lambda^B(q; x, y) = exp(-i * flux(B, q, q+x, q+x+y))
std::complex<double> cocycle(const MagneticField& B, const Eigen::VectorXd& q,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// |lambda(q;x,y) lambda(q;x+y,z) - lambda(q+x;y,z) lambda(q;x,y+z)|,
// zero for closed B (flux through the tetrahedron boundary vanishes)
double cocycle_identity_residual(const MagneticField& B, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& z);

// does Stokes hold exactly for this (B, A) pair on a sample of triangles?
double stokes_residual(const MagneticField& B, const Gauge& A, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace magweyl
