#pragma once
#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "magweyl/errors.hpp"

namespace magweyl {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Uniform periodic box [-L/2, L/2)^dim with n points per axis.
//   x_i  = -L/2 + h*i,          h = L/n
//   xi_k = (2*pi/L)*(k - n/2)   (monotone storage, Nyquist at k=0)
// The dual grid covers [-xi_max, xi_max) with xi_max = pi*n/L.
struct SpatialGrid {
  int dim = 0;
  int n = 0;
  double length = 0.0;

  Eigen::VectorXd x;   // per-axis positions
  Eigen::VectorXd xi;  // per-axis frequencies

  double h() const { return length / n; }
  double xi_step() const { return 2.0 * kPi / length; }
  double xi_max() const { return kPi * n / length; }

  // flattened extent n^dim (row-major multi-index, axis 0 most significant)
  long points() const {
    long p = 1;
    for (int a = 0; a < dim; ++a) p *= n;
    return p;
  }

  void unflatten(long I, int* idx) const {
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = int(I % n);
      I /= n;
    }
  }
  long flatten(const int* idx) const {
    long I = 0;
    for (int a = 0; a < dim; ++a) I = I * n + idx[a];
    return I;
  }

  // position / frequency vector of a flattened index
  Eigen::VectorXd point(long I) const {
    int idx[8];
    unflatten(I, idx);
    Eigen::VectorXd p(dim);
    for (int a = 0; a < dim; ++a) p[a] = x[idx[a]];
    return p;
  }
  Eigen::VectorXd freq(long K) const {
    int idx[8];
    unflatten(K, idx);
    Eigen::VectorXd p(dim);
    for (int a = 0; a < dim; ++a) p[a] = xi[idx[a]];
    return p;
  }

  bool same(const SpatialGrid& o) const {
    return dim == o.dim && n == o.n && length == o.length;
  }
};

SpatialGrid make_grid(int dim, int n, double length);

}  // namespace magweyl
