#include "magweyl/grid.hpp"

namespace magweyl {

SpatialGrid make_grid(int dim, int n, double length) {
  require(dim >= 1 && dim <= 3, ErrorCode::ConfigError, "grid dim must be 1..3");
  require(n >= 4 && n % 2 == 0, ErrorCode::ConfigError, "grid points per axis must be even and >= 4");
  require(length > 0.0, ErrorCode::ConfigError, "grid length must be positive");
  SpatialGrid g;
  g.dim = dim;
  g.n = n;
  g.length = length;
  const double h = length / n;
  g.x.resize(n);
  g.xi.resize(n);
  for (int i = 0; i < n; ++i) {
    g.x[i] = -0.5 * length + h * i;
    g.xi[i] = (2.0 * kPi / length) * (i - n / 2);
  }
  return g;
}

}  // namespace magweyl
