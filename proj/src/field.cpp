#include "magweyl/field.hpp"

#include <cmath>

namespace magweyl {

namespace {

// Gauss-Legendre on [0,1]
constexpr int kGL8 = 8;
constexpr double kGL8x[kGL8] = {
    0.019855071751231912, 0.10166676129318664, 0.2372337950418355, 0.40828267875217511,
    0.59171732124782483, 0.7627662049581645, 0.89833323870681336, 0.98014492824876809};
constexpr double kGL8w[kGL8] = {
    0.050614268145188344, 0.11119051722668717, 0.15685332293894352, 0.18134189168918088,
    0.18134189168918088, 0.15685332293894352, 0.11119051722668717, 0.050614268145188344};

constexpr int kGL16 = 16;
constexpr double kGL16x[kGL16] = {
    0.0052995325041750307, 0.0277124884633837, 0.067184398806084122, 0.1222977958224985,
    0.19106187779867811, 0.27099161117138632, 0.35919822461037054, 0.45249374508118129,
    0.54750625491881877, 0.64080177538962946, 0.72900838882861363, 0.80893812220132189,
    0.87770220417750155, 0.93281560119391593, 0.9722875115366163, 0.99470046749582497};
constexpr double kGL16w[kGL16] = {
    0.013576229705877019, 0.031126761969323853, 0.047579255841246296, 0.062314485627767015,
    0.074797994408288382, 0.08457825969750131, 0.091301707522461806, 0.094725305227534293,
    0.094725305227534293, 0.091301707522461806, 0.08457825969750131, 0.074797994408288382,
    0.062314485627767015, 0.047579255841246296, 0.031126761969323853, 0.013576229705877019};

void check_antisym(const Eigen::MatrixXd& B) {
  require((B + B.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + B.cwiseAbs().maxCoeff()),
          ErrorCode::ConfigError, "field matrix must be antisymmetric");
}

}  // namespace

Eigen::MatrixXd MagneticField::eval(const Eigen::VectorXd& x) const {
  require(x.size() == dim, ErrorCode::DimensionMismatch, "field eval point dim");
  switch (kind) {
    case Kind::Constant: return B0;
    case Kind::Affine: {
      Eigen::MatrixXd B = B0;
      for (int l = 0; l < dim; ++l) B += x[l] * lin[l];
      return B;
    }
    case Kind::General: return fn(x);
  }
  return B0;
}

double MagneticField::pair(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v) const {
  return u.dot(eval(x) * v);
}

MagneticField make_constant_field(int dim, const Eigen::MatrixXd& B0) {
  require(dim >= 1 && dim <= 3, ErrorCode::DimensionMismatch, "field dim must be 1..3");
  require(B0.rows() == dim && B0.cols() == dim, ErrorCode::DimensionMismatch, "field matrix shape");
  check_antisym(B0);
  MagneticField B;
  B.dim = dim;
  B.kind = MagneticField::Kind::Constant;
  B.B0 = B0;
  return B;
}

MagneticField make_affine_field(int dim, const Eigen::MatrixXd& B0,
                                const std::vector<Eigen::MatrixXd>& lin) {
  MagneticField B = make_constant_field(dim, B0);
  require(int(lin.size()) == dim, ErrorCode::DimensionMismatch, "affine field needs dim slope matrices");
  for (const auto& C : lin) {
    require(C.rows() == dim && C.cols() == dim, ErrorCode::DimensionMismatch, "slope matrix shape");
    check_antisym(C);
  }
  B.kind = MagneticField::Kind::Affine;
  B.lin = lin;
  return B;
}

MagneticField make_general_field(int dim,
                                 std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> fn) {
  require(dim >= 1 && dim <= 3, ErrorCode::DimensionMismatch, "field dim must be 1..3");
  MagneticField B;
  B.dim = dim;
  B.kind = MagneticField::Kind::General;
  B.fn = std::move(fn);
  B.B0 = Eigen::MatrixXd::Zero(dim, dim);
  return B;
}

MagneticField make_scalar_field(double b) {
  Eigen::MatrixXd B0 = Eigen::MatrixXd::Zero(2, 2);
  B0(0, 1) = b;
  B0(1, 0) = -b;
  return make_constant_field(2, B0);
}

MagneticField make_scalar_field(std::function<double(const Eigen::VectorXd&)> b12) {
  auto fn = [b12 = std::move(b12)](const Eigen::VectorXd& x) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2, 2);
    B(0, 1) = b12(x);
    B(1, 0) = -B(0, 1);
    return B;
  };
  return make_general_field(2, std::move(fn));
}

namespace {
double dB_component(const MagneticField& B, const Eigen::VectorXd& x, int j, int k, int l) {
  // (dB)_{jkl} = d_j B_kl + d_k B_lj + d_l B_jk
  if (B.kind == MagneticField::Kind::Constant) return 0.0;
  if (B.kind == MagneticField::Kind::Affine)
    return B.lin[j](k, l) + B.lin[k](l, j) + B.lin[l](j, k);
  const double fd = 1e-4;
  auto d = [&](int dir, int a, int b) {
    Eigen::VectorXd xp = x, xm = x;
    xp[dir] += fd;
    xm[dir] -= fd;
    return (B.eval(xp)(a, b) - B.eval(xm)(a, b)) / (2 * fd);
  };
  return d(j, k, l) + d(k, l, j) + d(l, j, k);
}
}  // namespace

double closedness_residual(const MagneticField& B, double box, int samples_per_axis) {
  if (B.dim < 3) return 0.0;  // any 2-form in dim <= 2 is closed
  if (B.kind == MagneticField::Kind::Constant) return 0.0;
  double res = 0.0;
  const int m = samples_per_axis;
  Eigen::VectorXd x(B.dim);
  std::vector<int> idx(B.dim, 0);
  const long total = [&] { long t = 1; for (int a = 0; a < B.dim; ++a) t *= m; return t; }();
  for (long I = 0; I < total; ++I) {
    long r = I;
    for (int a = B.dim - 1; a >= 0; --a) { idx[a] = int(r % m); r /= m; }
    for (int a = 0; a < B.dim; ++a) x[a] = -box / 2 + box * (idx[a] + 0.5) / m;
    for (int j = 0; j < B.dim; ++j)
      for (int k = j + 1; k < B.dim; ++k)
        for (int l = k + 1; l < B.dim; ++l)
          res = std::max(res, std::abs(dB_component(B, x, j, k, l)));
  }
  return res;
}

double closedness_residual(const MagneticField& B, const SpatialGrid& sample) {
  require(sample.dim == B.dim, ErrorCode::DimensionMismatch, "closedness sample grid dim");
  return closedness_residual(B, sample.length, std::min(sample.n, 8));
}

// ---- gauges ---------------------------------------------------------------

Eigen::VectorXd Gauge::eval(const Eigen::VectorXd& x) const {
  require(x.size() == dim, ErrorCode::DimensionMismatch, "gauge eval point dim");
  switch (kind) {
    case Kind::Zero: return Eigen::VectorXd::Zero(dim);
    case Kind::Linear: return M * x;
    case Kind::Quadratic: {
      Eigen::VectorXd A = M * x;
      for (int j = 0; j < dim; ++j) A[j] += x.dot(Q[j] * x);
      return A;
    }
    case Kind::General: return fn(x);
  }
  return Eigen::VectorXd::Zero(dim);
}

Gauge make_zero_gauge(int dim) {
  Gauge A;
  A.dim = dim;
  A.kind = Gauge::Kind::Zero;
  A.tag = "zero" + std::to_string(dim);
  return A;
}

Gauge make_linear_gauge(int dim, const Eigen::MatrixXd& M, const std::string& tag) {
  require(M.rows() == dim && M.cols() == dim, ErrorCode::DimensionMismatch, "gauge matrix shape");
  Gauge A;
  A.dim = dim;
  A.kind = Gauge::Kind::Linear;
  A.M = M;
  A.tag = tag;
  return A;
}

Gauge symmetric_gauge(const MagneticField& B) {
  require(B.kind == MagneticField::Kind::Constant, ErrorCode::InconsistentPair,
          "symmetric gauge needs a constant field");
  char buf[64];
  std::snprintf(buf, sizeof buf, "sym(%.12g)", B.dim == 2 ? B.B0(0, 1) : B.B0.norm());
  return make_linear_gauge(B.dim, -0.5 * B.B0, buf);
}

Gauge landau_gauge(double b) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2, 2);
  M(1, 0) = b;
  char buf[64];
  std::snprintf(buf, sizeof buf, "landau(%.12g)", b);
  return make_linear_gauge(2, M, buf);
}

Gauge transversal_gauge(const MagneticField& B) {
  if (B.kind == MagneticField::Kind::Constant) {
    Gauge A = symmetric_gauge(B);
    return A;
  }
  if (B.kind == MagneticField::Kind::Affine) {
    // A_j = -(1/2)(B0 x)_j - (1/3) sum_{l,k} lin[l](j,k) x_l x_k
    Gauge A;
    A.dim = B.dim;
    A.kind = Gauge::Kind::Quadratic;
    A.M = -0.5 * B.B0;
    A.Q.resize(B.dim);
    for (int j = 0; j < B.dim; ++j) {
      Eigen::MatrixXd Qj = Eigen::MatrixXd::Zero(B.dim, B.dim);
      for (int l = 0; l < B.dim; ++l)
        for (int k = 0; k < B.dim; ++k)
          Qj(l, k) -= (B.lin[l](j, k) + B.lin[k](j, l)) / 6.0;
      A.Q[j] = Qj;
    }
    A.tag = "transversal-affine";
    return A;
  }
  // general: A_j(x) = -sum_k int_0^1 B_jk(s x) s x_k ds, GL16 in s
  auto Bf = B;
  auto fn = [Bf](const Eigen::VectorXd& x) {
    Eigen::VectorXd A = Eigen::VectorXd::Zero(x.size());
    for (int g = 0; g < kGL16; ++g) {
      const double s = kGL16x[g];
      A -= kGL16w[g] * s * (Bf.eval(s * x) * x);
    }
    return A;
  };
  return make_general_gauge(B.dim, std::move(fn), "transversal-general");
}

Gauge make_general_gauge(int dim, std::function<Eigen::VectorXd(const Eigen::VectorXd&)> fn,
                         const std::string& tag) {
  Gauge A;
  A.dim = dim;
  A.kind = Gauge::Kind::General;
  A.fn = std::move(fn);
  A.tag = tag;
  return A;
}

Gauge gauge_transform(const Gauge& A, std::function<double(const Eigen::VectorXd&)> phi,
                      const std::string& phi_tag) {
  Gauge out = A;
  out.grads.push_back({std::move(phi), phi_tag});
  out.tag = A.tag + "+grad(" + phi_tag + ")";
  return out;
}

double circulation(const Gauge& A, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  require(x.size() == A.dim && y.size() == A.dim, ErrorCode::DimensionMismatch,
          "circulation endpoint dim");
  const Eigen::VectorXd d = y - x;
  double c = 0.0;
  switch (A.kind) {
    case Gauge::Kind::Zero:
      break;
    case Gauge::Kind::Linear:
      // int_0^1 (M(x+sd)).d ds = d^T M (x + d/2)
      c = d.dot(A.M * (x + 0.5 * d));
      break;
    case Gauge::Kind::Quadratic: {
      c = d.dot(A.M * (x + 0.5 * d));
      // int_0^1 (x+sd)^T Q (x+sd) d_j ds, exact in closed form
      for (int j = 0; j < A.dim; ++j) {
        const double q0 = x.dot(A.Q[j] * x);
        const double q1 = x.dot(A.Q[j] * d) + d.dot(A.Q[j] * x);
        const double q2 = d.dot(A.Q[j] * d);
        c += d[j] * (q0 + 0.5 * q1 + q2 / 3.0);
      }
      break;
    }
    case Gauge::Kind::General:
      for (int g = 0; g < kGL16; ++g) c += kGL16w[g] * d.dot(A.fn(x + kGL16x[g] * d));
      break;
  }
  for (const auto& gp : A.grads) c += gp.phi(y) - gp.phi(x);
  return c;
}

// ---- flux ------------------------------------------------------------------

namespace {
double flux_quadrature(const MagneticField& B, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  // parametrize P(u,v) = a + u e1 + v(1-u) e2, jacobian (1-u); GL8 x GL8
  const Eigen::VectorXd e1 = b - a, e2 = c - a;
  double F = 0.0;
  for (int i = 0; i < kGL8; ++i)
    for (int j = 0; j < kGL8; ++j) {
      const double u = kGL8x[i], v = kGL8x[j];
      const Eigen::VectorXd P = a + u * e1 + v * (1.0 - u) * e2;
      F += kGL8w[i] * kGL8w[j] * (1.0 - u) * e1.dot(B.eval(P) * e2);
    }
  return F;
}
}  // namespace

double flux(const MagneticField& B, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
            const Eigen::VectorXd& c) {
  require(a.size() == B.dim && b.size() == B.dim && c.size() == B.dim,
          ErrorCode::DimensionMismatch, "flux corner dim");
  if (B.kind == MagneticField::Kind::Constant)
    return 0.5 * (b - a).dot(B.B0 * (c - a));
  if (B.kind == MagneticField::Kind::Affine) {
    // degree-1 integrand: midpoint-at-centroid rule is exact
    const Eigen::VectorXd g = (a + b + c) / 3.0;
    return 0.5 * (b - a).dot(B.eval(g) * (c - a));
  }
  // one midpoint subdivision, GL8 tensor on each sub-triangle
  const Eigen::VectorXd mab = 0.5 * (a + b), mbc = 0.5 * (b + c), mca = 0.5 * (c + a);
  return flux_quadrature(B, a, mab, mca) + flux_quadrature(B, mab, b, mbc) +
         flux_quadrature(B, mca, mbc, c) + flux_quadrature(B, mab, mbc, mca);
}

std::complex<double> cocycle(const MagneticField& B, const Eigen::VectorXd& q,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double G = flux(B, q, q + x, q + x + y);
  return {std::cos(G), -std::sin(G)};
}

double cocycle_identity_residual(const MagneticField& B, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& z) {
  const std::complex<double> lhs = cocycle(B, q, x, y) * cocycle(B, q, x + y, z);
  const std::complex<double> rhs = cocycle(B, q + x, y, z) * cocycle(B, q, x, y + z);
  return std::abs(lhs - rhs);
}

double stokes_residual(const MagneticField& B, const Gauge& A, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const double around = circulation(A, a, b) + circulation(A, b, c) + circulation(A, c, a);
  return std::abs(around - flux(B, a, b, c));
}

}  // namespace magweyl
