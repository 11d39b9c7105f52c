#include "magweyl/moyal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace magweyl {

using Cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

using M3 = std::array<int, 3>;

int mabs(const M3& m) { return m[0] + m[1] + m[2]; }

double fact(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

double mfact(const M3& m) { return fact(m[0]) * fact(m[1]) * fact(m[2]); }

M3 msub(const M3& a, const M3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

void gen_multis(int dim, int total, int pos, M3& cur, std::vector<M3>& out) {
  if (pos == dim - 1) {
    cur[pos] = total;
    out.push_back(cur);
    cur[pos] = 0;
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur[pos] = k;
    gen_multis(dim, total - k, pos + 1, cur, out);
  }
  cur[pos] = 0;
}

std::vector<M3> multis_with_sum(int dim, int total) {
  std::vector<M3> out;
  M3 cur{0, 0, 0};
  gen_multis(dim, total, 0, cur, out);
  return out;
}

std::vector<M3> submultis(const M3& m, int dim) {
  std::vector<M3> out;
  M3 a{0, 0, 0};
  int c0 = dim > 0 ? m[0] : 0, c1 = dim > 1 ? m[1] : 0, c2 = dim > 2 ? m[2] : 0;
  for (a[0] = 0; a[0] <= c0; ++a[0])
    for (a[1] = 0; a[1] <= c1; ++a[1])
      for (a[2] = 0; a[2] <= c2; ++a[2]) out.push_back(a);
  return out;
}

Cplx ihalf_pow(int l) {
  Cplx r(1.0, 0.0);
  const Cplx ih(0.0, 0.5);
  for (int i = 0; i < l; ++i) r *= ih;
  return r;
}

// ---- Taylor table of omega_B(x,y,z) = exp(-i Gamma_B) around (y,z) = 0 ----
//
// Gamma_B is the flux through the triangle <x-y-z, x+y-z, x-y+z>. It vanishes
// when y = 0 or z = 0, so the series starts at the bilinear term 2 y^T B(x) z.
// For constant/affine fields Gamma is itself polynomial in (y,z) (the affine
// centroid rule is exact) and the exponential is truncated exactly. For a
// general field only the bilinear part is available analytically (enough for
// terms of order <= 2).

using Mono = std::array<int, 6>;  // slots 0..2 = y, 3..5 = z
using Poly = std::map<Mono, Cplx>;

int mono_deg(const Mono& m) { return m[0] + m[1] + m[2] + m[3] + m[4] + m[5]; }

Poly pmul(const Poly& A, const Poly& B, int maxdeg) {
  Poly out;
  for (const auto& [ma, ca] : A)
    for (const auto& [mb, cb] : B) {
      Mono m;
      for (int i = 0; i < 6; ++i) m[i] = ma[i] + mb[i];
      if (mono_deg(m) > maxdeg) continue;
      out[m] += ca * cb;
    }
  return out;
}

// polynomial of Gamma_B(x, y, z) in (y,z); exact for constant/affine
Poly gamma_poly(const MagneticField& B, const VectorXd& x, int maxdeg) {
  Poly G;
  const int d = B.dim;
  Eigen::MatrixXd Bx = B.eval(x);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      if (Bx(j, k) == 0.0) continue;
      Mono m{};
      m[j] += 1;
      m[3 + k] += 1;
      if (mono_deg(m) <= maxdeg) G[m] += 2.0 * Bx(j, k);
    }
  if (B.kind == MagneticField::Kind::Affine) {
    // Gamma = 2 y^T B(x - (y+z)/3) z: centroid shift adds the cubic part
    for (int l = 0; l < d; ++l) {
      const Eigen::MatrixXd& C = B.lin[l];
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          if (C(j, k) == 0.0) continue;
          Mono my{};
          my[l] += 1;
          my[j] += 1;
          my[3 + k] += 1;
          if (mono_deg(my) <= maxdeg) G[my] += -(2.0 / 3.0) * C(j, k);
          Mono mz{};
          mz[3 + l] += 1;
          mz[j] += 1;
          mz[3 + k] += 1;
          if (mono_deg(mz) <= maxdeg) G[mz] += -(2.0 / 3.0) * C(j, k);
        }
    }
  }
  return G;
}

Poly exp_neg_i(const Poly& G, int maxdeg) {
  Poly E;
  E[Mono{}] = Cplx(1.0, 0.0);
  Poly P;  // -i * Gamma
  for (const auto& [m, c] : G) P[m] = Cplx(0.0, -1.0) * c;
  Poly term = P;
  int mmax = maxdeg / 2;  // Gamma has no constant/linear part
  for (int m = 1; m <= mmax; ++m) {
    if (m > 1) {
      term = pmul(term, P, maxdeg);
      for (auto& [mo, c] : term) c /= double(m);
    }
    if (term.empty()) break;
    for (const auto& [mo, c] : term) E[mo] += c;
  }
  return E;
}

struct OmegaTable {
  int dim = 0;
  bool uniform = false;       // constant field: one table for all x
  std::vector<Poly> coef;     // per x-point (or a single entry when uniform)

  // (d^c_y d^d_z omega)(x, 0, 0)
  Cplx deriv(long xi, const M3& c, const M3& d) const {
    const Poly& P = coef[uniform ? 0 : size_t(xi)];
    Mono m{};
    for (int i = 0; i < dim; ++i) {
      m[i] = c[i];
      m[3 + i] = d[i];
    }
    auto it = P.find(m);
    if (it == P.end()) return Cplx(0.0, 0.0);
    double cf = 1.0;
    for (int i = 0; i < 6; ++i) cf *= fact(m[i]);
    return it->second * cf;
  }
};

OmegaTable build_omega(const SpatialGrid& g, const MagneticField& B, int maxdeg) {
  OmegaTable T;
  T.dim = g.dim;
  if (B.kind == MagneticField::Kind::Constant) {
    T.uniform = true;
    T.coef.resize(1);
    T.coef[0] = exp_neg_i(gamma_poly(B, VectorXd::Zero(g.dim), maxdeg), maxdeg);
    return T;
  }
  const long P = g.points();
  T.coef.resize(size_t(P));
  if (B.kind == MagneticField::Kind::Affine) {
#pragma omp parallel for schedule(static)
    for (long I = 0; I < P; ++I)
      T.coef[size_t(I)] = exp_neg_i(gamma_poly(B, g.point(I), maxdeg), maxdeg);
    return T;
  }
  // general field: bilinear part only
  require(maxdeg <= 2, ErrorCode::DerivativeOrderExceeded,
          "expansion beyond order 2 needs a constant or affine field");
#pragma omp parallel for schedule(static)
  for (long I = 0; I < P; ++I) {
    VectorXd x = g.point(I);
    Eigen::MatrixXd Bx = B.eval(x);
    Poly E;
    E[Mono{}] = Cplx(1.0, 0.0);
    for (int j = 0; j < g.dim; ++j)
      for (int k = 0; k < g.dim; ++k) {
        if (Bx(j, k) == 0.0) continue;
        Mono m{};
        m[j] += 1;
        m[3 + k] += 1;
        E[m] += Cplx(0.0, -2.0) * Bx(j, k);
      }
    T.coef[size_t(I)] = std::move(E);
  }
  return T;
}

// ---- derivative caches ------------------------------------------------------

bool expr_zero(const ExprPtr& e) {
  return e == nullptr || (e->op == Expr::Op::Const && e->value == 0.0);
}

ExprPtr dmulti(ExprPtr e, const M3& dx, const M3& dxi) {
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < dx[a] && e; ++k) e = differentiate(e, a, true);
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < dxi[a] && e; ++k) e = differentiate(e, a, false);
  return e;
}

uint32_t pack_multi(const M3& dx, const M3& dxi) {
  uint32_t k = 0;
  for (int a = 0; a < 3; ++a) k |= uint32_t(dx[a]) << (4 * a);
  for (int a = 0; a < 3; ++a) k |= uint32_t(dxi[a]) << (12 + 4 * a);
  return k;
}

// FD chain cache for descriptor-free symbols (desk-scale grids only)
const SymbolField& fd_chain(std::map<uint32_t, SymbolField>& cache, const SymbolField& base,
                            const M3& dx, const M3& dxi) {
  uint32_t key = pack_multi(dx, dxi);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  for (int a = 0; a < 3; ++a)
    if (dx[a] > 0) {
      M3 px = dx;
      px[a] -= 1;
      const SymbolField& parent = fd_chain(cache, base, px, dxi);
      return cache.emplace(key, derivative(parent, a, true)).first->second;
    }
  for (int a = 0; a < 3; ++a)
    if (dxi[a] > 0) {
      M3 pxi = dxi;
      pxi[a] -= 1;
      const SymbolField& parent = fd_chain(cache, base, dx, pxi);
      return cache.emplace(key, derivative(parent, a, false)).first->second;
    }
  return cache.emplace(key, base).first->second;
}

// One side (f or g) of the expansion: hands out derivative fields, streaming
// through descriptor trees when available so large grids never hold a cache
// of full phase-space matrices.
struct DerivSource {
  const SymbolField& base;
  bool analytic;
  std::map<uint32_t, std::pair<ExprPtr, ExprPtr>> trees;
  std::map<uint32_t, SymbolField> fields;

  explicit DerivSource(const SymbolField& b) : base(b), analytic(b.has_descriptor()) {}

  // true when the derivative vanishes identically (descriptor path)
  bool known_zero(const M3& dx, const M3& dxi) {
    if (!analytic) return false;
    const auto& [re, im] = tree(dx, dxi);
    return expr_zero(re) && expr_zero(im);
  }

  const std::pair<ExprPtr, ExprPtr>& tree(const M3& dx, const M3& dxi) {
    uint32_t key = pack_multi(dx, dxi);
    auto it = trees.find(key);
    if (it != trees.end()) return it->second;
    return trees.emplace(key, std::make_pair(dmulti(base.re, dx, dxi), dmulti(base.im, dx, dxi)))
        .first->second;
  }

  // materialize the derivative field (caller keeps it only for one term)
  SymbolField field(const M3& dx, const M3& dxi) {
    if (analytic) {
      const auto& [re, im] = tree(dx, dxi);
      ExprPtr r = re ? re : econst(0.0);
      return sample(base.grid, r, im);
    }
    require(base.grid.points() <= 2048, ErrorCode::ComputeError,
            "expansion of descriptor-free symbols is desk-scale; attach expressions");
    return fd_chain(fields, base, dx, dxi);
  }
};

double shell_max(const SymbolField& f) {
  const int n = f.grid.n, dim = f.grid.dim;
  const long P = f.grid.points();
  int idx[8];
  double mx = 0.0;
  auto on_shell = [&](long I) {
    f.grid.unflatten(I, idx);
    for (int a = 0; a < dim; ++a)
      if (idx[a] == 0 || idx[a] == n - 1) return true;
    return false;
  };
  std::vector<char> xs(static_cast<size_t>(P), 0);
  for (long I = 0; I < P; ++I) xs[size_t(I)] = on_shell(I) ? 1 : 0;
  for (long I = 0; I < P; ++I)
    for (long K = 0; K < P; ++K)
      if (xs[size_t(I)] || xs[size_t(K)]) mx = std::max(mx, std::abs(f.values(I, K)));
  return mx;
}

SymbolField term_impl(const SymbolField& f, const SymbolField& g, const MagneticField& B,
                      const OmegaTable& omega, DerivSource& fs, DerivSource& gs, int l,
                      std::vector<ExpansionTermEntry>* table) {
  const SpatialGrid& grid = f.grid;
  const long P = grid.points();
  SymbolField out;
  out.grid = grid;
  out.values = MatrixXcd::Zero(P, P);

  VectorXcd wvec(P);
  for (int ka = 0; ka <= l; ++ka) {
    for (const M3& alpha : multis_with_sum(grid.dim, ka)) {
      for (const M3& beta : multis_with_sum(grid.dim, l - ka)) {
        for (const M3& a : submultis(beta, grid.dim)) {
          for (const M3& b : submultis(alpha, grid.dim)) {
            const M3 c = msub(beta, a);   // y-derivatives of omega
            const M3 d = msub(alpha, b);  // z-derivatives of omega
            // omega factor over x; skip identically-zero combinations early
            bool any = false;
            if (omega.uniform) {
              Cplx w0 = omega.deriv(0, c, d);
              wvec.setConstant(w0);
              any = (w0 != Cplx(0.0, 0.0));
            } else {
              for (long I = 0; I < P; ++I) {
                wvec[I] = omega.deriv(I, c, d);
                any = any || (wvec[I] != Cplx(0.0, 0.0));
              }
            }
            if (!any) continue;
            if (fs.known_zero(a, alpha) || gs.known_zero(b, beta)) continue;

            double parity = ((mabs(a) + mabs(b) + mabs(beta)) % 2 == 0) ? 1.0 : -1.0;
            Cplx C = ihalf_pow(l) * parity /
                     (mfact(a) * mfact(b) * mfact(msub(alpha, b)) * mfact(msub(beta, a)));

            SymbolField Fd = fs.field(a, alpha);
            SymbolField Gd = gs.field(b, beta);

            double local_max = 0.0;
#pragma omp parallel for schedule(static) reduction(max : local_max)
            for (long I = 0; I < P; ++I) {
              if (wvec[I] == Cplx(0.0, 0.0)) continue;
              const Cplx s = C * wvec[I];
              auto row = out.values.row(I);
              auto fr = Fd.values.row(I);
              auto gr = Gd.values.row(I);
              for (long K = 0; K < P; ++K) {
                Cplx v = s * fr[K] * gr[K];
                row[K] += v;
                double av = std::abs(v);
                if (av > local_max) local_max = av;
              }
            }
            if (table) {
              ExpansionTermEntry e;
              e.l = l;
              e.a = a;
              e.alpha = alpha;
              e.b = b;
              e.beta = beta;
              e.coeff = C;
              e.max_abs = local_max;
              table->push_back(e);
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

SymbolField compose_operator_route(const SymbolField& f, const SymbolField& g, const Gauge& A) {
  require(f.grid.same(g.grid), ErrorCode::GridMismatch, "compose: operands on different grids");
  require(f.grid.dim == A.dim, ErrorCode::DimensionMismatch, "compose: gauge dimension");
  OperatorMatrix F = quantize(f, A);
  OperatorMatrix G = quantize(g, A);
  MatrixXcd prod = F.mat * G.mat;
  F.mat.resize(0, 0);
  G.mat.resize(0, 0);
  return dequantize(prod, A, f.grid);
}

std::vector<Cplx> compose_integral_at(const SymbolField& f, const SymbolField& g,
                                      const MagneticField& B,
                                      const std::vector<std::pair<long, long>>& points) {
  require(f.grid.same(g.grid), ErrorCode::GridMismatch, "compose: operands on different grids");
  const SpatialGrid& grid = f.grid;
  require(B.dim == grid.dim, ErrorCode::DimensionMismatch, "compose: field dimension");
  const long P = grid.points();
  require(P <= 512, ErrorCode::ComputeError,
          "integral route is desk-scale (needs n^dim <= 512)");

  const double gmaxf = f.values.cwiseAbs().maxCoeff();
  const double gmaxg = g.values.cwiseAbs().maxCoeff();
  if (gmaxf > 0.0)
    require(shell_max(f) <= 1e-6 * gmaxf, ErrorCode::NonDecaying,
            "left factor does not decay at the grid boundary");
  if (gmaxg > 0.0)
    require(shell_max(g) <= 1e-6 * gmaxg, ErrorCode::NonDecaying,
            "right factor does not decay at the grid boundary");

  const int n = grid.n, dim = grid.dim;
  const double wY = std::pow(grid.h(), dim) * std::pow(grid.xi_step(), dim);
  const double weight = wY * wY / std::pow(kPi, 2 * dim);

  // E1(Ky, Jz) = exp(-2i z.eta), E2(Kz, Jy) = exp(+2i y.zeta)
  MatrixXcd E1(P, P), E2(P, P);
  for (long K = 0; K < P; ++K) {
    VectorXd eta = grid.freq(K);
    for (long J = 0; J < P; ++J) {
      double ze = grid.point(J).dot(eta);
      E1(K, J) = std::polar(1.0, -2.0 * ze);
      E2(K, J) = std::polar(1.0, 2.0 * ze);
    }
  }

  std::vector<Cplx> out(points.size());
  int idxI[8], idxK[8], idxJ[8], idxQ[8];
  MatrixXcd Ft(P, P), Gt(P, P), W(P, P), U, V;
  for (size_t pi = 0; pi < points.size(); ++pi) {
    const long I = points[pi].first, K = points[pi].second;
    require(I >= 0 && I < P && K >= 0 && K < P, ErrorCode::OffLattice,
            "integral route: point index outside the grid");
    grid.unflatten(I, idxI);
    grid.unflatten(K, idxK);
    VectorXd x = grid.point(I);

    // Ft(Jy, Ky) = f(x - y, xi - eta) by periodic index shift
    for (long J = 0; J < P; ++J) {
      grid.unflatten(J, idxJ);
      int sh[8];
      for (int a2 = 0; a2 < dim; ++a2)
        sh[a2] = ((idxI[a2] - idxJ[a2] + n / 2) % n + n) % n;
      long rowf = grid.flatten(sh);
      for (long Q = 0; Q < P; ++Q) {
        grid.unflatten(Q, idxQ);
        int sq[8];
        for (int a2 = 0; a2 < dim; ++a2)
          sq[a2] = ((idxK[a2] - idxQ[a2] + n / 2) % n + n) % n;
        long colf = grid.flatten(sq);
        Ft(J, Q) = f.values(rowf, colf);
        Gt(J, Q) = g.values(rowf, colf);
      }
    }
    // W(Jy, Jz) = omega_B(x, y, z)
#pragma omp parallel for schedule(static)
    for (long Jy = 0; Jy < P; ++Jy) {
      VectorXd y = grid.point(Jy);
      for (long Jz = 0; Jz < P; ++Jz) {
        VectorXd z = grid.point(Jz);
        double G = flux(B, x - y - z, x + y - z, x - y + z);
        W(Jy, Jz) = std::polar(1.0, -G);
      }
    }
    U.noalias() = Ft * E1;      // U(Jy, Jz) = sum_Ky Ft(Jy,Ky) e^{-2i z.eta}
    V.noalias() = Gt * E2;      // V(Jz, Jy) = sum_Kz Gt(Jz,Kz) e^{+2i y.zeta}
    Cplx acc(0.0, 0.0);
    for (long Jy = 0; Jy < P; ++Jy)
      for (long Jz = 0; Jz < P; ++Jz) acc += W(Jy, Jz) * U(Jy, Jz) * V(Jz, Jy);
    out[pi] = acc * weight;
  }
  return out;
}

SymbolField expansion_term(const SymbolField& f, const SymbolField& g, const MagneticField& B,
                           int l, std::vector<ExpansionTermEntry>* table) {
  require(f.grid.same(g.grid), ErrorCode::GridMismatch, "expansion: operands on different grids");
  require(B.dim == f.grid.dim, ErrorCode::DimensionMismatch, "expansion: field dimension");
  require(l >= 0 && l <= 6, ErrorCode::DerivativeOrderExceeded, "expansion supports order <= 6");
  OmegaTable omega = build_omega(f.grid, B, l);
  DerivSource fs(f), gs(g);
  return term_impl(f, g, B, omega, fs, gs, l, table);
}

SymbolField compose_expansion(const SymbolField& f, const SymbolField& g, const MagneticField& B,
                              int order, std::vector<ExpansionTermEntry>* table) {
  require(f.grid.same(g.grid), ErrorCode::GridMismatch, "expansion: operands on different grids");
  require(B.dim == f.grid.dim, ErrorCode::DimensionMismatch, "expansion: field dimension");
  require(order >= 0 && order <= 6, ErrorCode::DerivativeOrderExceeded,
          "expansion supports order <= 6");
  OmegaTable omega = build_omega(f.grid, B, order);
  DerivSource fs(f), gs(g);
  SymbolField acc = term_impl(f, g, B, omega, fs, gs, 0, table);
  for (int l = 1; l <= order; ++l) {
    SymbolField t = term_impl(f, g, B, omega, fs, gs, l, table);
    acc.values += t.values;
  }
  return acc;
}

SymbolField printed_h2(const SymbolField& f, const SymbolField& g, const MagneticField& B) {
  require(f.grid.same(g.grid), ErrorCode::GridMismatch, "operands on different grids");
  const SpatialGrid& grid = f.grid;
  const int dim = grid.dim;
  const long P = grid.points();
  SymbolField out;
  out.grid = grid;
  out.values = MatrixXcd::Zero(P, P);
  const Cplx q = ihalf_pow(2);

  for (int j = 0; j < dim; ++j) {
    SymbolField fxj = derivative(f, j, true), fej = derivative(f, j, false);
    SymbolField gxj = derivative(g, j, true), gej = derivative(g, j, false);
    for (int k = 0; k < dim; ++k) {
      double inv_eps = (j == k) ? 1.0 : 0.5;
      SymbolField fxx = derivative(fxj, k, true);
      SymbolField fee = derivative(fej, k, false);
      SymbolField gxx = derivative(gxj, k, true);
      SymbolField gee = derivative(gej, k, false);
      SymbolField fxe = derivative(fxj, k, false);   // d_{x_j} d_{xi_k} f
      SymbolField gxe = derivative(gej, k, true);    // d_{x_k} d_{xi_j} g
      out.values += (q * inv_eps) *
                    (fxx.values.cwiseProduct(gee.values) + fee.values.cwiseProduct(gxx.values));
      out.values -= q * fxe.values.cwiseProduct(gxe.values);
    }
  }
  // -(i/2) sum_jk B_jk(x) d_{xi_k} f d_{xi_j} g
  std::vector<SymbolField> fe, ge;
  for (int a = 0; a < dim; ++a) {
    fe.push_back(derivative(f, a, false));
    ge.push_back(derivative(g, a, false));
  }
  const Cplx mihalf(0.0, -0.5);
  for (long I = 0; I < P; ++I) {
    Eigen::MatrixXd Bx = B.eval(grid.point(I));
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        if (Bx(j, k) == 0.0) continue;
        out.values.row(I) +=
            (mihalf * Bx(j, k)) * fe[k].values.row(I).cwiseProduct(ge[j].values.row(I));
      }
  }
  return out;
}

SymbolField ad_b(const SymbolField& f, const Gauge& A, const VectorXd& x0, const VectorXd& xi0) {
  require(f.grid.dim == A.dim, ErrorCode::DimensionMismatch, "ad: gauge dimension");
  SymbolField lin = sample(f.grid, linear_form_expr(x0, xi0));
  OperatorMatrix L = quantize(lin, A);
  OperatorMatrix M = quantize(f, A);
  MatrixXcd C = L.mat * M.mat - M.mat * L.mat;
  L.mat.resize(0, 0);
  M.mat.resize(0, 0);
  return dequantize(C, A, f.grid);
}

SymbolField twisted_translation(const SymbolField& f, const Gauge& A, const VectorXd& x0,
                                const VectorXd& xi0, double t) {
  require(f.grid.dim == A.dim, ErrorCode::DimensionMismatch, "translation: gauge dimension");
  OperatorMatrix Em = quantize(exp_linear_form(f.grid, x0, xi0, -t), A);
  OperatorMatrix M = quantize(f, A);
  OperatorMatrix Ep = quantize(exp_linear_form(f.grid, x0, xi0, t), A);
  MatrixXcd C = Em.mat * (M.mat * Ep.mat);
  Em.mat.resize(0, 0);
  M.mat.resize(0, 0);
  Ep.mat.resize(0, 0);
  return dequantize(C, A, f.grid);
}

double beals_bony_seminorm(const SymbolField& f, const Gauge& A,
                           const std::vector<std::pair<VectorXd, VectorXd>>& dirs, double m,
                           double rho) {
  require(f.grid.dim == A.dim, ErrorCode::DimensionMismatch, "seminorm: gauge dimension");
  MatrixXcd C = quantize(f, A).mat;
  for (const auto& [x0, xi0] : dirs) {
    SymbolField lin = sample(f.grid, linear_form_expr(x0, xi0));
    MatrixXcd L = quantize(lin, A).mat;
    MatrixXcd next = L * C - C * L;
    C = std::move(next);
  }
  double mp = -m + rho * double(dirs.size());
  if (mp != 0.0) {
    SymbolField w = sample(f.grid, order_weight_expr(f.grid.dim, mp));
    MatrixXcd S = quantize(w, A).mat;
    C = S * C;
  }
  return operator_norm(C);
}

}  // namespace magweyl
