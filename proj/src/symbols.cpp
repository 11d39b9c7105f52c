#include "magweyl/symbols.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "magweyl/kernels.hpp"

namespace magweyl {

namespace {
const double kInvSqrtPi2 = 2.0 / std::sqrt(kPi);  // erf' prefactor

bool is_const(const ExprPtr& e, double v) {
  return e && e->op == Expr::Op::Const && e->value == v;
}
ExprPtr node(Expr::Op op, ExprPtr a = nullptr, ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
}  // namespace

double Expr::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& xi) const {
  switch (op) {
    case Op::Const: return value;
    case Op::VarX: return x[index];
    case Op::VarXi: return xi[index];
    case Op::Add: return a->eval(x, xi) + b->eval(x, xi);
    case Op::Mul: return a->eval(x, xi) * b->eval(x, xi);
    case Op::Neg: return -a->eval(x, xi);
    case Op::Inv: return 1.0 / a->eval(x, xi);
    case Op::PowInt: {
      double u = a->eval(x, xi), r = 1.0;
      for (int i = 0; i < index; ++i) r *= u;
      return r;
    }
    case Op::PowReal: return std::pow(a->eval(x, xi), value);
    case Op::Exp: return std::exp(a->eval(x, xi));
    case Op::Sin: return std::sin(a->eval(x, xi));
    case Op::Cos: return std::cos(a->eval(x, xi));
    case Op::Sqrt: return std::sqrt(a->eval(x, xi));
    case Op::Erf: return std::erf(a->eval(x, xi));
  }
  return 0.0;
}

ExprPtr econst(double v) {
  auto e = std::make_shared<Expr>();
  e->op = Expr::Op::Const;
  e->value = v;
  return e;
}
ExprPtr evar_x(int axis) {
  auto e = std::make_shared<Expr>();
  e->op = Expr::Op::VarX;
  e->index = axis;
  return e;
}
ExprPtr evar_xi(int axis) {
  auto e = std::make_shared<Expr>();
  e->op = Expr::Op::VarXi;
  e->index = axis;
  return e;
}

ExprPtr eadd(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->op == Expr::Op::Const && b->op == Expr::Op::Const) return econst(a->value + b->value);
  return node(Expr::Op::Add, std::move(a), std::move(b));
}
ExprPtr eneg(ExprPtr a) {
  if (a->op == Expr::Op::Const) return econst(-a->value);
  if (a->op == Expr::Op::Neg) return a->a;
  return node(Expr::Op::Neg, std::move(a));
}
ExprPtr esub(ExprPtr a, ExprPtr b) { return eadd(std::move(a), eneg(std::move(b))); }
ExprPtr emul(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return econst(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->op == Expr::Op::Const && b->op == Expr::Op::Const) return econst(a->value * b->value);
  return node(Expr::Op::Mul, std::move(a), std::move(b));
}
ExprPtr ediv(ExprPtr a, ExprPtr b) {
  if (is_const(b, 1.0)) return a;
  if (b->op == Expr::Op::Const) return emul(std::move(a), econst(1.0 / b->value));
  return emul(std::move(a), node(Expr::Op::Inv, std::move(b)));
}
ExprPtr epow(ExprPtr a, int k) {
  require(k >= 1, ErrorCode::ConfigError, "integer power must be >= 1");
  if (k == 1) return a;
  if (a->op == Expr::Op::Const) return econst(std::pow(a->value, k));
  auto e = node(Expr::Op::PowInt, std::move(a));
  auto* m = const_cast<Expr*>(e.get());
  m->index = k;
  return e;
}
ExprPtr epow(ExprPtr a, double p) {
  if (p == double(int(p)) && p >= 1.0 && p < 64.0) return epow(std::move(a), int(p));
  auto e = node(Expr::Op::PowReal, std::move(a));
  auto* m = const_cast<Expr*>(e.get());
  m->value = p;
  return e;
}
ExprPtr eexp(ExprPtr a) { return node(Expr::Op::Exp, std::move(a)); }
ExprPtr esin(ExprPtr a) { return node(Expr::Op::Sin, std::move(a)); }
ExprPtr ecos(ExprPtr a) { return node(Expr::Op::Cos, std::move(a)); }
ExprPtr esqrt(ExprPtr a) { return node(Expr::Op::Sqrt, std::move(a)); }
ExprPtr eerf(ExprPtr a) { return node(Expr::Op::Erf, std::move(a)); }

ExprPtr differentiate(const ExprPtr& e, int axis, bool wrt_x) {
  using Op = Expr::Op;
  switch (e->op) {
    case Op::Const: return econst(0.0);
    case Op::VarX: return econst(wrt_x && e->index == axis ? 1.0 : 0.0);
    case Op::VarXi: return econst(!wrt_x && e->index == axis ? 1.0 : 0.0);
    case Op::Add: return eadd(differentiate(e->a, axis, wrt_x), differentiate(e->b, axis, wrt_x));
    case Op::Mul:
      return eadd(emul(differentiate(e->a, axis, wrt_x), e->b),
                  emul(e->a, differentiate(e->b, axis, wrt_x)));
    case Op::Neg: return eneg(differentiate(e->a, axis, wrt_x));
    case Op::Inv:
      return eneg(ediv(differentiate(e->a, axis, wrt_x), emul(e->a, e->a)));
    case Op::PowInt:
      return emul(emul(econst(e->index), epow(e->a, std::max(1, e->index - 1))),
                  differentiate(e->a, axis, wrt_x));
    case Op::PowReal:
      return emul(emul(econst(e->value), epow(e->a, e->value - 1.0)),
                  differentiate(e->a, axis, wrt_x));
    case Op::Exp: return emul(eexp(e->a), differentiate(e->a, axis, wrt_x));
    case Op::Sin: return emul(ecos(e->a), differentiate(e->a, axis, wrt_x));
    case Op::Cos: return eneg(emul(esin(e->a), differentiate(e->a, axis, wrt_x)));
    case Op::Sqrt:
      return ediv(differentiate(e->a, axis, wrt_x), emul(econst(2.0), esqrt(e->a)));
    case Op::Erf:
      return emul(emul(econst(kInvSqrtPi2), eexp(eneg(emul(e->a, e->a)))),
                  differentiate(e->a, axis, wrt_x));
  }
  return econst(0.0);
}

// ---- parser ----------------------------------------------------------------

namespace {
struct Parser {
  const std::string& s;
  size_t pos = 0;
  int dim;

  void skip() { while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos; }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) { ++pos; return true; }
    return false;
  }
  char peek() {
    skip();
    return pos < s.size() ? s[pos] : '\0';
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+')) e = eadd(e, term());
      else if (eat('-')) e = esub(e, term());
      else return e;
    }
  }
  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (eat('*')) e = emul(e, factor());
      else if (eat('/')) e = ediv(e, factor());
      else return e;
    }
  }
  ExprPtr factor() {
    // unary minus binds looser than '^': -x^2 is -(x^2)
    if (eat('-')) return eneg(factor());
    if (eat('+')) return factor();
    ExprPtr base = primary();
    if (eat('^')) {
      ExprPtr ex = factor();  // right associative; sign allowed in the exponent
      require(ex->op == Expr::Op::Const, ErrorCode::ConfigError, "exponent must be a constant");
      return epow(base, ex->value);
    }
    return base;
  }
  ExprPtr primary() {
    skip();
    require(pos < s.size(), ErrorCode::ConfigError, "unexpected end of expression");
    char c = s[pos];
    if (std::isdigit((unsigned char)c) || c == '.') return number();
    if (std::isalpha((unsigned char)c)) return ident();
    if (eat('(')) {
      ExprPtr e = expr();
      require(eat(')'), ErrorCode::ConfigError, "missing ')'");
      return e;
    }
    fail(ErrorCode::ConfigError, std::string("unexpected character '") + c + "' in expression");
  }
  ExprPtr number() {
    size_t end;
    double v = std::stod(s.substr(pos), &end);
    pos += end;
    return econst(v);
  }
  ExprPtr ident() {
    size_t start = pos;
    while (pos < s.size() && (std::isalnum((unsigned char)s[pos]) || s[pos] == '_')) ++pos;
    std::string name = s.substr(start, pos - start);
    auto var = [&](bool isx, int axis) {
      require(axis >= 0 && axis < dim, ErrorCode::ConfigError, "variable axis out of range: " + name);
      return isx ? evar_x(axis) : evar_xi(axis);
    };
    if (name == "x") return var(true, 0);
    if (name == "xi") return var(false, 0);
    if (name.size() == 2 && name[0] == 'x' && std::isdigit((unsigned char)name[1]))
      return var(true, name[1] - '1');
    if (name.size() == 3 && name.substr(0, 2) == "xi" && std::isdigit((unsigned char)name[2]))
      return var(false, name[2] - '1');
    if (name == "pi") return econst(kPi);
    // functions
    require(eat('('), ErrorCode::ConfigError, "expected '(' after " + name);
    ExprPtr a1 = expr();
    ExprPtr a2;
    if (eat(',')) a2 = expr();
    require(eat(')'), ErrorCode::ConfigError, "missing ')' after " + name + " args");
    if (name == "exp") return eexp(a1);
    if (name == "sin") return esin(a1);
    if (name == "cos") return ecos(a1);
    if (name == "sqrt") return esqrt(a1);
    if (name == "erf") return eerf(a1);
    if (name == "pow") {
      require(a2 && a2->op == Expr::Op::Const, ErrorCode::ConfigError, "pow needs constant exponent");
      return epow(a1, a2->value);
    }
    fail(ErrorCode::ConfigError, "unknown function: " + name);
  }
};
}  // namespace

ExprPtr parse_expr(const std::string& text, int dim) {
  Parser p{text, 0, dim};
  ExprPtr e = p.expr();
  p.skip();
  require(p.pos == text.size(), ErrorCode::ConfigError,
          "trailing characters in expression at offset " + std::to_string(p.pos));
  return e;
}

// ---- sampling ---------------------------------------------------------------

SymbolField sample(const SpatialGrid& g, const ExprPtr& re, const ExprPtr& im) {
  SymbolField f;
  f.grid = g;
  f.re = re;
  f.im = im;
  const long M = g.points();
  f.values.resize(M, M);
  // precompute coordinates
  std::vector<Eigen::VectorXd> xs(M), xis(M);
  for (long I = 0; I < M; ++I) xs[I] = g.point(I);
  for (long K = 0; K < M; ++K) xis[K] = g.freq(K);
  bool bad = false;
#pragma omp parallel for schedule(static) reduction(|| : bad)
  for (long K = 0; K < M; ++K)
    for (long I = 0; I < M; ++I) {
      double vr = re ? re->eval(xs[I], xis[K]) : 0.0;
      double vi = im ? im->eval(xs[I], xis[K]) : 0.0;
      if (!std::isfinite(vr) || !std::isfinite(vi)) bad = true;
      f.values(I, K) = {vr, vi};
    }
  require(!bad, ErrorCode::EvaluationOverflow, "symbol evaluation produced non-finite values");
  return f;
}

SymbolField constant_symbol(const SpatialGrid& g, std::complex<double> c) {
  SymbolField f;
  f.grid = g;
  f.re = econst(c.real());
  f.im = c.imag() != 0.0 ? econst(c.imag()) : nullptr;
  f.values = Eigen::MatrixXcd::Constant(g.points(), g.points(), c);
  return f;
}

namespace {
void check_same_grid(const SymbolField& f, const SymbolField& g) {
  require(f.grid.same(g.grid), ErrorCode::GridMismatch, "symbol grids differ");
}
}  // namespace

SymbolField add(const SymbolField& f, const SymbolField& g) {
  check_same_grid(f, g);
  SymbolField out;
  out.grid = f.grid;
  out.values = f.values + g.values;
  if (f.has_descriptor() && g.has_descriptor()) {
    out.re = eadd(f.re ? f.re : econst(0), g.re ? g.re : econst(0));
    if (f.im || g.im) out.im = eadd(f.im ? f.im : econst(0), g.im ? g.im : econst(0));
  }
  return out;
}

SymbolField sub(const SymbolField& f, const SymbolField& g) {
  SymbolField mg = scale(g, -1.0);
  return add(f, mg);
}

SymbolField mul(const SymbolField& f, const SymbolField& g) {
  check_same_grid(f, g);
  SymbolField out;
  out.grid = f.grid;
  out.values = f.values.cwiseProduct(g.values);
  if (f.has_descriptor() && g.has_descriptor()) {
    ExprPtr fr = f.re ? f.re : econst(0), fi = f.im, gr = g.re ? g.re : econst(0), gi = g.im;
    out.re = emul(fr, gr);
    if (fi && gi) out.re = esub(out.re, emul(fi, gi));
    ExprPtr im;
    if (fi) im = emul(fi, gr);
    if (gi) im = im ? eadd(im, emul(fr, gi)) : emul(fr, gi);
    out.im = im;
  }
  return out;
}

SymbolField scale(const SymbolField& f, std::complex<double> c) {
  SymbolField out;
  out.grid = f.grid;
  out.values = f.values * c;
  if (f.has_descriptor() && c.imag() == 0.0) {
    if (f.re) out.re = emul(econst(c.real()), f.re);
    if (f.im) out.im = emul(econst(c.real()), f.im);
  } else if (f.has_descriptor()) {
    ExprPtr fr = f.re ? f.re : econst(0), fi = f.im ? f.im : econst(0);
    out.re = esub(emul(econst(c.real()), fr), emul(econst(c.imag()), fi));
    out.im = eadd(emul(econst(c.imag()), fr), emul(econst(c.real()), fi));
  }
  return out;
}

SymbolField fd_derivative(const SymbolField& f, int axis, bool wrt_x) {
  const auto& g = f.grid;
  require(axis >= 0 && axis < g.dim, ErrorCode::DimensionMismatch, "derivative axis");
  require(g.n >= 6, ErrorCode::GridTooCoarse, "4th-order stencil needs n >= 6");
  const double step = wrt_x ? g.h() : g.xi_step();
  const long M = g.points();
  SymbolField out;
  out.grid = g;
  out.values.resize(M, M);
  // neighbor index along the chosen axis with periodic wrap
  const long S = [&] {
    long s = 1;
    for (int a = g.dim - 1 - axis; a > 0; --a) s *= g.n;
    return s;
  }();
  auto shift = [&](long F, int d) {
    // F = p*(n*S) + t*S + q; replace t by (t+d) mod n
    const long block = g.n * S;
    const long p = F / block, rem = F % block;
    const long t = rem / S, q = rem % S;
    long t2 = (t + d) % g.n;
    if (t2 < 0) t2 += g.n;
    return p * block + t2 * S + q;
  };
  if (wrt_x) {
#pragma omp parallel for schedule(static)
    for (long K = 0; K < M; ++K)
      for (long I = 0; I < M; ++I)
        out.values(I, K) = (-f.values(shift(I, 2), K) + 8.0 * f.values(shift(I, 1), K) -
                            8.0 * f.values(shift(I, -1), K) + f.values(shift(I, -2), K)) /
                           (12.0 * step);
  } else {
#pragma omp parallel for schedule(static)
    for (long K = 0; K < M; ++K) {
      const long Kp2 = shift(K, 2), Kp1 = shift(K, 1), Km1 = shift(K, -1), Km2 = shift(K, -2);
      for (long I = 0; I < M; ++I)
        out.values(I, K) = (-f.values(I, Kp2) + 8.0 * f.values(I, Kp1) -
                            8.0 * f.values(I, Km1) + f.values(I, Km2)) /
                           (12.0 * step);
    }
  }
  return out;
}

SymbolField derivative(const SymbolField& f, int axis, bool wrt_x) {
  if (f.has_descriptor()) {
    ExprPtr dre = f.re ? differentiate(f.re, axis, wrt_x) : nullptr;
    ExprPtr dim_ = f.im ? differentiate(f.im, axis, wrt_x) : nullptr;
    return sample(f.grid, dre ? dre : econst(0.0), dim_);
  }
  return fd_derivative(f, axis, wrt_x);
}

// ---- named symbols ----------------------------------------------------------

ExprPtr kinetic_expr(int dim) {
  ExprPtr e = econst(0.0);
  for (int a = 0; a < dim; ++a) e = eadd(e, epow(evar_xi(a), 2));
  return e;
}

ExprPtr order_weight_expr(int dim, double m) {
  ExprPtr q = eadd(econst(1.0), kinetic_expr(dim));
  if (m == 0.0) return econst(1.0);
  return epow(q, m / 2.0);
}

ExprPtr shifted_kinetic_expr(int dim, double a) {
  return eadd(econst(a), kinetic_expr(dim));
}

ExprPtr plateau_expr(int axis, bool wrt_x, double extent) {
  const double a = extent / 2.0, s = extent / 12.0;
  ExprPtr u = wrt_x ? evar_x(axis) : evar_xi(axis);
  ExprPtr up = ediv(eadd(u, econst(a)), econst(s));
  ExprPtr um = ediv(esub(u, econst(a)), econst(s));
  return emul(econst(0.5), esub(eerf(up), eerf(um)));
}

ExprPtr window_x_expr(const SpatialGrid& g) {
  ExprPtr w = econst(1.0);
  for (int a = 0; a < g.dim; ++a) w = emul(w, plateau_expr(a, true, g.length / 2.0));
  return w;
}

ExprPtr window_xi_expr(const SpatialGrid& g) {
  ExprPtr w = econst(1.0);
  for (int a = 0; a < g.dim; ++a) w = emul(w, plateau_expr(a, false, g.xi_max()));
  return w;
}

ExprPtr linear_form_expr(const Eigen::VectorXd& x0, const Eigen::VectorXd& xi0) {
  ExprPtr e = econst(0.0);
  for (int a = 0; a < x0.size(); ++a) {
    e = eadd(e, emul(econst(xi0[a]), evar_x(a)));
    e = esub(e, emul(econst(x0[a]), evar_xi(a)));
  }
  return e;
}

SymbolField exp_linear_form(const SpatialGrid& g, const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& xi0, double t) {
  ExprPtr l = linear_form_expr(x0, xi0);
  ExprPtr arg = emul(econst(t), l);
  // exp(-i*t*l) = cos(t*l) - i*sin(t*l)
  return sample(g, ecos(arg), eneg(esin(arg)));
}

// ---- seminorm ----------------------------------------------------------------

double seminorm(const SymbolField& f, double m, double rho, double delta, int order) {
  require(order >= 0 && order <= 4, ErrorCode::DerivativeOrderExceeded,
          "seminorm derivative order capped at 4");
  const auto& g = f.grid;
  const long M = g.points();
  // weight (1+|xi|^2)^(-(m - rho|alpha| + delta|beta|)/2) per column
  Eigen::VectorXd xin2(M);
  for (long K = 0; K < M; ++K) xin2[K] = 1.0 + g.freq(K).squaredNorm();

  double best = 0.0;
  // enumerate beta (x) and alpha (xi) multi-indices by BFS from the sampled field
  struct Item {
    SymbolField val;
    int ax = 0, axi = 0;  // |beta|, |alpha|
    std::vector<int> hist;  // applied derivative ops, encoded axis + dim*wrt
  };
  std::vector<Item> layer;
  {
    Item base;
    base.val = f;
    base.val.re = nullptr;  // seminorms are defined on the sampled field: FD only
    base.val.im = nullptr;
    layer.push_back(std::move(base));
  }
  auto measure = [&](const Item& it) {
    const double expo = -(m - rho * it.axi + delta * it.ax) / 2.0;
    double s = 0.0;
    for (long K = 0; K < M; ++K) {
      const double w = std::pow(xin2[K], expo);
      s = std::max(s, it.val.values.col(K).cwiseAbs().maxCoeff() * w);
    }
    return s;
  };
  best = std::max(best, measure(layer[0]));
  for (int level = 1; level <= order; ++level) {
    std::vector<Item> next;
    for (const auto& it : layer) {
      // only extend with ops >= the last one (canonical ordering avoids duplicates)
      int start = it.hist.empty() ? 0 : it.hist.back();
      for (int opcode = start; opcode < 2 * g.dim; ++opcode) {
        const bool wrt_x = opcode >= g.dim;
        const int axis = opcode % g.dim;
        Item nx;
        nx.val = fd_derivative(it.val, axis, wrt_x);
        nx.ax = it.ax + (wrt_x ? 1 : 0);
        nx.axi = it.axi + (wrt_x ? 0 : 1);
        nx.hist = it.hist;
        nx.hist.push_back(opcode);
        best = std::max(best, measure(nx));
        next.push_back(std::move(nx));
      }
    }
    layer = std::move(next);
  }
  return best;
}

// ---- ellipticity ---------------------------------------------------------------

EllipticityMargin ellipticity_margin(const SymbolField& f, double m) {
  const auto& g = f.grid;
  const long M = g.points();
  // per-column min over x of |f| / <xi>^m and column radius
  std::vector<std::pair<double, double>> rad_val(M);
  for (long K = 0; K < M; ++K) {
    const Eigen::VectorXd xi = g.freq(K);
    const double w = std::pow(1.0 + xi.squaredNorm(), m / 2.0);
    rad_val[K] = {xi.norm(), f.values.col(K).cwiseAbs().minCoeff() / w};
  }
  std::sort(rad_val.begin(), rad_val.end());
  // suffix minimum: C(R) for R = radius of entry i is min over entries >= i
  std::vector<double> suffix(M);
  double run = std::numeric_limits<double>::infinity();
  for (long i = M - 1; i >= 0; --i) {
    run = std::min(run, rad_val[i].second);
    suffix[i] = run;
  }
  const long floor_count = std::max<long>(1, M / 10);
  const long last_admissible = M - floor_count;  // keep >= 10% of dual points
  double ctop = suffix[last_admissible];
  EllipticityMargin out;
  if (ctop <= 1e-14) return out;  // no positive margin at any admissible radius
  const double target = 0.5 * ctop;
  for (long i = 0; i <= last_admissible; ++i) {
    if (suffix[i] >= target) {
      out.ok = true;
      out.radius = rad_val[i].first;
      out.constant = suffix[i];
      break;
    }
  }
  return out;
}

// ---- comparison windows ----------------------------------------------------------

Eigen::ArrayXd comparison_mask_x(const SpatialGrid& g, double factor) {
  const long M = g.points();
  Eigen::ArrayXd m(M);
  const double bound = (g.length / 2.0) / factor;
  for (long I = 0; I < M; ++I)
    m[I] = (g.point(I).cwiseAbs().maxCoeff() <= bound) ? 1.0 : 0.0;
  return m;
}

Eigen::ArrayXd comparison_mask_xi(const SpatialGrid& g, double factor) {
  const long M = g.points();
  Eigen::ArrayXd m(M);
  const double bound = g.xi_max() / factor;
  for (long K = 0; K < M; ++K)
    m[K] = (g.freq(K).cwiseAbs().maxCoeff() <= bound) ? 1.0 : 0.0;
  return m;
}

double window_residual(const SymbolField& f, const SymbolField& g, double factor) {
  require(f.grid.same(g.grid), ErrorCode::GridMismatch, "window residual grids differ");
  const Eigen::ArrayXd mx = comparison_mask_x(f.grid, factor);
  const Eigen::ArrayXd mk = comparison_mask_xi(f.grid, factor);
  double r = 0.0;
  for (long K = 0; K < f.values.cols(); ++K) {
    if (mk[K] == 0.0) continue;
    for (long I = 0; I < f.values.rows(); ++I)
      if (mx[I] != 0.0) r = std::max(r, std::abs(f.values(I, K) - g.values(I, K)));
  }
  return r;
}

double window_residual_const(const SymbolField& f, std::complex<double> c, double factor) {
  const Eigen::ArrayXd mx = comparison_mask_x(f.grid, factor);
  const Eigen::ArrayXd mk = comparison_mask_xi(f.grid, factor);
  double r = 0.0;
  for (long K = 0; K < f.values.cols(); ++K) {
    if (mk[K] == 0.0) continue;
    for (long I = 0; I < f.values.rows(); ++I)
      if (mx[I] != 0.0) r = std::max(r, std::abs(f.values(I, K) - c));
  }
  return r;
}

}  // namespace magweyl
