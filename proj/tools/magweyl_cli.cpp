// Batch driver: parse a JSON experiment config, dispatch to the library, and
// emit CSV/JSON/binary artifacts. One command per process; all output is
// written at the end, and every file header names the gauge, grid, config
// hash, and seed so identical configs reproduce byte-identical payloads.
#include <cstdio>
#include <filesystem>
#include <random>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "magweyl/field.hpp"
#include "magweyl/funcalc.hpp"
#include "magweyl/io.hpp"
#include "magweyl/moyal.hpp"
#include "magweyl/quantize.hpp"
#include "magweyl/spectral.hpp"
#include "magweyl/symbols.hpp"
#include "magweyl/verify.hpp"

using namespace magweyl;
using nlohmann::json;
using Cplx = std::complex<double>;

namespace {

struct Setup {
  json cfg;
  std::string cfg_hash;
  std::string out_dir = ".";
  unsigned long long seed = 42;
  SpatialGrid grid;
  MagneticField field;
  Gauge gauge;
  bool has_grid = false;
};

[[noreturn]] void bail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

json need(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) bail(ErrorCode::ConfigError, where + ": missing \"" + key + "\"");
  return j.at(key);
}

Eigen::MatrixXd parse_matrix(const json& j, int dim, const std::string& where) {
  if (!j.is_array() || int(j.size()) != dim)
    bail(ErrorCode::ConfigError, where + ": expected a " + std::to_string(dim) + "-row matrix");
  Eigen::MatrixXd M(dim, dim);
  for (int r = 0; r < dim; ++r) {
    if (int(j[r].size()) != dim) bail(ErrorCode::ConfigError, where + ": ragged matrix");
    for (int c = 0; c < dim; ++c) M(r, c) = j[r][c].get<double>();
  }
  return M;
}

MagneticField parse_field(const json& cfg, int dim) {
  if (!cfg.contains("field")) return make_constant_field(dim, Eigen::MatrixXd::Zero(dim, dim));
  const json& f = cfg.at("field");
  std::string type = need(f, "type", "field").get<std::string>();
  if (type == "zero") return make_constant_field(dim, Eigen::MatrixXd::Zero(dim, dim));
  if (type == "constant")
    return make_constant_field(dim, parse_matrix(need(f, "B", "field"), dim, "field.B"));
  if (type == "scalar") {
    if (dim != 2) bail(ErrorCode::ConfigError, "field.scalar needs a 2D grid");
    return make_scalar_field(need(f, "b", "field").get<double>());
  }
  if (type == "scalar_expr") {
    if (dim != 2) bail(ErrorCode::ConfigError, "field.scalar_expr needs a 2D grid");
    ExprPtr b12 = parse_expr(need(f, "b12", "field").get<std::string>(), 2);
    return make_scalar_field([b12](const Eigen::VectorXd& x) {
      Eigen::VectorXd xi = Eigen::VectorXd::Zero(2);
      return b12->eval(x, xi);
    });
  }
  bail(ErrorCode::ConfigError, "field.type \"" + type + "\" not recognized");
}

Gauge parse_gauge(const json& cfg, const MagneticField& B, int dim) {
  Gauge A = make_zero_gauge(dim);
  if (cfg.contains("gauge")) {
    const json& g = cfg.at("gauge");
    std::string type = need(g, "type", "gauge").get<std::string>();
    if (type == "zero") {
      A = make_zero_gauge(dim);
    } else if (type == "landau") {
      if (dim != 2) bail(ErrorCode::ConfigError, "gauge.landau needs a 2D grid");
      A = landau_gauge(need(g, "b", "gauge").get<double>());
    } else if (type == "symmetric") {
      A = symmetric_gauge(B);
    } else if (type == "transversal") {
      A = transversal_gauge(B);
    } else if (type == "linear") {
      A = make_linear_gauge(dim, parse_matrix(need(g, "M", "gauge"), dim, "gauge.M"),
                            need(g, "tag", "gauge").get<std::string>());
    } else {
      bail(ErrorCode::ConfigError, "gauge.type \"" + type + "\" not recognized");
    }
    if (g.contains("phi")) {
      ExprPtr phi = parse_expr(g.at("phi").get<std::string>(), dim);
      std::string tag = g.contains("phi_tag") ? g.at("phi_tag").get<std::string>() : "phi";
      A = gauge_transform(
          A,
          [phi, dim](const Eigen::VectorXd& x) {
            Eigen::VectorXd xi = Eigen::VectorXd::Zero(dim);
            return phi->eval(x, xi);
          },
          tag);
    }
  }
  return A;
}

SymbolField symbol_at(const Setup& s, size_t k) {
  const json& arr = need(s.cfg, "symbols", "config");
  if (!arr.is_array() || arr.size() <= k)
    bail(ErrorCode::ConfigError, "config: needs symbols[" + std::to_string(k) + "]");
  return sample(s.grid, parse_expr(arr[k].get<std::string>(), s.grid.dim));
}

Setup load(const std::string& cfg_path, const std::string& out_dir, unsigned long long seed,
           bool need_grid) {
  Setup s;
  s.out_dir = out_dir;
  s.seed = seed;
  if (!cfg_path.empty()) {
    std::ifstream is(cfg_path);
    if (!is) bail(ErrorCode::ConfigError, "cannot open config " + cfg_path);
    std::stringstream ss;
    ss << is.rdbuf();
    std::string raw = ss.str();
    s.cfg_hash = io::sha1_hex(raw);
    try {
      s.cfg = json::parse(raw);
    } catch (const std::exception& e) {
      bail(ErrorCode::ConfigError, std::string("config parse: ") + e.what());
    }
  } else {
    s.cfg = json::object();
    s.cfg_hash = io::sha1_hex("");
  }
  if (s.cfg.contains("seed") && seed == 42) s.seed = s.cfg.at("seed").get<unsigned long long>();
  if (s.cfg.contains("grid")) {
    const json& g = s.cfg.at("grid");
    s.grid = make_grid(need(g, "dim", "grid").get<int>(),
                       need(g, "points_per_dim", "grid").get<int>(),
                       need(g, "box_length", "grid").get<double>());
    s.has_grid = true;
    s.field = parse_field(s.cfg, s.grid.dim);
    s.gauge = parse_gauge(s.cfg, s.field, s.grid.dim);
  } else if (need_grid) {
    bail(ErrorCode::ConfigError, "config: missing \"grid\"");
  }
  std::filesystem::create_directories(s.out_dir);
  return s;
}

std::string header(const Setup& s) {
  std::ostringstream os;
  if (s.has_grid)
    os << "gauge=" << s.gauge.tag << " grid=" << s.grid.dim << "x" << s.grid.n
       << " L=" << io::fmt17(s.grid.length) << " ";
  os << "cfg=" << s.cfg_hash << " seed=" << s.seed;
  return os.str();
}

std::string opath(const Setup& s, const std::string& name) {
  return (std::filesystem::path(s.out_dir) / name).string();
}

void write_json(const Setup& s, const std::string& name, json j) {
  j["config_sha1"] = s.cfg_hash;
  j["seed"] = s.seed;
  std::ofstream os(opath(s, name), std::ios::trunc);
  if (!os) bail(ErrorCode::ConfigError, "cannot open " + opath(s, name) + " for writing");
  os << j.dump(2) << "\n";
}

int cmd_field_check(const Setup& s) {
  double closed = closedness_residual(s.field, s.grid.length / 2.0, 5);
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> U(-s.grid.length / 4.0, s.grid.length / 4.0);
  double coc = 0.0, stokes = 0.0;
  for (int t = 0; t < 64; ++t) {
    Eigen::VectorXd q(s.grid.dim), x(s.grid.dim), y(s.grid.dim), z(s.grid.dim);
    for (auto* v : {&q, &x, &y, &z})
      for (int a = 0; a < s.grid.dim; ++a) (*v)[a] = U(rng);
    coc = std::max(coc, cocycle_identity_residual(s.field, q, x, y, z));
    stokes = std::max(stokes, stokes_residual(s.field, s.gauge, q, x, y));
  }
  json j = {{"closedness", closed}, {"cocycle_identity", coc}, {"stokes", stokes}};
  write_json(s, "field_check.json", j);
  std::printf("field-check: closedness %.3e cocycle %.3e stokes %.3e\n", closed, coc, stokes);
  return 0;
}

int cmd_quantize(const Setup& s) {
  SymbolField f = symbol_at(s, 0);
  OperatorMatrix K = quantize(f, s.gauge);
  io::write_matrix(opath(s, "operator.mwk"), K);
  io::write_symbol_csv(opath(s, "symbol.csv"), f, header(s));
  std::printf("quantize: %ldx%ld matrix, herm residual %.3e\n", long(K.mat.rows()),
              long(K.mat.cols()), K.herm_residual);
  return 0;
}

int cmd_compose(const Setup& s, const std::string& method, int order) {
  SymbolField f = symbol_at(s, 0), g = symbol_at(s, 1);
  SymbolField fg = [&] {
    if (method == "operator") return compose_operator_route(f, g, s.gauge);
    if (method == "expansion") return compose_expansion(f, g, s.field, order);
    if (method == "integral") {
      std::vector<std::pair<long, long>> pts;
      long P = s.grid.points();
      for (long i = 0; i < P; ++i)
        for (long k = 0; k < P; ++k) pts.emplace_back(i, k);
      auto vals = compose_integral_at(f, g, s.field, pts);
      SymbolField out = f;
      out.re = nullptr;
      out.im = nullptr;
      for (long i = 0; i < P; ++i)
        for (long k = 0; k < P; ++k) out.values(i, k) = vals[size_t(i) * P + k];
      return out;
    }
    bail(ErrorCode::ConfigError, "--method must be operator|integral|expansion");
  }();
  io::write_symbol_csv(opath(s, "compose.csv"), fg, header(s));
  if (method == "operator") {
    SymbolField comm = sub(fg, compose_operator_route(g, f, s.gauge));
    io::write_symbol_csv(opath(s, "commutator.csv"), comm, header(s));
  }
  std::printf("compose (%s): sup |f#g| = %.6e\n", method.c_str(),
              fg.values.cwiseAbs().maxCoeff());
  return 0;
}

int cmd_expand(const Setup& s, int order) {
  SymbolField f = symbol_at(s, 0), g = symbol_at(s, 1);
  std::vector<ExpansionTermEntry> table;
  SymbolField sum = compose_expansion(f, g, s.field, order, &table);
  io::write_expansion_csv(opath(s, "expansion.csv"), table, header(s));
  io::write_symbol_csv(opath(s, "expansion_sum.csv"), sum, header(s));
  std::printf("expand: %zu terms through order %d\n", table.size(), order);
  return 0;
}

int cmd_spectrum(const Setup& s) {
  SymbolField f = symbol_at(s, 0);
  OperatorMatrix K = quantize(f, s.gauge);
  SpectralReport rep = eigensolve(K);
  io::write_spectral_csv(opath(s, "spectrum.csv"), rep, header(s));
  std::printf("spectrum: %ld states in [%.6g, %.6g], herm %.3e\n", long(rep.eigenvalues.size()),
              rep.eigenvalues.minCoeff(), rep.eigenvalues.maxCoeff(), rep.herm_residual);
  return 0;
}

int cmd_funcalc(const Setup& s) {
  SymbolField f = symbol_at(s, 0);
  const json& fc = need(s.cfg, "funcalc", "config");
  std::string kind = need(fc, "kind", "funcalc").get<std::string>();
  SymbolField out = f;
  if (kind == "bump") {
    ScalarProfile phi = bump_profile(need(fc, "center", "funcalc").get<double>(),
                                     need(fc, "width", "funcalc").get<double>());
    QuasiAnalyticExtension ext = make_extension(phi, 3);
    out = hs_function(ext, f, s.gauge);
  } else if (kind == "fractional") {
    double p = need(fc, "s", "funcalc").get<double>();
    double t0 = fc.contains("t0") ? fc.at("t0").get<double>() : default_shift(f, s.gauge);
    out = fractional_power(f, p, t0, s.gauge);
  } else {
    bail(ErrorCode::ConfigError, "funcalc.kind must be bump|fractional");
  }
  io::write_symbol_csv(opath(s, "funcalc.csv"), out, header(s));
  std::printf("funcalc (%s): sup |Phi(f)| = %.6e\n", kind.c_str(),
              out.values.cwiseAbs().maxCoeff());
  return 0;
}

int cmd_invert(const Setup& s) {
  SymbolField f = symbol_at(s, 0);
  SymbolField inv = [&] {
    if (s.cfg.contains("z")) {
      const json& z = s.cfg.at("z");
      return resolvent_symbol(f, {z[0].get<double>(), z[1].get<double>()}, s.gauge);
    }
    return sharp_inverse(f, s.gauge);
  }();
  SymbolField prod = compose_operator_route(f, inv, s.gauge);
  double resid;
  if (s.cfg.contains("z")) {
    const json& z = s.cfg.at("z");
    SymbolField shifted = sub(prod, scale(inv, Cplx(z[0].get<double>(), z[1].get<double>())));
    resid = (shifted.values.array() - 1.0).abs().maxCoeff();
  } else {
    resid = (prod.values.array() - 1.0).abs().maxCoeff();
  }
  io::write_symbol_csv(opath(s, "inverse.csv"), inv, header(s));
  json j = {{"residual", resid}};
  write_json(s, "invert_report.json", j);
  std::printf("invert: sharp residual %.3e\n", resid);
  return 0;
}

int cmd_lap(const Setup& s) {
  SymbolField f = symbol_at(s, 0);
  const json& lp = need(s.cfg, "lap", "config");
  double lambda = need(lp, "lambda", "lap").get<double>();
  std::vector<double> eps = need(lp, "eps", "lap").get<std::vector<double>>();
  double gamma = lp.contains("gamma") ? lp.at("gamma").get<double>() : 1.0;
  double m = lp.contains("m") ? lp.at("m").get<double>() : 2.0;
  auto norms = lap_probe(f, s.gauge, lambda, eps, gamma, m);
  json j = {{"lambda", lambda}, {"eps", eps}, {"norms", norms}};
  if (norms.size() >= 2) j["last_ratio"] = norms.back() / norms[norms.size() - 2];
  write_json(s, "lap_report.json", j);
  std::printf("lap: %zu weighted norms, last %.6e\n", norms.size(), norms.back());
  return 0;
}

int cmd_essspec(const Setup& s) {
  const json& es = need(s.cfg, "essspec", "config");
  std::string mode = need(es, "mode", "essspec").get<std::string>();
  if (mode == "decaying") {
    PerturbationSplit split;
    split.f0 = parse_expr(need(es, "f0", "essspec").get<std::string>(), s.grid.dim);
    if (es.contains("fS")) split.fS = parse_expr(es.at("fS").get<std::string>(), s.grid.dim);
    if (es.contains("fL")) split.fL = parse_expr(es.at("fL").get<std::string>(), s.grid.dim);
    EssReport rep = ess_spectrum_decaying(split, s.field, s.gauge, s.grid);
    std::ofstream os(opath(s, "ess_report.json"), std::ios::trunc);
    os << io::ess_report_json(rep) << "\n";
    std::printf("essspec (decaying): hausdorff %.4g, %s\n", rep.hausdorff,
                rep.pass ? "pass" : "fail");
    return 0;
  }
  if (mode == "anisotropic") {
    AnisotropyProfile p;
    p.axis = es.contains("axis") ? es.at("axis").get<int>() : 0;
    p.f_minus = parse_expr(need(es, "f_minus", "essspec").get<std::string>(), s.grid.dim);
    p.f_plus = parse_expr(need(es, "f_plus", "essspec").get<std::string>(), s.grid.dim);
    p.B_minus = s.grid.dim == 2 && es.contains("b_minus")
                    ? make_scalar_field(es.at("b_minus").get<double>())
                    : make_constant_field(s.grid.dim,
                                          Eigen::MatrixXd::Zero(s.grid.dim, s.grid.dim));
    p.B_plus = s.grid.dim == 2 && es.contains("b_plus")
                   ? make_scalar_field(es.at("b_plus").get<double>())
                   : make_constant_field(s.grid.dim,
                                         Eigen::MatrixXd::Zero(s.grid.dim, s.grid.dim));
    if (es.contains("transition")) p.transition = es.at("transition").get<double>();
    SymbolField full = symbol_at(s, 0);
    AnisoReport rep = anisotropic_ess(p, full, s.field, s.gauge);
    std::ofstream os(opath(s, "aniso_report.json"), std::ios::trunc);
    os << io::aniso_report_json(rep) << "\n";
    std::printf("essspec (anisotropic): hausdorff %.4g, %s\n", rep.hausdorff,
                rep.pass ? "pass" : "fail");
    return 0;
  }
  bail(ErrorCode::ConfigError, "essspec.mode must be decaying|anisotropic");
}

int cmd_verify(const Setup& s) {
  auto rows = verify::run_all();
  bool ok = verify::print_table(std::cout, rows);
  std::ofstream os(opath(s, "verify.txt"), std::ios::trunc);
  verify::print_table(os, rows);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magweyl: magnetic phase-space calculus driver"};
  app.require_subcommand(1);

  std::string cfg_path, out_dir = ".", method = "operator";
  unsigned long long seed = 42;
  int order = 4;
  app.add_option("--config", cfg_path, "JSON experiment config");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed recorded in outputs");
  app.add_option("--method", method, "compose route: operator|integral|expansion");
  app.add_option("--order", order, "expansion truncation order");

  std::vector<std::string> names = {"field-check", "quantize", "compose", "expand",
                                    "spectrum",    "funcalc",  "invert",  "lap",
                                    "essspec",     "verify"};
  for (const auto& n : names) app.add_subcommand(n, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string cmd = app.get_subcommands().front()->get_name();
  try {
    bool need_grid = cmd != "verify";
    Setup s = load(cfg_path, out_dir, seed, need_grid);
    if (cmd == "field-check") return cmd_field_check(s);
    if (cmd == "quantize") return cmd_quantize(s);
    if (cmd == "compose") return cmd_compose(s, method, order);
    if (cmd == "expand") return cmd_expand(s, order);
    if (cmd == "spectrum") return cmd_spectrum(s);
    if (cmd == "funcalc") return cmd_funcalc(s);
    if (cmd == "invert") return cmd_invert(s);
    if (cmd == "lap") return cmd_lap(s);
    if (cmd == "essspec") return cmd_essspec(s);
    if (cmd == "verify") return cmd_verify(s);
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", cmd.c_str(), e.what());
    return e.code() == ErrorCode::ConfigError ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s: %s\n", cmd.c_str(), e.what());
    return 3;
  }
}
