#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "magweyl/io.hpp"

using namespace magweyl;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("fmt17 round-trips doubles exactly") {
  for (double v : {1.0 / 3.0, 1e-300, -2.718281828459045, 0.1, 6.02214076e23}) {
    double back = std::strtod(io::fmt17(v).c_str(), nullptr);
    CHECK(back == v);
  }
}

TEST_CASE("matrix file round trip preserves grid, tag, and entries") {
  SpatialGrid g = make_grid(2, 6, 9.0);
  Gauge A = landau_gauge(0.75);
  SymbolField f = sample(g, parse_expr("xi1^2 + xi2^2 + exp(-x1^2-x2^2)", 2));
  OperatorMatrix K = quantize(f, A);

  std::string path = tmp_path("magweyl_io_roundtrip.mwk");
  io::write_matrix(path, K);
  OperatorMatrix back = io::read_matrix(path);

  CHECK(back.grid.dim == K.grid.dim);
  CHECK(back.grid.n == K.grid.n);
  CHECK(back.grid.length == K.grid.length);
  CHECK(back.gauge_tag == K.gauge_tag);
  REQUIRE(back.mat.rows() == K.mat.rows());
  CHECK((back.mat - K.mat).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("matrix reader rejects bad magic and truncation") {
  SpatialGrid g = make_grid(1, 8, 4.0);
  OperatorMatrix K{g, "zero", Eigen::MatrixXcd::Identity(8, 8), 0.0};
  std::string path = tmp_path("magweyl_io_damage.mwk");
  io::write_matrix(path, K);

  // truncate: drop the last half of the payload
  std::string bytes = slurp(path);
  {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os.write(bytes.data(), static_cast<long>(bytes.size() / 2));
  }
  CHECK_THROWS_AS(io::read_matrix(path), Error);

  {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    std::string corrupt = bytes;
    corrupt[0] = 'X';
    os.write(corrupt.data(), static_cast<long>(corrupt.size()));
  }
  try {
    io::read_matrix(path);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
  std::filesystem::remove(path);

  CHECK_THROWS_AS(io::read_matrix(tmp_path("magweyl_io_missing.mwk")), Error);
}

TEST_CASE("csv emitters put the provenance header first and 17-digit data after") {
  SpatialGrid g = make_grid(1, 8, 4.0);
  WaveFunction u{g, Eigen::VectorXcd::Zero(8)};
  u.v[3] = {1.0 / 3.0, -0.25};
  std::string path = tmp_path("magweyl_io_wave.csv");
  io::write_wavefunction_csv(path, u, "gauge=zero grid=1x8 L=4 cfg=deadbeef seed=42");
  std::string text = slurp(path);
  CHECK(text.rfind("# gauge=zero", 0) == 0);

  // row for index 3 reparses to the stored values
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);  // header
  std::getline(is, line);  // column names
  for (int i = 0; i <= 3; ++i) std::getline(is, line);
  std::replace(line.begin(), line.end(), ',', ' ');
  std::istringstream row(line);
  long idx;
  double re, im;
  row >> idx >> re >> im;
  CHECK(idx == 3);
  CHECK(re == 1.0 / 3.0);
  CHECK(im == -0.25);
  std::filesystem::remove(path);
}

TEST_CASE("spectral and symbol csv write one row per entry") {
  SpatialGrid g = make_grid(1, 6, 6.0);
  SpectralReport rep;
  rep.grid = g;
  rep.gauge_tag = "zero";
  rep.eigenvalues = Eigen::VectorXd::LinSpaced(6, 0.0, 5.0);
  rep.localization = Eigen::VectorXd::Constant(6, 0.5);
  std::string path = tmp_path("magweyl_io_spec.csv");
  io::write_spectral_csv(path, rep, "h");
  std::string text = slurp(path);
  // header + column names + 6 rows
  CHECK(std::count(text.begin(), text.end(), '\n') == 8);
  std::filesystem::remove(path);

  SymbolField f = sample(g, parse_expr("x1", 1));
  path = tmp_path("magweyl_io_sym.csv");
  io::write_symbol_csv(path, f, "h");
  text = slurp(path);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2 + 6 * 6);
  std::filesystem::remove(path);
}

TEST_CASE("expansion csv carries the multi-index table") {
  std::vector<ExpansionTermEntry> table;
  ExpansionTermEntry e;
  e.l = 2;
  e.a = {1, 0, 0};
  e.alpha = {1, 1, 0};
  e.b = {0, 0, 0};
  e.beta = {2, 0, 0};
  e.coeff = {0.0, -0.125};
  e.max_abs = 3.5;
  table.push_back(e);
  std::string path = tmp_path("magweyl_io_exp.csv");
  io::write_expansion_csv(path, table, "h");
  std::string text = slurp(path);
  CHECK(text.find("1.1.0") != std::string::npos);  // alpha as dotted multi-index
  CHECK(text.find("2.0.0") != std::string::npos);
  CHECK(text.find(io::fmt17(-0.125)) != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("report json parses back with the expected fields") {
  EssReport r;
  r.window_lo = -1.0;
  r.window_hi = 22.0;
  r.hausdorff = 0.03;
  r.delocalized = {0.5, 1.5};
  r.localized_below = {-2.25};
  r.pass = true;
  auto j = nlohmann::json::parse(io::ess_report_json(r));
  CHECK(j["window"][0].get<double>() == -1.0);
  CHECK(j["window"][1].get<double>() == 22.0);
  CHECK(j["hausdorff"].get<double>() == 0.03);
  CHECK(j["localized_states"].size() == 1);
  CHECK(j["verdict"].get<std::string>() == "pass");

  AnisoReport a;
  a.window_lo = 0.0;
  a.window_hi = 20.0;
  a.hausdorff = 0.9;
  a.union_spectrum = {1.0, 2.0, 3.0};
  a.pass = false;
  auto ja = nlohmann::json::parse(io::aniso_report_json(a));
  CHECK(ja["verdict"].get<std::string>() == "fail");
  CHECK(ja["window"][1].get<double>() == 20.0);
}

TEST_CASE("sha1 matches the published test vectors") {
  CHECK(io::sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(io::sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  CHECK(io::sha1_hex("The quick brown fox jumps over the lazy dog") ==
        "2fd4e1c67a2d28fced849ee1bb76e7391b93eb12");
}
