#include "magweyl/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace magweyl::io {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void put_bytes(std::ofstream& os, const void* p, size_t n) {
  os.write(static_cast<const char*>(p), std::streamsize(n));
}

void get_bytes(std::ifstream& is, void* p, size_t n) {
  is.read(static_cast<char*>(p), std::streamsize(n));
  require(bool(is), ErrorCode::ConfigError, "matrix file truncated");
}

}  // namespace

void write_matrix(const std::string& path, const OperatorMatrix& K) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(bool(os), ErrorCode::ConfigError, "cannot open " + path + " for writing");
  os.write("MWK1", 4);
  int32_t dim = K.grid.dim, n = K.grid.n;
  double L = K.grid.length;
  put_bytes(os, &dim, 4);
  put_bytes(os, &n, 4);
  put_bytes(os, &L, 8);
  uint32_t tl = uint32_t(K.gauge_tag.size());
  put_bytes(os, &tl, 4);
  put_bytes(os, K.gauge_tag.data(), tl);
  const long P = K.mat.rows();
  for (long i = 0; i < P; ++i)
    for (long j = 0; j < P; ++j) {
      double re = K.mat(i, j).real(), im = K.mat(i, j).imag();
      put_bytes(os, &re, 8);
      put_bytes(os, &im, 8);
    }
  require(bool(os), ErrorCode::ComputeError, "write failed for " + path);
}

OperatorMatrix read_matrix(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(bool(is), ErrorCode::ConfigError, "cannot open " + path);
  char magic[4];
  get_bytes(is, magic, 4);
  require(std::memcmp(magic, "MWK1", 4) == 0, ErrorCode::ConfigError,
          path + " is not a kernel matrix file");
  int32_t dim = 0, n = 0;
  double L = 0.0;
  get_bytes(is, &dim, 4);
  get_bytes(is, &n, 4);
  get_bytes(is, &L, 8);
  uint32_t tl = 0;
  get_bytes(is, &tl, 4);
  require(tl <= 4096, ErrorCode::ConfigError, "implausible tag length");
  std::string tag(tl, '\0');
  if (tl) get_bytes(is, tag.data(), tl);
  OperatorMatrix K;
  K.grid = make_grid(dim, n, L);
  K.gauge_tag = tag;
  const long P = K.grid.points();
  K.mat.resize(P, P);
  for (long i = 0; i < P; ++i)
    for (long j = 0; j < P; ++j) {
      double re = 0.0, im = 0.0;
      get_bytes(is, &re, 8);
      get_bytes(is, &im, 8);
      K.mat(i, j) = {re, im};
    }
  return K;
}

void write_wavefunction_csv(const std::string& path, const WaveFunction& u,
                            const std::string& header) {
  std::ofstream os(path, std::ios::trunc);
  require(bool(os), ErrorCode::ConfigError, "cannot open " + path + " for writing");
  os << "# " << header << "\n";
  os << "index,re,im\n";
  for (long i = 0; i < u.v.size(); ++i)
    os << i << "," << fmt17(u.v[i].real()) << "," << fmt17(u.v[i].imag()) << "\n";
}

void write_spectral_csv(const std::string& path, const SpectralReport& rep,
                        const std::string& header) {
  std::ofstream os(path, std::ios::trunc);
  require(bool(os), ErrorCode::ConfigError, "cannot open " + path + " for writing");
  os << "# " << header << "\n";
  os << "index,eigenvalue,localization\n";
  for (long i = 0; i < rep.eigenvalues.size(); ++i)
    os << i << "," << fmt17(rep.eigenvalues[i]) << "," << fmt17(rep.localization[i]) << "\n";
}

void write_symbol_csv(const std::string& path, const SymbolField& f, const std::string& header) {
  std::ofstream os(path, std::ios::trunc);
  require(bool(os), ErrorCode::ConfigError, "cannot open " + path + " for writing");
  os << "# " << header << "\n";
  os << "row,col,re,im\n";
  for (long i = 0; i < f.values.rows(); ++i)
    for (long j = 0; j < f.values.cols(); ++j)
      os << i << "," << j << "," << fmt17(f.values(i, j).real()) << ","
         << fmt17(f.values(i, j).imag()) << "\n";
}

void write_expansion_csv(const std::string& path, const std::vector<ExpansionTermEntry>& table,
                         const std::string& header) {
  std::ofstream os(path, std::ios::trunc);
  require(bool(os), ErrorCode::ConfigError, "cannot open " + path + " for writing");
  os << "# " << header << "\n";
  os << "l,a,alpha,b,beta,re_coeff,im_coeff,max_abs\n";
  auto multi = [](const std::array<int, 3>& m) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%d.%d.%d", m[0], m[1], m[2]);
    return std::string(buf);
  };
  for (const auto& e : table)
    os << e.l << "," << multi(e.a) << "," << multi(e.alpha) << "," << multi(e.b) << ","
       << multi(e.beta) << "," << fmt17(e.coeff.real()) << "," << fmt17(e.coeff.imag()) << ","
       << fmt17(e.max_abs) << "\n";
}

std::string ess_report_json(const EssReport& r) {
  nlohmann::json j;
  j["window"] = {r.window_lo, r.window_hi};
  j["hausdorff"] = r.hausdorff;
  j["localized_states"] = r.localized_below;
  j["delocalized_count"] = r.delocalized.size();
  j["verdict"] = r.pass ? "pass" : "fail";
  return j.dump(2);
}

std::string aniso_report_json(const AnisoReport& r) {
  nlohmann::json j;
  j["window"] = {r.window_lo, r.window_hi};
  j["hausdorff"] = r.hausdorff;
  j["union_count"] = r.union_spectrum.size();
  j["delocalized_count"] = r.delocalized.size();
  j["verdict"] = r.pass ? "pass" : "fail";
  return j.dump(2);
}

// ---- SHA-1 (config provenance only, not security) --------------------------

namespace {
inline uint32_t rol(uint32_t v, int s) { return (v << s) | (v >> (32 - s)); }
}  // namespace

std::string sha1_hex(const std::string& data) {
  uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
  std::string msg = data;
  uint64_t bits = uint64_t(msg.size()) * 8;
  msg.push_back('\x80');
  while (msg.size() % 64 != 56) msg.push_back('\0');
  for (int i = 7; i >= 0; --i) msg.push_back(char((bits >> (8 * i)) & 0xFF));

  for (size_t off = 0; off < msg.size(); off += 64) {
    uint32_t w[80];
    for (int t = 0; t < 16; ++t)
      w[t] = (uint32_t(uint8_t(msg[off + 4 * t])) << 24) |
             (uint32_t(uint8_t(msg[off + 4 * t + 1])) << 16) |
             (uint32_t(uint8_t(msg[off + 4 * t + 2])) << 8) |
             uint32_t(uint8_t(msg[off + 4 * t + 3]));
    for (int t = 16; t < 80; ++t) w[t] = rol(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1);
    uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int t = 0; t < 80; ++t) {
      uint32_t f, k;
      if (t < 20) {
        f = (b & c) | ((~b) & d);
        k = 0x5A827999u;
      } else if (t < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1u;
      } else if (t < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDCu;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6u;
      }
      uint32_t tmp = rol(a, 5) + f + e + k + w[t];
      e = d;
      d = c;
      c = rol(b, 30);
      b = a;
      a = tmp;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
  }
  char out[41];
  std::snprintf(out, sizeof(out), "%08x%08x%08x%08x%08x", h[0], h[1], h[2], h[3], h[4]);
  return out;
}

}  // namespace magweyl::io
