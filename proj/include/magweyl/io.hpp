#pragma once
#include <string>
#include <vector>

#include "magweyl/moyal.hpp"
#include "magweyl/quantize.hpp"
#include "magweyl/spectral.hpp"

namespace magweyl::io {

// "%.17g" round-trip formatting used by every CSV emitter
std::string fmt17(double v);

// kernel matrix container: magic "MWK1", int32 dim, int32 n, double L,
// uint32 tag length + tag bytes, then row-major complex doubles (re, im).
// Byte order is the host's (little-endian on every supported target).
void write_matrix(const std::string& path, const OperatorMatrix& K);
OperatorMatrix read_matrix(const std::string& path);

// one comment header line naming gauge/grid/config hash, then data rows
void write_wavefunction_csv(const std::string& path, const WaveFunction& u,
                            const std::string& header);
void write_spectral_csv(const std::string& path, const SpectralReport& rep,
                        const std::string& header);
void write_symbol_csv(const std::string& path, const SymbolField& f, const std::string& header);
void write_expansion_csv(const std::string& path, const std::vector<ExpansionTermEntry>& table,
                         const std::string& header);

// report serializers: {window, hausdorff, localized_states, verdict}
std::string ess_report_json(const EssReport& r);
std::string aniso_report_json(const AnisoReport& r);

// content hash for config provenance lines
std::string sha1_hex(const std::string& data);

}  // namespace magweyl::io
