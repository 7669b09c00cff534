#include "amhd/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "amhd/errors.hpp"

namespace amhd {

namespace {

constexpr const char* kFormat = "amhd-checkpoint";
constexpr const char* kLayout = "c1,c2,c3 row-major complex interleaved";
constexpr int kVersion = 1;

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return __builtin_bswap64(v);
  }
}

void write_block(std::ostream& os, const SpectralField& f) {
  auto c = f.coeffs();
  std::vector<std::uint64_t> raw(2 * c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    raw[2 * i] = to_little(std::bit_cast<std::uint64_t>(c[i].real()));
    raw[2 * i + 1] = to_little(std::bit_cast<std::uint64_t>(c[i].imag()));
  }
  os.write(reinterpret_cast<const char*>(raw.data()),
           static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
}

void read_block(std::istream& is, SpectralField& f) {
  auto c = f.coeffs();
  std::vector<std::uint64_t> raw(2 * c.size());
  is.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size() * sizeof(std::uint64_t)));
  if (!is) throw IoError("checkpoint: truncated coefficient block");
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = {std::bit_cast<double>(to_little(raw[2 * i])),
            std::bit_cast<double>(to_little(raw[2 * i + 1]))};
  }
}

}  // namespace

void write_checkpoint(std::ostream& os, const MHDState& state, DissipationMode mode) {
  const Grid& g = state.grid();
  const auto sd = g.spectral_dims();
  nlohmann::json header = {
      {"format", kFormat},
      {"version", kVersion},
      {"grid", {g.dims()[0], g.dims()[1], g.dims()[2]}},
      {"spectral_shape", {sd[0], sd[1], sd[2]}},
      {"length", g.length()},
      {"t", state.t},
      {"dissipation_mode", std::string(to_string(mode))},
      {"endianness", "little"},
      {"scalar", "float64"},
      {"layout", kLayout},
      {"blocks", {"u1", "u2", "u3", "b1", "b2", "b3"}},
  };
  os << header.dump() << '\n';
  for (const auto& c : state.u) write_block(os, c);
  for (const auto& c : state.b) write_block(os, c);
  if (!os) throw IoError("checkpoint: write failed");
}

void save_checkpoint(const std::string& path, const MHDState& state, DissipationMode mode) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_checkpoint(os, state, mode);
}

Checkpoint read_checkpoint(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("checkpoint: missing header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("checkpoint: header is not valid JSON: ") + e.what());
  }
  try {
    if (h.at("format").get<std::string>() != kFormat) throw IoError("checkpoint: unknown format");
    if (h.at("version").get<int>() != kVersion) throw IoError("checkpoint: unsupported version");
    if (h.at("endianness").get<std::string>() != "little") {
      throw IoError("checkpoint: only little-endian blocks are supported");
    }
    if (h.at("layout").get<std::string>() != kLayout) throw IoError("checkpoint: unknown layout");
    const auto dims = h.at("grid").get<std::vector<int>>();
    if (dims.size() != 3) throw IoError("checkpoint: grid must have three entries");
    const Grid g(dims[0], dims[1], dims[2], h.at("length").get<double>());
    Checkpoint ck{MHDState(g, h.at("t").get<double>()),
                  parse_dissipation_mode(h.at("dissipation_mode").get<std::string>())};
    for (auto& c : ck.state.u) read_block(is, c);
    for (auto& c : ck.state.b) read_block(is, c);
    return ck;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("checkpoint: bad header field: ") + e.what());
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return read_checkpoint(is);
}

}  // namespace amhd
