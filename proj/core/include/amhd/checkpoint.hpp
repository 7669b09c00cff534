#pragma once

#include <iosfwd>
#include <string>

#include "amhd/identities.hpp"
#include "amhd/state.hpp"

namespace amhd {

/// On-disk layout: one line of JSON (terminated by '\n') describing the
/// grid, box length, time, dissipation mode, endianness and block layout,
/// followed by raw little-endian float64 blocks. Each block is one
/// component's half spectrum (n1 x n2 x (n3/2+1), row-major, complex
/// interleaved re/im) in the order u1, u2, u3, b1, b2, b3.
struct Checkpoint {
  MHDState state;
  DissipationMode mode = DissipationMode::full_aniso;
};

void write_checkpoint(std::ostream& os, const MHDState& state, DissipationMode mode);
void save_checkpoint(const std::string& path, const MHDState& state, DissipationMode mode);

Checkpoint read_checkpoint(std::istream& is);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace amhd
