#pragma once

#include <string>

#include "vep/field.hpp"

namespace vep {

/// State checkpoint: one single-line JSON header
///   {"dim":d,"n":n,"length":L,"t":t,"components":["v0",...,"S00",...]}
/// followed by raw little-endian 64-bit floats, one C-ordered node block per
/// listed component.
void write_state(const std::string& path, const State& state);

State read_state(const std::string& path);

}  // namespace vep
