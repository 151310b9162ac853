#pragma once

#include "macl/model.hpp"

#include <cstdint>
#include <string>

namespace macl {

// Binary model container: an 8-byte magic, a format version, then
// length-prefixed named sections (config text, corpus-side state, graphs,
// and one section per parameter tensor). Writing is fully deterministic, so
// saving, loading, and saving again reproduces the file byte for byte.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const Ranker& ranker);

// Rejects files with the wrong magic or a different format version.
Ranker load_checkpoint(const std::string& path);

} // namespace macl
