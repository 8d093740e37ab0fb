#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "acn/acn_loop.hpp"

namespace acn {

inline constexpr int kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

class CheckpointVersionError : public CheckpointError {
 public:
  explicit CheckpointVersionError(const std::string& what) : CheckpointError(what) {}
};

/// JSON container: format tag, version, resolved config, counters, RNG state,
/// population (topologies + flat parameter arrays) and generation records.
/// Doubles are written in round-trip precision.
std::string serialize_checkpoint(const AcnState& state);
AcnState deserialize_checkpoint(const std::string& text);

/// Writes atomically (temp file + rename).
void save_checkpoint(const std::filesystem::path& path, const AcnState& state);
AcnState load_checkpoint(const std::filesystem::path& path);

}  // namespace acn
