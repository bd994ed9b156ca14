#pragma once

// Flat key=value run configuration. One pair per line, '#' starts a comment.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qmem/light_sources.hpp"
#include "qmem/memory_map.hpp"

namespace qmem {

enum class Experiment { kernel, modes, efficiency_curve, squeezing_spectra, checks };

std::string_view to_string(Experiment e);

struct SweepRange {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
};

struct RunConfig {
  ModelParams model;
  std::optional<SourceParams> source;
  std::optional<SweepRange> sweep;
  std::string outdir = "out";
  Experiment experiment = Experiment::kernel;
};

/// Throws ParseError carrying the offending line on unknown or duplicate
/// keys, malformed values, range violations and missing required keys.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file. Throws std::runtime_error if unreadable.
RunConfig load_config(const std::string& path);

/// Canonical key=value rendering with every field spelled out.
std::string canonical_config(const RunConfig& config);

/// 64-bit FNV-1a of the canonical rendering, as 16 hex digits.
std::string config_hash(const RunConfig& config);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace qmem
