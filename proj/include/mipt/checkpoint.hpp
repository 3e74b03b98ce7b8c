#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>

#include "mipt/trajectory.hpp"

namespace mipt {

// Append-only sweep checkpoint: one self-describing JSON record per completed
// grid point, keyed by the config hash so stale files are never resumed.
// Doubles are serialized with round-trip precision, which keeps a resumed
// sweep bit-identical to an uninterrupted one.

using GridKey = std::tuple<int, double, double, double>;  // (L, lambda, xi_r, xi_s)

GridKey grid_key(const SimParams& p);

void checkpoint_append(const std::string& path, std::uint64_t config_hash, const SimParams& point,
                       const EnsembleResult& result);

// Loads completed points whose hash matches; silently returns empty when the
// file does not exist.
std::map<GridKey, EnsembleResult> checkpoint_load(const std::string& path, std::uint64_t config_hash);

}  // namespace mipt
