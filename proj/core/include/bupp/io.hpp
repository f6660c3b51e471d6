#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "bupp/dist.hpp"
#include "bupp/instances.hpp"
#include "bupp/learn.hpp"

namespace bupp {

/// Instance JSON, format 1:
///   {"format": 1, "lattice": L,
///    "items": [{"support": [t, ...], "masses": [[num, den], ...]}, ...],
///    "hidden": {...}}                       (optional)
/// Integers too large for 64 bits are written as decimal strings.
std::string to_json(const ProductDist& d);
std::string to_json(const SampleHardInstance& inst);
std::string to_json(const QueryHardInstance& inst);

/// Public part only; any "hidden" block is skipped without being read.
ProductDist parse_instance(std::string_view json);

struct LoadedInstance {
  ProductDist dist;
  std::optional<SampleHardInstance> sample_hard;
  std::optional<QueryHardInstance> query_hard;
};

/// Full instance including the hidden block (for scoring).
LoadedInstance parse_instance_with_hidden(std::string_view json);

/// {"k": [...], "lambda": [...], "queries_per_threshold": [...], "R": R}
std::string to_json(const QueryLearnTrace& trace);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace bupp
