#pragma once

#include "curvfun/geometry.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace curvfun {

/// Builds a body from its JSON description:
///   {"dim": 2|3, "type": "ball"|"ellipsoid"|"perturbed_ball",
///    "radius": r, "matrix": [[...]] | "semi_axes": [...], "rotation": [[...]],
///    "mode": L | harmonic id, "epsilon": e, "translate": [...],
///    "id": "...", "provenance": "..."}
/// Throws DomainError on malformed or inconsistent fields.
SupportBody body_from_json(const nlohmann::json& spec);

/// Loads a body file; the body id defaults to the file stem.
SupportBody load_body_file(const std::filesystem::path& path);

struct CorpusEntry {
  std::string file_name;
  nlohmann::json spec;
};

/// The canonical corpus: unit balls (n = 2, 3), ellipsoids (2,1), (3,1),
/// (2,1,1) and perturbed balls with epsilon 0.02, 0.05 (n = 2, L = 3) and
/// 0.1 (n = 3, harmonic xyz).
std::vector<CorpusEntry> canonical_corpus();

/// Writes canonical_corpus() into dir (created if missing) and returns the
/// written paths. Output is byte-identical across runs.
std::vector<std::filesystem::path> write_corpus(const std::filesystem::path& dir);

/// Every "*.json" body file in dir, sorted by file name.
std::vector<SupportBody> load_corpus(const std::filesystem::path& dir);

}  // namespace curvfun
