#pragma once

#include "qbd/blockmat.hpp"
#include "qbd/jacobi_params.hpp"
#include "qbd/spectral.hpp"

#include <json.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace qbd {

using Json = nlohmann::json;

Json block_to_json(const Block& m);
/// Parses a row-major array of arrays; `d` > 0 enforces the size.
Block block_from_json(const Json& j, int d = -1);

/// {"d", "band", "blocks": [...]} with the level-0 sub-diagonal block omitted.
/// Tridiagonal levels carry C/B/A, upper levels Y/X, lower levels R/S.
Json block_sequence_to_json(const BlockSequence& seq, std::size_t levels);
BlockSequence block_sequence_from_json(const Json& j);

/// {"alpha0": [[..]], "tau": [[[..]], ...]}.
Json factor_sidecar(const Block& alpha0, const std::vector<Block>& taus);

Json params_to_json(const JacobiParams& p);
JacobiParams params_from_json(const Json& j);

/// {"a", "b", "atom0": [[..]] | null, "matrix_part": "jacobi" | "identity", "params": {...}}.
Json weight_to_json(const WeightSpec& w);
WeightSpec weight_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qbd
