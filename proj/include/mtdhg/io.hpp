#pragma once

// JSON encodings of instances, strategies and solver results, plus atomic
// file writes.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "mtdhg/equilibria.hpp"
#include "mtdhg/model.hpp"
#include "mtdhg/robustness.hpp"
#include "mtdhg/stability.hpp"

namespace mtdhg::io {

using Json = nlohmann::ordered_json;

// Parses the instance object {K, n, R_d, R_a, theta0, P, U_d_c, U_d_u, U_a_c,
// U_a_u}. Throws ShapeError on missing keys or non-numeric values; the result
// still goes through validate_instance.
RawInstance raw_instance_from_json(const Json& doc);
GameInstance instance_from_json(const Json& doc);
Json instance_to_json(const GameInstance& game);

Json parse_json_text(const std::string& text);
Json read_json_file(const std::filesystem::path& path);
GameInstance read_instance(const std::filesystem::path& path);

// Accepts a bare array or an object with an "x" array (e.g. `solve --json`
// output).
Vector read_defender_allocation(const std::filesystem::path& path);

Json result_to_json(const std::string& kind, const EquilibriumResult& result);
Json verification_to_json(const VerificationReport& report);
Json stability_to_json(const StabilityReport& report);
Json robustness_to_json(const RobustnessReport& report);
Json radius_to_json(const RadiusEstimate& estimate);

Json vector_to_json(const Vector& v);
Json matrix_to_json(const Matrix& m);
Json set_to_json(const TargetSet& s);

// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace mtdhg::io
