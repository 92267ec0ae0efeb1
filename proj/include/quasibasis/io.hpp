#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "quasibasis/bases.hpp"
#include "quasibasis/constructions.hpp"

namespace qb::io {

using nlohmann::json;

// Matrix layout shared by every file: d rows of d [re, im] pairs.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j, int dim);

/// {"dimension": d, "label": str, "elements": [matrix, ...]}.
json basis_to_json(const MeasureBasis& basis);

/// Raw contents of a basis (or POVM) document, before validation. Any
/// element count is accepted here.
struct OperatorList {
  int dim = 0;
  std::string label;
  std::vector<HermitianOperator> elements;
};

OperatorList operator_list_from_json(const json& j);
/// Parses and validates as a measure basis.
MeasureBasis basis_from_json(const json& j, double tol = kDefaultTol);

/// {"dimension": d, "amplitudes": [[re, im], ...]}.
json fiducial_to_json(const Fiducial& f);
Fiducial fiducial_from_json(const json& j);

/// {"dimension": d, "matrix": matrix}.
json state_to_json(const HermitianOperator& rho);
HermitianOperator state_from_json(const json& j);

json vector_to_json(const RVector& v);
json real_matrix_to_json(const RMatrix& m);

json read_json_file(const std::filesystem::path& path);
/// Writes j.dump(2) followed by a newline. Doubles are emitted in their
/// shortest round-trip form (at most 17 significant digits).
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace qb::io
