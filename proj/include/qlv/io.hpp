#pragma once

#include <filesystem>
#include <json.hpp>

#include "qlv/adversary.hpp"

// JSON documents for every artifact type. Complex scalars are two-element
// arrays [re, im], matrices nested arrays of them. Serialise → parse is the
// identity on all document types; doubles are rendered with enough digits
// to round-trip bit-exactly.

namespace qlv {

using Json = nlohmann::ordered_json;

Json complex_json(cxd z);
cxd complex_from_json(Json const &j);

Json vector_json(Vector const &v);
Vector vector_from_json(Json const &j);

Json matrix_json(Matrix const &m);
Matrix matrix_from_json(Json const &j);

// {"block_dims", "kind", "operators" keyed by label}. Label order is the
// document order of the operators object.
Json family_json(OracleFamily const &fam);
OracleFamily family_from_json(Json const &j);

// {"oracles" (embedded family or file path), "k_dim", "xi", "tau"} with the
// state arrays in label order. Path references resolve relative to `base`.
Json problem_json(StateConversionProblem const &p);
StateConversionProblem problem_from_json(Json const &j,
                                         std::filesystem::path const &base = {});

// {"h_dim", "embedding" {"b_dim","c_dim","layout"}, "oracle_block_dims",
// and either "unitaries" (dense stage matrices) or "stages" (structured
// step lists)}. The dense form is the interchange format; the structured
// form keeps compiled algorithms with large T at their native size.
Json algorithm_json(QueryAlgorithm const &algo, bool dense = false);
QueryAlgorithm algorithm_from_json(Json const &j);

// {"w_dim", "vectors" keyed by label, blockwise}. Parsing follows the given
// label order; extra document fields are ignored.
Json solution_json(FeasibleSolution const &sol,
                   std::vector<std::string> const &labels);
FeasibleSolution solution_from_json(Json const &j,
                                    std::vector<std::string> const &labels);

Json certificate_json(DualCertificate const &cert);
DualCertificate certificate_from_json(Json const &j);

Json profile_json(ComplexityProfile const &profile,
                  std::vector<std::string> const &labels);
ComplexityProfile profile_from_json(Json const &j,
                                    std::vector<std::string> const &labels);

// File helpers; malformed JSON or schema violations raise ParseError.
Json load_json(std::filesystem::path const &path);
void save_json(std::filesystem::path const &path, Json const &doc);

} // namespace qlv
