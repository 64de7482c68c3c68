#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "wielandt/equality.hpp"
#include "wielandt/inequalities.hpp"
#include "wielandt/pencil.hpp"
#include "wielandt/perturbation.hpp"
#include "wielandt/types.hpp"

namespace wielandt::io {

using json = nlohmann::json;

// Matrix files: { "n": int, "entries": [[ [re,im] | re, ... ], ...] } where a
// bare real means zero imaginary part. All indices in reports are 1-based.

json matrix_to_json(const HermitianMatrix& m);
Matrix matrix_from_json(const json& j);  // raw grid; throws ParseError
HermitianMatrix load_matrix_file(const std::string& path,
                                 double herm_tol = Tolerances{}.hermiticity);
void save_json(const std::string& path, const json& j);
json load_json_file(const std::string& path);

json report_to_json(const InequalityReport& r);
json majorization_to_json(const MajorizationReport& r);
json rates_to_json(const PerturbationRates& r);

json certificate_to_json(const EqualityCertificate& cert);
EqualityCertificate certificate_from_json(const json& j);

void write_trace_csv(std::ostream& os, const PencilTrace& trace);
json crossings_to_json(const PencilTrace& trace);

/// Render any JSON value as indented "key: value" text. Human output is a
/// rendering of the JSON, never an independent code path.
std::string render_human(const json& j);

}  // namespace wielandt::io
