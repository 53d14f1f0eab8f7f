#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "entcert/discrimination.hpp"
#include "entcert/measures.hpp"
#include "entcert/witness.hpp"

namespace entcert {

using json = nlohmann::ordered_json;

json complex_to_json(Complex z);
Complex complex_from_json(const json& j);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);
json matrix_to_json(const Matrix& m);

// {"dims": [...], "amplitudes": [[re, im], ...]}
json to_json(const PureState& psi);
PureState pure_state_from_json(const json& j);

// {"locals": [[[re, im], ...], ...]}
json to_json(const ProductState& p);
ProductState product_state_from_json(const json& j);

// {"generators": [{"x": "110", "z": "001", "sign": 1}, ...]}
json to_json(const StabilizerGroup& g);
StabilizerGroup stabilizer_group_from_json(const json& j);

json to_json(const GeoResult& geo);
json to_json(const EqualityCertificate& cert);
json to_json(const MeasureReport& report);
json to_json(const Witness& w);
json to_json(const Table1Row& row);

// Fixed 9 significant digits.
std::string csv_number(double x);

json read_json_file(const std::string& path);

}  // namespace entcert
