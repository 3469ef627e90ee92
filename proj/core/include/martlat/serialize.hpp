#ifndef MARTLAT_SERIALIZE_HPP
#define MARTLAT_SERIALIZE_HPP

#include <string>

#include "json.hpp"
#include "martlat/lattice_calc.hpp"
#include "martlat/martingale.hpp"

namespace martlat {

using Json = nlohmann::ordered_json;

// Writers. Rationals are written as strings ("3", "-1/2").
Json to_json(const Rational& r);
Json to_json(const ExtSeq& a);
Json to_json(const Matrix& m);
Json to_json(const Functional& f);
Json to_json(const Operator& e);
Json to_json(const SpaceKind& s);
Json to_json(const Filtration& f);   // space is written by the enclosing document
Json to_json(const Martingale& x);
Json to_json(const ValidationReport& r);
Json to_json(const LpResult& r);

// Readers. `path` is the JSON pointer of `j` inside the document and is
// extended for nested values; every schema violation throws ParseError with
// the full path of the offending value.
Rational rational_from_json(const Json& j, const std::string& path);
ExtSeq ext_seq_from_json(const Json& j, const std::string& path);
Matrix matrix_from_json(const Json& j, const std::string& path);
Functional functional_from_json(const Json& j, const std::string& path);
Operator operator_from_json(const Json& j, const std::string& path);
SpaceKind space_from_json(const Json& j, const std::string& path);
NormKind norm_from_json(const Json& j, const std::string& path);
Filtration filtration_from_json(const Json& j, const SpaceKind& space, const std::string& path);
Martingale martingale_from_json(const Json& j, const std::string& path);

/// Parses text as JSON, turning syntax errors into ParseError at path "".
Json parse_json_text(const std::string& text);

namespace json_detail {
/// Member `key` of object `j`; throws ParseError naming path/key when absent
/// or when `j` is not an object.
const Json& require(const Json& j, const std::string& key, const std::string& path);
long require_integer(const Json& j, const std::string& path);
std::string require_string(const Json& j, const std::string& path);
bool require_bool(const Json& j, const std::string& path);
const Json& require_array(const Json& j, const std::string& path);
}  // namespace json_detail

}  // namespace martlat

#endif  // MARTLAT_SERIALIZE_HPP
