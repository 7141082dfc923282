#ifndef MUNN_JSON_IO_HPP
#define MUNN_JSON_IO_HPP

#include <string>

#include "json.hpp"

#include "munn/commutator.hpp"
#include "munn/context.hpp"
#include "munn/zpd.hpp"

namespace munn {

using json = nlohmann::json;

// Schema summary (scalar entries use the literal grammar of Scalar::parse;
// integers are also accepted on input, strings are always emitted):
//   domain   {"kind": "gf"|"rationals"|"quaternions", "p": <int, gf only>}
//   matrix   {"rows": R, "cols": C, "entries": [[literal, ...], ...]}
//   context  {"domain": {...}, "m": M, "n": N, "P": <matrix>}
//   element  {"entries": [[literal, ...], ...]}
//   witness  {"kind": "...", "terms": [...]}, term shape depending on kind
//   error    {"error": {"code": "...", "detail": "..."}}

json domain_to_json(const ScalarDomain& d);
ScalarDomain domain_from_json(const json& j);

json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const ScalarDomain& d, const json& j);

json element_to_json(const MunnElement& A);
MunnElement element_from_json(const ContextPtr& ctx, const json& j);

json context_to_json(const ContextPtr& c);
ContextPtr context_from_json(const json& j);

json witness_to_json(const Witness& w);
Witness witness_from_json(const ContextPtr& ctx, const json& j);

json xi_report_to_json(const XiReport& rep);
json certificate_to_json(const ZpdCertificate& cert);
json error_to_json(const error& e);

// Deterministic rendering: objects keep keys sorted, two-space indent, one
// trailing newline.
std::string dump_json(const json& j);

} // namespace munn

#endif
