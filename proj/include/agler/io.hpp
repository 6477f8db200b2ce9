#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "agler/opmodel.hpp"
#include "agler/pick.hpp"
#include "agler/realize.hpp"
#include "agler/testfn.hpp"

namespace agler::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "agler-lab/1";

/// Serializes with stable key order and every float printed with 17
/// significant digits. indent <= 0 gives compact output.
std::string dump(const Json& j, int indent = 2);

/// Parses text; syntax errors are rethrown as Error with line/column.
Json parse(const std::string& text);
Json read_file(const std::string& path);
/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& content);

// Field access with path-qualified diagnostics.
const Json& field(const Json& j, const std::string& key, const std::string& where);

Json to_json(Complex z);
Json to_json(const CMatrix& m);
Json to_json(const MultiIndex& lambda);
Json to_json(const Preordering& order);
Json points_to_json(const PointSample& sample);
Json to_json(const HermitianKernel& k);
Json to_json(const Colligation& sigma);
Json to_json(const CommutingTuple& t);
Json to_json(const AuxFunctionSample& aux);
Json to_json(const AglerCertificate& cert);
Json to_json(const Witness& w);
Json to_json(const AdmissibilityReport& r);

Complex complex_from(const Json& j, const std::string& where);
CMatrix matrix_from(const Json& j, const std::string& where);
MultiIndex multi_index_from(const Json& j, const std::string& where);
Preordering preordering_from(const Json& j, const std::string& where);
/// Points are arrays of [re, im] pairs; a bare [re, im] is a point with d = 1.
SamplePtr sample_from(const Json& points, const std::string& where, double delta = 0.0);
HermitianKernel kernel_from(const Json& j, const std::string& where);
Colligation colligation_from(const Json& j, const std::string& where);
CommutingTuple tuple_from(const Json& j, const std::string& where);
std::vector<CMatrix> matrices_from(const Json& j, std::size_t count, const std::string& where);

}  // namespace agler::io
