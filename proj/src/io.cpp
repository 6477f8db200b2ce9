#include "agler/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace agler::io {

namespace {

void write_number(std::ostringstream& out, double v) {
  if (!std::isfinite(v)) {
    out << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  out << s;
}

void write(std::ostringstream& out, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << "," << nl;
        first = false;
        out << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write(out, it.value(), indent, depth + 1);
      }
      out << nl << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Rows of [re, im] pairs stay on one line.
      auto scalar_array = [](const Json& e) {
        return !e.is_structured() || (e.is_array() && std::none_of(e.begin(), e.end(), [](const Json& x) {
                                        return x.is_structured();
                                      }));
      };
      bool flat = std::all_of(j.begin(), j.end(), scalar_array);
      out << "[";
      if (!flat) out << nl;
      bool first = true;
      for (const auto& e : j) {
        if (!first) out << (flat ? ", " : ",") << (flat ? "" : nl);
        first = false;
        if (!flat) out << pad;
        write(out, e, indent, depth + 1);
      }
      if (!flat) out << nl << close;
      out << "]";
      return;
    }
    case Json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out << j.dump();
  }
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error("field '" + where + "': " + what);
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::ostringstream out;
  write(out, j, std::max(indent, 0), 0);
  out << "\n";
  return out.str();
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename onto '" + path + "': " + ec.message());
  }
}

const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

// ------------------------------------------------------------------ writers

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const MultiIndex& lambda) { return Json(lambda.entries()); }

Json to_json(const Preordering& order) {
  Json out = Json::array();
  for (const auto& l : order.elements()) out.push_back(to_json(l));
  return out;
}

Json points_to_json(const PointSample& sample) {
  Json out = Json::array();
  for (const auto& p : sample.points()) {
    Json pt = Json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i) pt.push_back(to_json(p(i)));
    out.push_back(std::move(pt));
  }
  return out;
}

Json to_json(const HermitianKernel& k) {
  Json out;
  out["points"] = points_to_json(*k.sample());
  out["block_dim"] = k.block_dim();
  Json blocks = Json::array();
  for (std::size_t x = 0; x < k.points(); ++x) {
    Json row = Json::array();
    for (std::size_t y = 0; y < k.points(); ++y) row.push_back(to_json(k.block(x, y)));
    blocks.push_back(std::move(row));
  }
  out["blocks"] = std::move(blocks);
  return out;
}

Json to_json(const Colligation& sigma) {
  Json out;
  out["A"] = to_json(sigma.A);
  out["B"] = to_json(sigma.B);
  out["C"] = to_json(sigma.C);
  out["D"] = to_json(sigma.D);
  Json part = Json::array();
  for (const auto& blk : sigma.partition) {
    Json b;
    b["lambda"] = to_json(blk.lambda);
    b["mult"] = blk.mult;
    part.push_back(std::move(b));
  }
  out["partition"] = std::move(part);
  out["contractive"] = sigma.contractive;
  return out;
}

Json to_json(const CommutingTuple& t) {
  Json out;
  out["d"] = t.d();
  out["q"] = t.q();
  Json mats = Json::array();
  for (const auto& m : t.matrices()) mats.push_back(to_json(m));
  out["matrices"] = std::move(mats);
  return out;
}

Json to_json(const AuxFunctionSample& aux) {
  Json out;
  out["lambda"] = to_json(aux.lambda);
  out["n"] = aux.n;
  Json sigma = Json::object();
  for (std::size_t x = 0; x < aux.sigma.size(); ++x) sigma[std::to_string(x)] = to_json(aux.sigma[x]);
  out["sigma"] = std::move(sigma);
  out["mode"] = aux.mode == AuxMode::kRaw ? "raw" : "extended";
  return out;
}

Json to_json(const AglerCertificate& cert) {
  Json out = Json::object();
  for (const auto& [lambda, gamma] : cert.gammas) out[lambda.to_string()] = to_json(gamma);
  return out;
}

Json to_json(const AdmissibilityReport& r) {
  Json out;
  out["admissible"] = r.admissible;
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json je;
    je["lambda"] = to_json(e.lambda);
    je["min_eigenvalue"] = e.min_eigenvalue;
    entries.push_back(std::move(je));
  }
  out["entries"] = std::move(entries);
  if (r.failing_lambda) out["failing_lambda"] = to_json(*r.failing_lambda);
  if (r.failing_eigenvector) {
    Json v = Json::array();
    for (Eigen::Index i = 0; i < r.failing_eigenvector->size(); ++i) v.push_back(to_json((*r.failing_eigenvector)(i)));
    out["failing_eigenvector"] = std::move(v);
  }
  return out;
}

Json to_json(const Witness& w) {
  Json out = to_json(w.kernel);
  out["pairing"] = w.pairing;
  out["violation_min_eigenvalue"] = w.violation_min_eigenvalue;
  out["admissibility"] = to_json(w.admissibility);
  return out;
}

// ------------------------------------------------------------------ readers

Complex complex_from(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(where, "expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

CMatrix matrix_from(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of rows");
  if (j.empty()) return CMatrix(0, 0);
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) fail(where + "[0]", "expected a row array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string w = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) fail(w, "ragged matrix row");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from(j[r][c], w + "[" + std::to_string(c) + "]");
  }
  return m;
}

MultiIndex multi_index_from(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty integer array");
  std::vector<unsigned> e;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() < 0)
      fail(where + "[" + std::to_string(i) + "]", "expected a non-negative integer");
    e.push_back(j[i].get<unsigned>());
  }
  return MultiIndex(std::move(e));
}

Preordering preordering_from(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected an array of multi-indices");
  std::vector<MultiIndex> el;
  for (std::size_t i = 0; i < j.size(); ++i) el.push_back(multi_index_from(j[i], where + "[" + std::to_string(i) + "]"));
  try {
    return Preordering(std::move(el));
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

SamplePtr sample_from(const Json& points, const std::string& where, double delta) {
  if (!points.is_array() || points.empty()) fail(where, "expected a nonempty array of points");
  std::vector<CVector> pts;
  std::size_t d = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const Json& p = points[i];
    CVector v;
    if (p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number()) {
      v.resize(1);
      v(0) = complex_from(p, w);
    } else if (p.is_array() && !p.empty()) {
      v.resize(static_cast<Eigen::Index>(p.size()));
      for (std::size_t k = 0; k < p.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from(p[k], w + "[" + std::to_string(k) + "]");
    } else {
      fail(w, "expected a point as an array of [re, im] pairs");
    }
    if (i == 0) d = static_cast<std::size_t>(v.size());
    if (static_cast<std::size_t>(v.size()) != d) fail(w, "point dimension differs from the first point");
    pts.push_back(std::move(v));
  }
  try {
    return make_sample(d, std::move(pts), delta);
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

std::vector<CMatrix> matrices_from(const Json& j, std::size_t count, const std::string& where) {
  if (!j.is_array() || j.size() != count)
    fail(where, "expected an array of " + std::to_string(count) + " matrices");
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    // Scalars may be given as a bare [re, im] pair.
    if (j[i].is_array() && j[i].size() == 2 && j[i][0].is_number())
      out.push_back(CMatrix::Constant(1, 1, complex_from(j[i], w)));
    else
      out.push_back(matrix_from(j[i], w));
    if (out.back().size() == 0) fail(w, "empty matrix");
    if (out.back().rows() != out.front().rows() || out.back().cols() != out.front().cols())
      fail(w, "matrix dimensions differ from the first entry");
  }
  return out;
}

HermitianKernel kernel_from(const Json& j, const std::string& where) {
  auto sample = sample_from(field(j, "points", where), where + ".points");
  const Json& bd = field(j, "block_dim", where);
  if (!bd.is_number_integer() || bd.get<int>() < 1) fail(where + ".block_dim", "expected a positive integer");
  const int m = bd.get<int>();
  const Json& blocks = field(j, "blocks", where);
  const auto N = static_cast<Eigen::Index>(sample->size());
  if (!blocks.is_array() || static_cast<Eigen::Index>(blocks.size()) != N)
    fail(where + ".blocks", "expected " + std::to_string(N) + " block rows");
  CMatrix k(N * m, N * m);
  for (Eigen::Index x = 0; x < N; ++x) {
    const std::string wx = where + ".blocks[" + std::to_string(x) + "]";
    if (!blocks[x].is_array() || static_cast<Eigen::Index>(blocks[x].size()) != N)
      fail(wx, "expected " + std::to_string(N) + " blocks");
    for (Eigen::Index y = 0; y < N; ++y) {
      const std::string w = wx + "[" + std::to_string(y) + "]";
      const Json& b = blocks[x][y];
      CMatrix blk = (m == 1 && b.is_array() && b.size() == 2 && b[0].is_number())
                        ? CMatrix::Constant(1, 1, complex_from(b, w))
                        : matrix_from(b, w);
      if (blk.rows() != m || blk.cols() != m) fail(w, "block has wrong size");
      k.block(x * m, y * m, m, m) = blk;
    }
  }
  try {
    return HermitianKernel(sample, m, std::move(k));
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

Colligation colligation_from(const Json& j, const std::string& where) {
  Colligation s;
  s.D = matrix_from(field(j, "D", where), where + ".D");
  const Json& part = field(j, "partition", where);
  if (!part.is_array()) fail(where + ".partition", "expected an array");
  for (std::size_t i = 0; i < part.size(); ++i) {
    const std::string w = where + ".partition[" + std::to_string(i) + "]";
    PartitionBlock blk;
    blk.lambda = multi_index_from(field(part[i], "lambda", w), w + ".lambda");
    const Json& mult = field(part[i], "mult", w);
    if (!mult.is_number_integer()) fail(w + ".mult", "expected an integer");
    blk.mult = mult.get<int>();
    s.partition.push_back(std::move(blk));
  }
  Eigen::Index e = 0;
  for (const auto& blk : s.partition) e += static_cast<Eigen::Index>(blk.mult) * blk.width();
  const Eigen::Index h = s.D.rows();
  s.A = matrix_from(field(j, "A", where), where + ".A");
  s.B = matrix_from(field(j, "B", where), where + ".B");
  s.C = matrix_from(field(j, "C", where), where + ".C");
  if (e == 0) {
    s.A.resize(0, 0);
    s.B.resize(0, h);
    s.C.resize(h, 0);
  }
  if (j.contains("contractive")) s.contractive = j["contractive"].get<bool>();
  try {
    s.validate();
  } catch (const Error& ex) {
    fail(where, ex.what());
  }
  return s;
}

CommutingTuple tuple_from(const Json& j, const std::string& where) {
  const Json& mats = field(j, "matrices", where);
  if (!mats.is_array() || mats.empty()) fail(where + ".matrices", "expected a nonempty array");
  std::vector<CMatrix> m;
  for (std::size_t i = 0; i < mats.size(); ++i)
    m.push_back(matrix_from(mats[i], where + ".matrices[" + std::to_string(i) + "]"));
  if (j.contains("d") && j["d"].get<std::size_t>() != m.size()) fail(where + ".d", "does not match the matrix count");
  try {
    return CommutingTuple(std::move(m));
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

}  // namespace agler::io
