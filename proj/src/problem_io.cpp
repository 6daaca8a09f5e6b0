#include "pcn/problem_io.hpp"

#include <filesystem>
#include <fstream>

namespace pcn {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw InputError(InputError::Kind::Malformed, what);
}

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) malformed(std::string("missing field '") + name + "'");
  return doc.at(name);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) malformed(what + " must contain numbers only");
  return v.get<double>();
}

Index dimension(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    malformed(std::string("'") + name + "' must be a non-negative integer");
  }
  return static_cast<Index>(v.get<long long>());
}

std::optional<Index> optional_dimension(const json& doc, const char* name) {
  if (!doc.contains(name)) return std::nullopt;
  return dimension(doc, name);
}

// Row-major matrix from an array of rows or a flat array of rows * cols numbers.
// A missing expected dimension (-1) is inferred from nested input.
Matrix matrix(const json& doc, const char* name, Index rows, Index cols) {
  const json& v = field(doc, name);
  if (!v.is_array()) malformed(std::string("'") + name + "' must be an array");
  const std::string what = std::string("'") + name + "'";

  if (!v.empty() && v.front().is_array()) {
    const Index r = static_cast<Index>(v.size());
    const Index c = static_cast<Index>(v.front().size());
    if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols)) {
      malformed(what + " has shape " + std::to_string(r) + "x" + std::to_string(c) + ", expected " +
                std::to_string(rows) + "x" + std::to_string(cols));
    }
    Matrix out(r, c);
    for (Index i = 0; i < r; ++i) {
      const json& row = v[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Index>(row.size()) != c) malformed(what + " is ragged");
      for (Index j = 0; j < c; ++j) out(i, j) = number(row[static_cast<std::size_t>(j)], what);
    }
    return out;
  }
  if (rows < 0 || cols < 0) malformed(what + " must be an array of rows");
  if (static_cast<Index>(v.size()) != rows * cols) {
    malformed(what + " must hold " + std::to_string(rows * cols) + " numbers");
  }
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out(i, j) = number(v[static_cast<std::size_t>(i * cols + j)], what);
  return out;
}

Vector vector(const json& doc, const char* name, Index size) {
  const json& v = field(doc, name);
  const std::string what = std::string("'") + name + "'";
  if (!v.is_array()) malformed(what + " must be an array");
  if (size >= 0 && static_cast<Index>(v.size()) != size) {
    malformed(what + " must have length " + std::to_string(size));
  }
  Vector out(static_cast<Index>(v.size()));
  for (Index i = 0; i < out.size(); ++i) out[i] = number(v[static_cast<std::size_t>(i)], what);
  return out;
}

}  // namespace

json read_json_file(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw InputError(InputError::Kind::FileNotFound, "cannot open '" + path + "'");
  }
  std::ifstream in(path);
  if (!in) throw InputError(InputError::Kind::FileNotFound, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    malformed("'" + path + "' is not valid JSON: " + e.what());
  }
}

DsppProblem parse_dspp_problem(const json& doc) {
  const Index n = dimension(doc, "n");
  const Index m = dimension(doc, "m");
  const Index p = dimension(doc, "p");
  const Index l = n + m + p;
  try {
    DsppProblem out{DsppBlocks(matrix(doc, "A", n, n), matrix(doc, "B", m, n),
                               matrix(doc, "C", p, m), matrix(doc, "D", m, m),
                               matrix(doc, "E", p, p), vector(doc, "b", l)),
                    std::nullopt};
    if (doc.contains("L")) out.custom_L = matrix(doc, "L", -1, l);
    return out;
  } catch (const Error& e) {
    malformed(e.what());
  }
}

EilsProblem parse_eils_problem(const json& doc) {
  const auto n = optional_dimension(doc, "n");
  const auto m = optional_dimension(doc, "m");
  const auto p = optional_dimension(doc, "p");
  Matrix M = matrix(doc, "M", n.value_or(-1), m.value_or(-1));
  Matrix C = matrix(doc, "C", p.value_or(-1), M.cols());
  const Index n1 = dimension(doc, "n1");
  const Index n2 = dimension(doc, "n2");
  Vector b = vector(doc, "b", M.rows());
  Vector d = vector(doc, "d", C.rows());
  try {
    return EilsProblem(std::move(M), std::move(C), n1, n2, std::move(b), std::move(d));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DimensionMismatch || e.code() == ErrorCode::InvalidArgument) {
      malformed(e.what());
    }
    throw;
  }
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace pcn
