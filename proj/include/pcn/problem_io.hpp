#ifndef PCN_PROBLEM_IO_HPP_
#define PCN_PROBLEM_IO_HPP_

// JSON problem files.
//
// DSPP:  {"n": .., "m": .., "p": .., "A": .., "B": .., "C": .., "D": .., "E": .., "b": [..]}
//        optional "L": custom selector (k x l)
// EILS:  {"M": .., "C": .., "n1": .., "n2": .., "b": [..], "d": [..]}
//
// Matrices are row-major: either an array of rows or a flat array whose shape
// follows from the dimension fields. D is stored un-negated.

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pcn/dspp.hpp"
#include "pcn/eils.hpp"

namespace pcn {

class InputError : public std::runtime_error {
 public:
  enum class Kind { FileNotFound, Malformed };

  InputError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct DsppProblem {
  DsppBlocks blocks;
  std::optional<Matrix> custom_L;
};

// Throws InputError(FileNotFound) or InputError(Malformed).
nlohmann::json read_json_file(const std::string& path);

// Shape or type errors raise InputError(Malformed).
DsppProblem parse_dspp_problem(const nlohmann::json& doc);
// Invariant failures of the EILS data (rank, definiteness) propagate as pcn::Error.
EilsProblem parse_eils_problem(const nlohmann::json& doc);

nlohmann::json to_json(const Matrix& m);  // array of rows
nlohmann::json to_json(const Vector& v);

}  // namespace pcn

#endif  // PCN_PROBLEM_IO_HPP_
