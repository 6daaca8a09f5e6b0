#ifndef PCN_TOOLS_CLI_HPP_
#define PCN_TOOLS_CLI_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcn/dspp.hpp"
#include "pcn/perturb_lab.hpp"
#include "pcn/structured_cn.hpp"

namespace pcn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFileNotFound = 3;
inline constexpr int kExitMalformed = 4;
inline constexpr int kExitNumerical = 5;

// Carries the process exit status; exit 0 is used for --help.
class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& what)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

enum class Command { Analyze, Experiment, Eils, Structured };
enum class Format { Csv, Json };

struct StructureSpec {
  StructureKind A = StructureKind::Full;
  StructureKind D = StructureKind::Full;
  StructureKind E = StructureKind::Full;
};

struct CliConfig {
  Command command = Command::Analyze;
  Family family = Family::Example1;
  std::string input;
  std::vector<SelectorKind> selectors;
  std::vector<std::string> cn{"ncn", "mcn", "ccn"};
  bool upper_bounds = false;
  std::optional<StructureSpec> structure;
  bool structured_experiment = false;
  std::vector<Index> q_list;
  int s = 8;
  std::uint64_t seed = 0;
  std::string out;
  Format format = Format::Json;
};

// "4:16:2" (first:last:step), "4:8", "4,6,8" or "4".
std::vector<Index> parse_q_list(const std::string& text);
// "A=symmetric,D=toeplitz,E=toeplitz"; omitted blocks stay full.
StructureSpec parse_structure_spec(const std::string& text);

// args excludes the program name. Throws CliError.
CliConfig parse_args(const std::vector<std::string>& args);

// Writes the report to config.out (stdout when empty) and returns the exit
// status. Numerical failures write {"error": {"code", "message"}} instead.
int run(const CliConfig& config, std::ostream& diag);

int main_entry(int argc, char** argv);

}  // namespace pcn::cli

#endif  // PCN_TOOLS_CLI_HPP_
