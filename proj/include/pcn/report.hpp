#ifndef PCN_REPORT_HPP_
#define PCN_REPORT_HPP_

// Experiment reports. CSV: '#' header lines (version, family, seed, s, RNG),
// one column per ExperimentRow field in table order, numbers as %.9e.
// JSON: the same content with shortest round-trip doubles.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcn/perturb_lab.hpp"

namespace pcn {

inline constexpr const char* kVersion = PCN_VERSION;

// 10 significant digits in scientific notation.
std::string format_sci(double v);

void write_experiment_csv(std::ostream& out, const ExperimentConfig& config,
                          const std::vector<ExperimentRow>& rows);

nlohmann::json experiment_json(const ExperimentConfig& config,
                               const std::vector<ExperimentRow>& rows);

}  // namespace pcn

#endif  // PCN_REPORT_HPP_
