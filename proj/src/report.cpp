#include "pcn/report.hpp"

#include <cstdio>

#include "pcn/rng.hpp"

namespace pcn {

std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

namespace {

struct Column {
  const char* name;
  double (*get)(const ExperimentRow&);
};

const Column kColumns[] = {
    {"r_k", [](const ExperimentRow& r) { return r.errors.r_k; }},
    {"K2", [](const ExperimentRow& r) { return r.K2(); }},
    {"K2U", [](const ExperimentRow& r) { return r.K2U(); }},
    {"r_m", [](const ExperimentRow& r) { return r.errors.r_m; }},
    {"Km", [](const ExperimentRow& r) { return r.Km(); }},
    {"KmU", [](const ExperimentRow& r) { return r.KmU(); }},
    {"r_c", [](const ExperimentRow& r) { return r.errors.r_c; }},
    {"Kc", [](const ExperimentRow& r) { return r.Kc(); }},
    {"KcU", [](const ExperimentRow& r) { return r.KcU(); }},
    {"eps1", [](const ExperimentRow& r) { return r.eps.eps1; }},
    {"eps2", [](const ExperimentRow& r) { return r.eps.eps2; }},
    {"ncn", [](const ExperimentRow& r) { return r.ncn; }},
    {"ncn_upper", [](const ExperimentRow& r) { return r.ncn_upper; }},
    {"mcn", [](const ExperimentRow& r) { return r.mcn; }},
    {"mcn_upper", [](const ExperimentRow& r) { return r.mcn_upper; }},
    {"ccn", [](const ExperimentRow& r) { return r.ccn; }},
    {"ccn_upper", [](const ExperimentRow& r) { return r.ccn_upper; }},
};

const Column kStructuredColumns[] = {
    {"s_ncn", [](const ExperimentRow& r) { return r.structured->ncn; }},
    {"s_mcn", [](const ExperimentRow& r) { return r.structured->mcn; }},
    {"s_ccn", [](const ExperimentRow& r) { return r.structured->ccn; }},
};

}  // namespace

void write_experiment_csv(std::ostream& out, const ExperimentConfig& config,
                          const std::vector<ExperimentRow>& rows) {
  out << "# pcn " << kVersion << "\n"
      << "# family " << to_string(config.family) << "\n"
      << "# seed " << config.seed << "\n"
      << "# s " << config.s << "\n"
      << "# rng " << kRngAlgorithm << "\n";
  out << "selector,q";
  for (const Column& c : kColumns) out << ',' << c.name;
  if (config.structured)
    for (const Column& c : kStructuredColumns) out << ',' << c.name;
  out << '\n';
  for (const ExperimentRow& row : rows) {
    out << to_string(row.selector) << ',' << row.q;
    for (const Column& c : kColumns) out << ',' << format_sci(c.get(row));
    if (row.structured)
      for (const Column& c : kStructuredColumns) out << ',' << format_sci(c.get(row));
    out << '\n';
  }
}

nlohmann::json experiment_json(const ExperimentConfig& config,
                               const std::vector<ExperimentRow>& rows) {
  nlohmann::json doc;
  doc["version"] = kVersion;
  doc["family"] = std::string(to_string(config.family));
  doc["seed"] = config.seed;
  doc["s"] = config.s;
  doc["rng"] = kRngAlgorithm;
  doc["rows"] = nlohmann::json::array();
  for (const ExperimentRow& row : rows) {
    nlohmann::json r;
    r["selector"] = std::string(to_string(row.selector));
    r["q"] = row.q;
    for (const Column& c : kColumns) r[c.name] = c.get(row);
    if (row.structured)
      for (const Column& c : kStructuredColumns) r[c.name] = c.get(row);
    doc["rows"].push_back(std::move(r));
  }
  return doc;
}

}  // namespace pcn
