#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcn/eils.hpp"
#include "pcn/partial_cn.hpp"
#include "pcn/problem_io.hpp"
#include "pcn/report.hpp"

namespace pcn::cli {

namespace {

using nlohmann::json;

[[noreturn]] void usage(const std::string& what) { throw CliError(kExitUsage, what); }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

Index parse_index(const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    usage("'" + text + "' is not an integer");
  }
  if (used != text.size()) usage("'" + text + "' is not an integer");
  return static_cast<Index>(v);
}

}  // namespace

std::vector<Index> parse_q_list(const std::string& text) {
  std::vector<Index> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 2 && parts.size() != 3) usage("--q range must be first:last[:step]");
    const Index first = parse_index(parts[0]);
    const Index last = parse_index(parts[1]);
    const Index step = parts.size() == 3 ? parse_index(parts[2]) : 1;
    if (step <= 0) usage("--q step must be positive");
    for (Index q = first; q <= last; q += step) out.push_back(q);
  } else {
    for (const std::string& part : split(text, ',')) out.push_back(parse_index(part));
  }
  if (out.empty()) usage("--q selects no values");
  for (Index q : out)
    if (q < 2) usage("--q values must be >= 2");
  return out;
}

StructureSpec parse_structure_spec(const std::string& text) {
  StructureSpec spec;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) usage("--structure entries must look like A=symmetric");
    const std::string block = item.substr(0, eq);
    StructureKind kind;
    try {
      kind = parse_structure_kind(item.substr(eq + 1));
    } catch (const Error& e) {
      usage(e.what());
    }
    if (block == "A") {
      spec.A = kind;
    } else if (block == "D") {
      spec.D = kind;
    } else if (block == "E") {
      spec.E = kind;
    } else {
      usage("--structure applies to blocks A, D and E only");
    }
  }
  return spec;
}

CliConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Partial condition numbers of double saddle point systems", "pcn"};
  app.require_subcommand(1, 1);

  std::string input, selector_text, cn_text, structure_text, q_text, out, format_text, family;
  bool upper = false, structured = false;
  int s = 8;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--selector", selector_text, "full, x, y, z or custom (comma list)");
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--out", out, "output path (default stdout)");
    sub->add_option("--format", format_text, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_analysis = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--input", input, "problem JSON file")->required();
    sub->add_option("--cn", cn_text, "ncn, mcn, ccn (comma list)");
    sub->add_flag("--upper-bounds", upper, "also report the upper bounds");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "condition numbers of a problem file");
  add_analysis(analyze);
  analyze->add_option("--structure", structure_text, "A=kind,D=kind,E=kind");

  CLI::App* structured_cmd =
      app.add_subcommand("structured", "structured and unstructured condition numbers");
  add_analysis(structured_cmd);
  structured_cmd->add_option("--structure", structure_text, "A=kind,D=kind,E=kind");

  CLI::App* eils = app.add_subcommand("eils", "equality-constrained indefinite least squares");
  add_analysis(eils);

  CLI::App* experiment = app.add_subcommand("experiment", "perturbation experiment on a test family");
  add_common(experiment);
  experiment->add_option("family", family, "example1 or example2")
      ->required()
      ->check(CLI::IsMember({"example1", "example2"}));
  experiment->add_option("--q", q_text, "grid sizes: first:last:step or a comma list")->required();
  experiment->add_option("--s", s, "perturbation exponent, dX = 10^-s G.*X")
      ->check(CLI::Range(1, 300));
  experiment->add_flag("--structured", structured, "add structured condition numbers (example2)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw CliError(kExitOk, app.help());
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }

  CliConfig config;
  if (analyze->parsed()) config.command = Command::Analyze;
  if (structured_cmd->parsed()) config.command = Command::Structured;
  if (eils->parsed()) config.command = Command::Eils;
  if (experiment->parsed()) config.command = Command::Experiment;

  config.seed = seed;
  config.out = out;
  config.upper_bounds = upper;
  config.format = config.command == Command::Experiment ? Format::Csv : Format::Json;
  if (format_text == "csv") config.format = Format::Csv;
  if (format_text == "json") config.format = Format::Json;

  if (selector_text.empty()) {
    config.selectors = {config.command == Command::Eils ? SelectorKind::YPart : SelectorKind::Full};
  } else {
    for (const std::string& name : split(selector_text, ',')) {
      try {
        config.selectors.push_back(parse_selector_kind(name));
      } catch (const Error& e) {
        usage(e.what());
      }
    }
  }

  if (!cn_text.empty()) {
    config.cn = split(cn_text, ',');
    for (const std::string& name : config.cn)
      if (name != "ncn" && name != "mcn" && name != "ccn") usage("unknown --cn entry '" + name + "'");
  }

  if (config.command == Command::Experiment) {
    config.family = parse_family(family);
    config.q_list = parse_q_list(q_text);
    config.s = s;
    config.structured_experiment = structured;
    if (structured && config.family != Family::Example2) {
      usage("--structured is available for example2 only");
    }
    if (std::find(config.selectors.begin(), config.selectors.end(), SelectorKind::Custom) !=
        config.selectors.end()) {
      usage("experiments support the full, x, y and z selectors");
    }
  } else {
    config.input = input;
    if (!structure_text.empty()) config.structure = parse_structure_spec(structure_text);
    if (config.command == Command::Structured && !config.structure) config.structure = StructureSpec{};
    if (config.command == Command::Eils &&
        std::find(config.selectors.begin(), config.selectors.end(), SelectorKind::Custom) !=
            config.selectors.end()) {
      usage("eils supports the full, x, y and z selectors");
    }
    try {
      read_json_file(input);
    } catch (const InputError& e) {
      throw CliError(e.kind() == InputError::Kind::FileNotFound ? kExitFileNotFound : kExitMalformed,
                     e.what());
    }
  }
  return config;
}

namespace {

bool wants(const CliConfig& config, const char* name) {
  return std::find(config.cn.begin(), config.cn.end(), name) != config.cn.end();
}

// Fails with InvariantViolation when lhs exceeds rhs beyond relative 1e-12.
void assert_below(double lhs, double rhs, const std::string& what) {
  if (!(lhs <= rhs * (1.0 + 1e-12))) {
    throw Error(ErrorCode::InvariantViolation, what + " violated: " + format_sci(lhs) + " > " +
                                                   format_sci(rhs));
  }
}

struct Entry {
  std::string selector;
  std::string name;
  double value;
};

json header_json(const CliConfig& config, const char* command) {
  json doc;
  doc["version"] = kVersion;
  doc["command"] = command;
  doc["input"] = config.input;
  return doc;
}

std::string render(const CliConfig& config, const json& doc, const std::vector<Entry>& entries) {
  if (config.format == Format::Json) return doc.dump(2) + "\n";
  std::ostringstream out;
  out << "# pcn " << kVersion << "\n# command " << doc["command"].get<std::string>() << "\n";
  out << "selector,quantity,value\n";
  for (const Entry& e : entries) out << e.selector << ',' << e.name << ',' << format_sci(e.value) << '\n';
  return out.str();
}

std::string analyze(const CliConfig& config) {
  std::optional<DsppProblem> loaded;
  try {
    loaded.emplace(parse_dspp_problem(read_json_file(config.input)));
  } catch (const InputError& e) {
    throw CliError(e.kind() == InputError::Kind::FileNotFound ? kExitFileNotFound : kExitMalformed,
                   e.what());
  }
  const DsppProblem& problem = *loaded;
  const DsppBlocks& blocks = problem.blocks;
  const Dims dims = blocks.dims();
  const DsppSystem system(blocks);
  const double psi = assemble(blocks).norm();
  const double chi = blocks.rhs().norm();
  std::optional<StructureTriple> triple;
  if (config.structure) {
    triple.emplace(StructureTriple::of(config.structure->A, config.structure->D,
                                       config.structure->E, dims));
  }

  json doc = header_json(config, config.command == Command::Structured ? "structured" : "analyze");
  doc["dims"] = {{"n", dims.n}, {"m", dims.m}, {"p", dims.p}};
  doc["weights"] = {{"psi", psi}, {"chi", chi}};
  doc["solution"] = to_json(system.solution().w());
  if (triple) {
    doc["structure"] = {{"A", std::string(to_string(triple->A.kind()))},
                        {"D", std::string(to_string(triple->D.kind()))},
                        {"E", std::string(to_string(triple->E.kind()))}};
  }
  doc["results"] = json::array();
  std::vector<Entry> entries;

  for (SelectorKind kind : config.selectors) {
    if (kind == SelectorKind::Custom && !problem.custom_L) {
      throw CliError(kExitMalformed, "selector 'custom' needs an \"L\" matrix in the problem file");
    }
    const Selector sel =
        make_selector(kind, dims, kind == SelectorKind::Custom ? problem.custom_L : std::nullopt);
    const PartialConditioner cond(system, sel);
    const std::string sel_name(to_string(kind));
    json r;
    r["selector"] = sel_name;
    auto put = [&](const std::string& name, double v) {
      r[name] = v;
      entries.push_back({sel_name, name, v});
    };

    std::optional<InfBounds> bounds;
    if (config.upper_bounds && (wants(config, "mcn") || wants(config, "ccn"))) bounds = cond.inf_upper();
    if (wants(config, "ncn")) {
      const double v = cond.ncn(psi, chi, NcnPath::Kron).value;
      put("ncn", v);
      if (config.upper_bounds) {
        const double u = cond.ncn_upper(psi, chi).value;
        assert_below(v, u, "ncn <= ncn_upper");
        put("ncn_upper", u);
      }
      if (triple) {
        const double sv =
            structured_ncn(cond, PerturbationWeights::scalar(psi, chi), XiChoice::ncn(), *triple).value;
        assert_below(sv, v, "structured ncn <= ncn");
        put("s_ncn", sv);
      }
    }
    for (InfFlavor flavor : {InfFlavor::Mixed, InfFlavor::Componentwise}) {
      const bool mixed = flavor == InfFlavor::Mixed;
      const std::string name = mixed ? "mcn" : "ccn";
      if (!wants(config, name.c_str())) continue;
      const double v = cond.inf(flavor).value;
      put(name, v);
      if (bounds) {
        const double u = mixed ? bounds->mcn_upper.value : bounds->ccn_upper.value;
        assert_below(v, u, name + " <= " + name + "_upper");
        put(name + "_upper", u);
      }
      if (triple) {
        const double sv = structured_inf_cn(cond, flavor, *triple).value;
        assert_below(sv, v, "structured " + name + " <= " + name);
        put("s_" + name, sv);
      }
    }
    doc["results"].push_back(std::move(r));
  }
  return render(config, doc, entries);
}

std::string eils(const CliConfig& config) {
  std::optional<EilsProblem> problem;
  try {
    problem.emplace(parse_eils_problem(read_json_file(config.input)));
  } catch (const InputError& e) {
    throw CliError(e.kind() == InputError::Kind::FileNotFound ? kExitFileNotFound : kExitMalformed,
                   e.what());
  }
  const EilsProblem& prob = *problem;
  const EilsSolution sol = solve_eils(prob);
  const Dims dims{prob.n(), prob.m(), prob.p()};
  const double psi = std::hypot(prob.M().norm(), prob.C().norm());
  const double chi = std::hypot(prob.b().norm(), prob.d().norm());

  json doc = header_json(config, "eils");
  doc["dims"] = {{"n", dims.n}, {"m", dims.m}, {"p", dims.p}, {"n1", prob.n1()}, {"n2", prob.n2()}};
  doc["weights"] = {{"psi", psi}, {"chi", chi}};
  doc["y"] = to_json(sol.y);
  doc["lambda"] = to_json(sol.lambda);
  doc["x"] = to_json(sol.x);
  doc["r"] = to_json(sol.r);
  doc["results"] = json::array();
  std::vector<Entry> entries;

  for (SelectorKind kind : config.selectors) {
    const Selector sel = make_selector(kind, dims);
    const std::string sel_name(to_string(kind));
    json r;
    r["selector"] = sel_name;
    auto put = [&](const std::string& name, double v) {
      r[name] = v;
      entries.push_back({sel_name, name, v});
    };
    if (wants(config, "ncn")) {
      put("ncn", eils_cn(prob, sel, EilsWeights::scalar(psi, chi), XiChoice::ncn(), NormKind::Two).value);
    }
    if (wants(config, "mcn")) {
      put("mcn", eils_cn(prob, sel, EilsWeights::from_data(prob), XiChoice::mcn(), NormKind::Inf).value);
    }
    if (wants(config, "ccn")) {
      put("ccn", eils_cn(prob, sel, EilsWeights::from_data(prob), XiChoice::ccn(), NormKind::Inf).value);
    }
    doc["results"].push_back(std::move(r));
  }
  return render(config, doc, entries);
}

std::string experiment(const CliConfig& config) {
  ExperimentConfig exp;
  exp.family = config.family;
  exp.q_list = config.q_list;
  exp.s = config.s;
  exp.seed = config.seed;
  exp.selectors = config.selectors;
  exp.structured = config.structured_experiment;
  const std::vector<ExperimentRow> rows = run_experiment(exp);
  for (const ExperimentRow& row : rows) {
    const auto violations = dominance_violations(row, exp.s);
    if (!violations.empty()) {
      throw Error(ErrorCode::InvariantViolation,
                  "q=" + std::to_string(row.q) + " selector " +
                      std::string(to_string(row.selector)) + ": " + violations.front());
    }
  }
  if (config.format == Format::Json) return experiment_json(exp, rows).dump(2) + "\n";
  std::ostringstream out;
  write_experiment_csv(out, exp, rows);
  return out.str();
}

void emit(const CliConfig& config, const std::string& text) {
  if (config.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
  if (!file) throw CliError(kExitFileNotFound, "cannot write '" + config.out + "'");
  file << text;
}

}  // namespace

int run(const CliConfig& config, std::ostream& diag) {
  try {
    std::string text;
    switch (config.command) {
      case Command::Analyze:
      case Command::Structured: text = analyze(config); break;
      case Command::Eils: text = eils(config); break;
      case Command::Experiment: text = experiment(config); break;
    }
    emit(config, text);
    return kExitOk;
  } catch (const CliError& e) {
    diag << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const Error& e) {
    json record;
    record["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    diag << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    try {
      emit(config, record.dump(2) + "\n");
    } catch (const CliError&) {
    }
    return kExitNumerical;
  }
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(parse_args(args), std::cerr);
  } catch (const CliError& e) {
    (e.exit_code() == kExitOk ? std::cout : std::cerr) << e.what() << (e.exit_code() == kExitOk ? "" : "\n");
    return e.exit_code();
  }
}

}  // namespace pcn::cli
