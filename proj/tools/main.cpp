// carflow: CAR-flow laboratory over lattice cones.
//
// Subcommands:
//   validate  parse a config and validate the module against A + P <= A
//   kernel    print the kernel basis of the shift at --shift
//   symmetry  translation-witness classification of the module
//   suite     run the configured checks and emit a report
//   report    re-emit a saved JSON report
//
// Exit codes: 0 pass, 1 check failure, 2 config error, 3 resource cap.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "carflow/suite.hpp"

namespace {

using namespace carflow;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_out(const std::string& out_path, const std::string& bytes) {
  if (out_path.empty()) {
    std::cout << bytes;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + out_path);
  out << bytes;
}

Point parse_shift(const std::string& text, int dim) {
  Point p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      p.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("--shift: expected comma-separated integers, got \"" + text + "\"");
    }
  }
  if (static_cast<int>(p.size()) != dim)
    throw ConfigError("--shift: expected " + std::to_string(dim) + " coordinates");
  return p;
}

struct CommonOpts {
  std::string config_path;
  std::string format = "text";
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

suite::ExperimentConfig load_config(const CommonOpts& opts) {
  suite::ExperimentConfig cfg = suite::parse_config(slurp(opts.config_path));
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.tolerance) {
    if (!(*opts.tolerance > 0)) throw ConfigError("--tolerance must be positive");
    cfg.tolerance = *opts.tolerance;
  }
  return cfg;
}

int cmd_validate(const CommonOpts& opts) {
  const suite::ExperimentConfig cfg = load_config(opts);
  const lattice::ModuleSpec module = cfg.module();
  const lattice::ModuleValidation v =
      lattice::validate_module(module, cfg.cone(), cfg.window);
  if (opts.format == "json") {
    nlohmann::json j;
    j["config"] = suite::config_json(cfg);
    j["module_valid"] = v.ok();
    nlohmann::json viols = nlohmann::json::array();
    for (const auto& [y, g] : v.violations) viols.push_back({{"point", y}, {"generator", g}});
    j["violations"] = viols;
    write_out(opts.out_path, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "config ok: d=" << cfg.dimension << ", module form " << cfg.module_form << "\n";
    if (v.ok()) {
      os << "module property A + P <= A holds on the window\n";
    } else {
      os << "module property violated at " << v.violations.size() << " points, e.g. "
         << lattice::to_string(v.violations.front().first) << " + "
         << lattice::to_string(v.violations.front().second) << "\n";
    }
    write_out(opts.out_path, os.str());
  }
  return v.ok() ? 0 : 1;
}

int cmd_kernel(const CommonOpts& opts, const std::string& shift_text) {
  const suite::ExperimentConfig cfg = load_config(opts);
  const lattice::ConeSpec cone = cfg.cone();
  const Point x = shift_text.empty() ? cfg.cone_generators.front()
                                     : parse_shift(shift_text, cfg.dimension);
  if (!cone.contains(x))
    throw ConfigError("--shift " + lattice::to_string(x) + " is not in the cone");
  const std::vector<Point> basis = lattice::kernel_basis(cfg.module(), x, cfg.window);
  if (opts.format == "json") {
    nlohmann::json j;
    j["shift"] = x;
    j["count"] = basis.size();
    j["points"] = basis;
    write_out(opts.out_path, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "kernel of V_x^* at x = " << lattice::to_string(x) << ": " << basis.size()
       << " modes\n";
    for (const Point& p : basis) os << "  " << lattice::to_string(p) << "\n";
    write_out(opts.out_path, os.str());
  }
  return 0;
}

int cmd_symmetry(const CommonOpts& opts) {
  const suite::ExperimentConfig cfg = load_config(opts);
  const lattice::SymmetryResult r =
      lattice::symmetry_check(cfg.module(), cfg.search_box, cfg.window);
  if (opts.format == "json") {
    nlohmann::json j;
    j["verdict"] = r.verdict;
    j["witness"] = r.witness ? nlohmann::json(*r.witness) : nlohmann::json(nullptr);
    write_out(opts.out_path, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << r.verdict;
    if (r.witness) os << ", z = " << lattice::to_string(*r.witness);
    os << "\n";
    write_out(opts.out_path, os.str());
  }
  return 0;
}

int cmd_suite(const CommonOpts& opts) {
  const suite::ExperimentConfig cfg = load_config(opts);
  const suite::Report report = suite::run_suite(cfg);
  write_out(opts.out_path, opts.format == "json" ? suite::emit_report_json(report)
                                                 : suite::emit_report_text(report));
  return suite::exit_code(report);
}

int cmd_report(const std::string& in_path, const CommonOpts& opts) {
  const suite::Report report = suite::parse_report(slurp(in_path));
  write_out(opts.out_path, opts.format == "json" ? suite::emit_report_json(report)
                                                 : suite::emit_report_text(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CAR flows over lattice cones: constructions and operator-identity checks"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string shift_text;
  std::string report_in;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* c = cmd->add_option("--config", opts.config_path, "config file (JSON)");
    if (needs_config) c->required();
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--out", opts.out_path, "write output to a file");
    cmd->add_option("--seed", opts.seed, "override the config seed");
    cmd->add_option("--tolerance", opts.tolerance, "override the config tolerance");
  };

  auto* validate = app.add_subcommand("validate", "validate a config");
  add_common(validate, true);
  auto* kernel = app.add_subcommand("kernel", "print a kernel basis");
  add_common(kernel, true);
  kernel->add_option("--shift", shift_text, "cone element, comma-separated");
  auto* symmetry = app.add_subcommand("symmetry", "symmetry classification");
  add_common(symmetry, true);
  auto* suite_cmd = app.add_subcommand("suite", "run the check suite");
  add_common(suite_cmd, true);
  auto* report_cmd = app.add_subcommand("report", "re-emit a saved report");
  report_cmd->add_option("--in", report_in, "saved JSON report")->required();
  report_cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"json", "text"}));
  report_cmd->add_option("--out", opts.out_path, "write output to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(opts);
    if (kernel->parsed()) return cmd_kernel(opts, shift_text);
    if (symmetry->parsed()) return cmd_symmetry(opts);
    if (suite_cmd->parsed()) return cmd_suite(opts);
    if (report_cmd->parsed()) return cmd_report(report_in, opts);
  } catch (const carflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const carflow::CapExceeded& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
