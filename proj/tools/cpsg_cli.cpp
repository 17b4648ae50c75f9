#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpsg/cpsg.h"

namespace {

enum Exit {
  kPass = 0,
  kFail = 1,
  kUnknownCommand = 2,
  kInvalidConfig = 3,
  kCapExceeded = 4,
  kNumerical = 5,
  kSearchFailed = 6,
  kInternal = 7,
};

int exit_for_status(int status) {
  switch (status) {
    case CPSG_UNKNOWN_COMMAND: return kUnknownCommand;
    case CPSG_INVALID_CONFIG:
    case CPSG_INVALID_ARGUMENT:
    case CPSG_DIMENSION_MISMATCH: return kInvalidConfig;
    case CPSG_CAP_EXCEEDED: return kCapExceeded;
    case CPSG_DEGENERATE_MODULUS:
    case CPSG_BRANCH_POINT:
    case CPSG_NON_GENERIC:
    case CPSG_SINGULAR:
    case CPSG_BRANCH_CUT:
    case CPSG_NOT_MONOMIAL: return kNumerical;
    case CPSG_SEARCH_FAILED: return kSearchFailed;
    default: return kInternal;
  }
}

std::vector<std::string> commands() {
  std::vector<std::string> v;
  for (size_t i = 0; i < cpsg_command_count(); ++i) v.emplace_back(cpsg_command_name(i));
  return v;
}

void print_usage(std::ostream& out) {
  out << "usage: cpsg <command> [options]\n\ncommands:\n";
  for (const auto& c : commands()) out << "  " << c << '\n';
  out << "\nrun 'cpsg <command> --help' for the options of a command\n";
}

// "1.5" or "1.5,-0.2" -> {"re": 1.5, "im": -0.2}
nlohmann::ordered_json parse_complex_flag(const std::string& text) {
  const auto comma = text.find(',');
  std::size_t used = 0;
  const double re = std::stod(text.substr(0, comma), &used);
  if (used != text.substr(0, comma).size()) throw std::invalid_argument(text);
  double im = 0.0;
  if (comma != std::string::npos) {
    const auto rest = text.substr(comma + 1);
    im = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
  }
  return {{"re", re}, {"im", im}};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "-h" || args[0] == "--help") {
    print_usage(args.empty() ? std::cerr : std::cout);
    return args.empty() ? kUnknownCommand : kPass;
  }

  // The command is one or two leading words; everything after is flags.
  std::string command = args[0];
  std::size_t consumed = 1;
  if ((args[0] == "verify" || args[0] == "curve") && args.size() > 1) {
    command += " " + args[1];
    consumed = 2;
  }
  const auto known = commands();
  if (std::find(known.begin(), known.end(), command) == known.end()) {
    std::cerr << "cpsg: unknown command '" << command << "'\n";
    print_usage(std::cerr);
    return kUnknownCommand;
  }

  CLI::App app{"cpsg " + command};
  app.name("cpsg " + command);
  std::string config_path;
  std::string output_path;
  std::optional<int> N, trials, L, M, steps;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> format;
  std::vector<std::string> tolerance_overrides;
  bool no_timestamp = false;
  bool background = false;
  const std::vector<std::string> complex_keys = {"k", "kappa", "alpha", "beta", "lambda", "mu", "P", "Q"};
  std::vector<std::optional<std::string>> complex_flags(complex_keys.size());

  app.add_option("--config", config_path, "JSON configuration file (default: $CPSG_CONFIG)");
  app.add_option("--output,-o", output_path, "write the report here instead of stdout");
  app.add_option("--N", N, "root-of-unity order");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--trials", trials, "number of trials");
  app.add_option("--tol", tol, "tolerance of the primary check");
  app.add_option("--tolerance", tolerance_overrides, "per-check tolerance, NAME=VALUE");
  app.add_option("--L", L, "lattice width");
  app.add_option("--M", M, "lattice height");
  app.add_option("--steps", steps, "evolution steps");
  app.add_option("--format", format, "json or csv");
  app.add_flag("--no-timestamp", no_timestamp, "omit the generated_at field");
  app.add_flag("--background", background, "evolve the constant background");
  for (std::size_t i = 0; i < complex_keys.size(); ++i) {
    app.add_option("--" + complex_keys[i], complex_flags[i], "complex value, RE or RE,IM");
  }

  std::vector<char*> rest;
  rest.push_back(argv[0]);
  for (std::size_t i = consumed; i < args.size(); ++i) rest.push_back(argv[i + 1]);
  try {
    app.parse(static_cast<int>(rest.size()), rest.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidConfig;
  }

  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  if (config_path.empty()) {
    if (const char* env = std::getenv("CPSG_CONFIG"); env && *env) config_path = env;
  }
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cpsg: cannot read config file '" << config_path << "'\n";
        return kInvalidConfig;
      }
      config = nlohmann::ordered_json::parse(in);
      if (!config.is_object()) {
        std::cerr << "cpsg: config file must hold a JSON object\n";
        return kInvalidConfig;
      }
    }
    if (N) config["N"] = *N;
    if (seed) config["seed"] = *seed;
    if (trials) config["trials"] = *trials;
    if (tol) config["tol"] = *tol;
    if (L) config["L"] = *L;
    if (M) config["M"] = *M;
    if (steps) config["steps"] = *steps;
    if (format) config["format"] = *format;
    if (no_timestamp) config["timestamp"] = false;
    if (background) config["background"] = true;
    for (std::size_t i = 0; i < complex_keys.size(); ++i) {
      if (complex_flags[i]) config[complex_keys[i]] = parse_complex_flag(*complex_flags[i]);
    }
    for (const auto& item : tolerance_overrides) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--tolerance expects NAME=VALUE");
      config["tolerances"][item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
  } catch (const std::exception& e) {
    std::cerr << "cpsg: invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  }

  cpsg_report* report = nullptr;
  const int status = cpsg_run(command.c_str(), config.dump().c_str(), &report);
  if (status != CPSG_OK) {
    std::cerr << "cpsg: " << cpsg_status_name(status) << ": " << cpsg_last_error() << '\n';
    return exit_for_status(status);
  }
  const std::string text = cpsg_report_text(report);
  const bool passed = cpsg_report_passed(report) != 0;
  cpsg_report_destroy(report);

  if (output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output_path, std::ios::binary);
    out << text;
    if (!out) {
      std::cerr << "cpsg: cannot write '" << output_path << "'\n";
      return kInternal;
    }
  }
  return passed ? kPass : kFail;
}
