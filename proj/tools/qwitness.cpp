// qwitness: command-line front end for the quantumness-witness library.
//
//   qwitness <verify|bounds|optimize|witness|contextuality>
//            [--config path] [--n N] [--state ghz|mixed|product|noisy-ghz:v]
//            [--optimize] [--random k] [--seed s] [--out path]
//
// Flags override fields of the --config document. The report goes to stdout
// (and to --out when given); diagnostics go to stderr.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwitness/app.hpp"

namespace {

using qwitness::json;
namespace app = qwitness::app;

int emit(const app::RunReport& report, const std::optional<std::string>& out_path) {
  const std::string text = app::render(report.document);
  std::cout << text;
  if (out_path) {
    std::ofstream f(*out_path, std::ios::binary);
    if (!f) {
      std::cerr << "qwitness: cannot write " << *out_path << "\n";
      return app::kInvalidConfig;
    }
    f << text;
  }
  if (report.document.contains("error"))
    std::cerr << "qwitness: " << report.document["error"].get<std::string>() << "\n";
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Quantumness witnesses for CHSH, four-cycle noncontextuality and Svetlichny "
               "inequalities"};
  std::string command;
  std::string config_path, state, out_path, fault;
  std::size_t n = 0;
  int random = 0;
  std::uint64_t seed = 0;
  bool optimize = false;

  cli.add_option("command", command, "verify | bounds | optimize | witness | contextuality")
      ->required()
      ->check(CLI::IsMember(app::commands()));
  auto* opt_config = cli.add_option("--config", config_path, "JSON config document");
  auto* opt_n = cli.add_option("--n", n, "number of parties");
  auto* opt_state = cli.add_option("--state", state, "ghz | mixed | product | noisy-ghz:v");
  cli.add_flag("--optimize", optimize, "optimize measurement settings");
  auto* opt_random = cli.add_option("--random", random, "number of random settings draws");
  auto* opt_seed = cli.add_option("--seed", seed, "seed for random draws and optimizer restarts");
  auto* opt_out = cli.add_option("--out", out_path, "also write the report to this file");
  auto* opt_fault = cli.add_option("--inject-fault", fault, "test hook: 'sign'")->group("");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : app::kInvalidConfig;
  }

  app::RunConfig cfg;
  try {
    if (*opt_config) {
      std::ifstream f(config_path);
      if (!f) throw qwitness::ConfigError("cannot open config file " + config_path);
      json doc;
      try {
        doc = json::parse(f);
      } catch (const json::parse_error& e) {
        throw qwitness::ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      cfg = app::config_from_json(doc);
      if (!cfg.command.empty() && cfg.command != command)
        std::cerr << "qwitness: command '" << command << "' overrides config command '"
                  << cfg.command << "'\n";
    }
    cfg.command = command;
    if (*opt_n) cfg.n_parties = n;
    if (*opt_state) cfg.state = app::StateSpec::parse(state);
    if (optimize) cfg.optimize = true;
    if (*opt_random) cfg.random_trials = random;
    if (*opt_seed) cfg.seed = seed;
    if (*opt_out) cfg.output_path = out_path;
    if (*opt_fault) cfg.fault = fault;
  } catch (const qwitness::Error& e) {
    std::cerr << "qwitness: " << e.what() << "\n";
    return app::kInvalidConfig;
  }

  return emit(app::run(cfg), cfg.output_path);
}
