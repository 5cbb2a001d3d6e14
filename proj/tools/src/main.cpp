#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "netpublic/best_response.hpp"
#include "netpublic_cli/scenario.hpp"

namespace cli = netpublic::cli;

int main(int argc, char** argv) {
  CLI::App app{"Run a network public goods scenario and write a CSV or JSON report"};
  std::string config_path;
  std::string out_path;
  std::string format;
  std::string mode;
  std::uint64_t seed = 0;

  app.add_option("--config", config_path, "Scenario file (JSON)")->required();
  app.add_option("--out", out_path, "Report path; stdout when omitted");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = app.add_option("--seed", seed, "Overrides the scenario seed");
  app.add_option("--mode", mode, "exact or structural")
      ->check(CLI::IsMember({"exact", "structural"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  cli::ScenarioConfig config;
  try {
    config = cli::load_config(config_path);
    if (!out_path.empty()) config.out_path = out_path;
    if (!format.empty()) config.format = format == "json" ? cli::Format::Json : cli::Format::Csv;
    if (*seed_opt) config.seed = seed;
    if (!mode.empty()) config.mode = netpublic::parse_search_mode(mode);
  } catch (const cli::ConfigError& e) {
    std::cerr << "netpublic: config error: " << e.what() << '\n';
    return cli::kExitConfig;
  }
  return cli::run_scenario(config, std::cerr);
}
