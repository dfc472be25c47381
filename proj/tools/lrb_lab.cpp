#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lrlab/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lrb-lab: commuting lattice dynamics and bound verification"};
  app.require_subcommand(0, 1);

  bool list = false;
  app.add_flag("--list-experiments", list, "print the known experiment names and exit");

  std::string config_path, output_dir = ".";
  int threads = 1;
  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--output-dir", output_dir, "directory for report files");
  run->add_option("--threads", threads, "worker threads for grid evaluation");

  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& name : lrlab::experiment_names()) std::cout << name << "\n";
    return 0;
  }
  if (!run->parsed()) {
    std::cerr << app.help();
    return 2;
  }

  nlohmann::json cfg;
  try {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "error: cannot open config file: " << config_path << "\n";
      return 2;
    }
    cfg = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
    return 2;
  }

  try {
    lrlab::RunResult res = lrlab::run_config(cfg, output_dir, threads);
    std::cout << "rows: " << res.report.rows.size() << "  min_slack: " << res.report.min_slack
              << "  violations: " << res.report.violations << "\n"
              << "wrote " << res.csv_path << " and " << res.summary_path << "\n";
    return res.report.violations == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
