#include <CLI11.hpp>
#include <iostream>

#include "ctlab/experiments.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string seed;
  std::string trials;
  std::string fine_n;
  std::string workers;
  std::string n_list;
  std::string slope_floor;
};

void attach_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "key=value config file");
  cmd->add_option("--seed", f.seed, "RNG seed (overrides config)");
  cmd->add_option("--out-dir", f.out_dir, "output directory (overrides config)");
  cmd->add_option("--trials", f.trials, "Monte Carlo trials (overrides config)");
  cmd->add_option("--fine-n", f.fine_n, "fine-grid interval count (overrides config)");
  cmd->add_option("--workers", f.workers, "worker threads (overrides config)");
  cmd->add_option("--n-list", f.n_list, "comma-separated sample counts (overrides config)");
  cmd->add_option("--slope-floor", f.slope_floor, "rate-fit pass floor (overrides config)");
}

ctlab::ExperimentConfig build_config(const std::string& experiment, const CommonFlags& f) {
  ctlab::ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = ctlab::ExperimentConfig::from_file(f.config_path);
  cfg.experiment = experiment;  // the subcommand decides, config cannot redirect it
  if (!f.seed.empty()) cfg.set("seed", f.seed);
  if (!f.out_dir.empty()) cfg.set("out_dir", f.out_dir);
  if (!f.trials.empty()) cfg.set("trials", f.trials);
  if (!f.fine_n.empty()) cfg.set("fine_N", f.fine_n);
  if (!f.workers.empty()) cfg.set("workers", f.workers);
  if (!f.n_list.empty()) cfg.set("n_list", f.n_list);
  if (!f.slope_floor.empty()) cfg.set("slope_floor", f.slope_floor);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous-time Gaussian channel sampling laboratory"};
  app.require_subcommand(1);

  CommonFlags flags;
  const std::vector<std::string> experiments = {"nonfeedback-gap", "feedback-gap",
                                                "maxgauss", "sanity"};
  for (const auto& name : experiments) {
    auto* cmd = app.add_subcommand(name);
    attach_common(cmd, flags);
  }

  CLI11_PARSE(app, argc, argv);

  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    const auto cfg = build_config(experiment, flags);
    const auto report = ctlab::run_experiment(cfg);
    ctlab::write_report_files(report, cfg.out_dir);
    for (const auto& c : report.checks)
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
                << (c.detail.empty() ? "" : "  [" + c.detail + "]") << '\n';
    std::cout << (report.pass() ? "OK" : "FAILED") << "  (" << report.wall_clock_s
              << " s, outputs in " << cfg.out_dir << ")\n";
    return report.pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
