#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ctlab/extremes.hpp"
#include "ctlab/feedmi.hpp"
#include "ctlab/gaussmi.hpp"

namespace ctlab {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kVersionStamp = "ctlab 0.1.0";

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunReport {
  std::string experiment;
  std::vector<CheckResult> checks;
  std::vector<std::string> csv_lines;   // header + rows, the emitted CSV
  std::vector<std::string> loglog_lines;  // (log delta, log gap) plot data
  std::string json_summary;             // serialized report
  double wall_clock_s = 0.0;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Flat key=value config with CLI flag overrides (flags win).
struct ExperimentConfig {
  std::string experiment;  // nonfeedback-gap | feedback-gap | maxgauss | sanity

  // psd (nonfeedback experiments)
  std::string psd_kind = "blf";  // blf | file | zero
  double P = 1.0;
  double W = 4.0;
  std::string psd_file;

  // drift (feedback experiments)
  std::string drift_family = "linear_feedback";  // linear_feedback | message_scaled | message_free
  double theta = 1.0;
  double kappa = 1.0;
  std::vector<double> messages{-1.0, 1.0};
  std::vector<double> prior{0.5, 0.5};

  double T = 8.0;
  std::vector<int> n_list;
  int fine_N = 4096;
  long trials = 100000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  int workers = 1;

  double oracle_tol = 1e-3;
  double slope_floor = 0.40;
  double eps = 0.01;          // sup-norm moment exponent
  double clip_fraction = 1e-3;

  static ExperimentConfig from_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  void validate() const;

  PsdSpec make_psd() const;
  DriftSpec make_drift() const;
};

RunReport run_nonfeedback_gap(const ExperimentConfig& config);
RunReport run_feedback_gap(const ExperimentConfig& config);
RunReport run_maxgauss(const ExperimentConfig& config);
RunReport run_sanity(const ExperimentConfig& config);

// dispatch on config.experiment
RunReport run_experiment(const ExperimentConfig& config);

// files written: <out_dir>/<experiment>.csv, <experiment>_summary.json and,
// for gap experiments, <experiment>_loglog.dat with (log delta, log gap) rows
void write_report_files(const RunReport& report, const std::string& out_dir);

}  // namespace ctlab
