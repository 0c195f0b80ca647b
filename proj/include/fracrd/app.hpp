#pragma once

#include "fracrd/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fracrd {

// Exit codes of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_blowup = 2 };

struct RunOutcome {
  int exit_code = exit_failure;
  std::string status;     // ok, blowup, config_error, error
  std::string message;
  std::string report_json;
  Norms final_norms;
  double t_final = 0.0;
  double sup_linf = 0.0;
  bool blowup = false;
  std::optional<double> t_blow;
  bool envelope_dominated = false;
};

// Runs one configuration and writes norms.csv, coeffs_final.csv and
// report.json into outdir. report.json is written on every exit path.
RunOutcome execute_run(const RunConfig& cfg, const std::string& outdir);

int cmd_run(const std::string& config_path, const std::string& outdir_override, std::ostream& out,
            std::ostream& err);
int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::string& config_path, const std::string& key,
              const std::vector<std::string>& values, const std::string& outdir_override,
              std::ostream& out, std::ostream& err);
int cmd_mlf_eval(double alpha, double beta, double z, std::ostream& out, std::ostream& err);

// Worker count for parallel sweeps: FRACRD_THREADS if set, else the hardware count.
unsigned thread_cap();

int cli_main(int argc, char** argv);

} // namespace fracrd
