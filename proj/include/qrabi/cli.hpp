#pragma once

#include "qrabi/spectra.hpp"

#include <string>
#include <vector>

namespace qrabi::cli {

// Inputs for the filtered-ladder comparison: a multimode sweep with
// per-level residual-mode occupations, and a single-mode sweep over the same
// grid at the collectively rescaled coupling.
struct FilteredLadderInputs {
  std::vector<double> grid;
  RealMatrix multi_levels;   // grid point x level, ascending rows
  RealMatrix multi_nb;       // matching residual-mode occupations
  RealMatrix single_levels;  // grid point x level, ascending rows
};

struct LadderComparePoint {
  double gprime = 0.0;
  int survivors = 0;   // multimode levels passing the occupation filter
  double max_diff = 0.0;
  bool pass = false;
};

struct LadderCompareReport {
  std::vector<LadderComparePoint> points;
  int keep = 0;
  double level_tol = 0.0;
  double occupation_tol = 0.0;
  double worst_diff = 0.0;
  bool pass = false;
};

// Keep only multimode levels whose residual-mode occupation is below
// occupation_tol, then compare the lowest `keep` survivors against the
// single-mode levels point by point.
LadderCompareReport compare_filtered_ladders(const FilteredLadderInputs& in,
                                             int keep, double level_tol,
                                             double occupation_tol);

// Canonical JSON config reproducing one figure panel (1a, 1b, 2a, 2b, 3a-3d).
std::string figure_preset_text(const std::string& panel);

// Parse and execute a config, writing artifact files plus manifest.json into
// out_dir. Throws config_error, precondition_error or numerical_error.
void run_config_text(const std::string& config_text, const std::string& out_dir,
                     int threads = 1);

// Full command-line entry point; maps errors to exit codes 2/3/4.
int main_entry(int argc, char** argv);

}  // namespace qrabi::cli
