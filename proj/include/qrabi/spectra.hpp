#pragma once

#include "qrabi/basis.hpp"

#include <functional>
#include <optional>
#include <utility>

namespace qrabi {

// Model handle for sweeps: a Hamiltonian factory over the swept coupling, an
// optional conserved-sector restriction and an optional pinned eigenstate
// with its known energy.
struct SweepModel {
  std::string name;
  std::function<Operator(double g, int cutoff)> hamiltonian;
  std::function<std::vector<Index>(int cutoff)> sector;
  std::function<StateVector(double g, int cutoff)> dark_state;
  double dark_energy = 0.0;

  bool has_sector() const { return static_cast<bool>(sector); }
  bool has_dark_state() const { return static_cast<bool>(dark_state); }
};

struct SweepPoint {
  RealVector values;  // lowest `keep`, ascending
  Matrix vectors;     // matching eigenvectors (sector coordinates if any)
};

SweepPoint eval_point(const SweepModel& model, double g, int cutoff, int keep);

struct SweepResult {
  SweepModel model;
  std::vector<double> g_grid;
  int cutoff = 0;
  int keep = 0;
  RealMatrix levels;          // grid point x level, each row ascending
  RealMatrix dark_overlaps;   // |<level|pinned state>|^2, or 0x0
  std::vector<Matrix> vectors;
};

SweepResult sweep(const SweepModel& model, std::span<const double> g_grid,
                  int cutoff, int keep);

struct ConvergenceReport {
  std::vector<int> cutoffs;
  std::vector<double> changes;  // max level shift between consecutive cutoffs
  int k = 0;
  double tolerance = 0.0;
  bool converged = false;
};

ConvergenceReport convergence_check(const SweepModel& model, double g,
                                    std::span<const int> cutoffs, int k,
                                    double tolerance);

struct CrossingEvent {
  enum class Kind { dark_crossing, symmetry_sector_crossing, avoided, unclassified };

  double g_star = 0.0;
  double energy = 0.0;
  std::pair<int, int> level_indices{0, 0};
  Kind kind = Kind::unclassified;
  std::optional<std::pair<double, double>> labels;
  double gap = 0.0;
};

const char* to_string(CrossingEvent::Kind kind);

// Locate couplings where a mobile level crosses the pinned energy, by
// counting levels below and above a band around that energy and bisecting
// every transversal count change on the grid. Count changes where a level
// merely enters or leaves the band (a degenerate pair splitting off the
// pinned energy) are not crossings and produce no event.
std::vector<CrossingEvent> detect_dark_crossings(const SweepResult& result,
                                                 double energy);

// Scan adjacent-level gaps for interior minima, refine each by golden-section
// search and classify the close approaches.
std::vector<CrossingEvent> detect_level_crossings(const SweepResult& result,
                                                  const Operator* label_op = nullptr);

// Classify one candidate degeneracy between the two given level indices.
CrossingEvent classify_crossing(const SweepModel& model, double g_star,
                                std::pair<int, int> level_indices, int cutoff,
                                int keep, const Operator* label_op = nullptr);

// Per-level expectation values of an observable across a sweep; degenerate
// clusters are simultaneously diagonalized so the labels are well defined.
RealMatrix expectation_labels(const SweepResult& result, const Operator& op,
                              double cluster_tol);

// Decoupled displaced-oscillator ladder: n*omega - g^2/omega +- eps.
std::pair<double, double> baseline_energy(int n, double g, double eps,
                                          double omega);

}  // namespace qrabi
