#pragma once

#include "qrabi/fockalg.hpp"

#include <array>

namespace qrabi {

// H = omega a'a + g1 s1x (a'+a) + g2 s2x (a'+a)
//       + delta1 s1z + delta2 s2z + eps1 s1x + eps2 s2x
struct Aqrm2Params {
  double omega = 1.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;

  void validate() const;
};

// H = omega a'a + delta1 s1z + delta2 s2z
//       + g1 (a s1+ + a' s1-) + g2 (a s2+ + a' s2-)
struct Jc2Params {
  double omega = 1.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;

  double detuning1() const { return 2.0 * delta1 - omega; }
  double detuning2() const { return 2.0 * delta2 - omega; }
  void validate() const;
};

// H = sum_i omega_i a_i'a_i + sum_i (a_i'+a_i)(g_i1 s1x + g_i2 s2x)
//       + delta1 s1z + delta2 s2z + eps1 s1x + eps2 s2x
struct MultimodeParams {
  std::vector<double> omegas;
  std::vector<double> g_col1;  // couplings to qubit 1, one per mode
  std::vector<double> g_col2;  // couplings to qubit 2, one per mode
  double delta1 = 0.0;
  double delta2 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;

  int mode_count() const { return static_cast<int>(omegas.size()); }
  void validate() const;
  // True when the two coupling columns are proportional: all cross products
  // g_i1 g_j2 - g_j1 g_i2 vanish within tol.
  bool columns_proportional(double tol) const;
  bool equal_frequencies(double tol) const;
};

Operator build_aqrm2(const Aqrm2Params& p, int cutoff);
Operator build_jc2(const Jc2Params& p, int cutoff);
Operator build_multimode(const MultimodeParams& p, std::span<const int> cutoffs);

// Same physics as build_multimode for equal frequencies and proportional
// coupling columns, assembled directly in the collective-mode basis where
// only the first mode couples to the qubits.
Operator build_transformed_multimode(const MultimodeParams& p, int cutoff1,
                                     std::span<const int> cutoffs_rest);

// Eigenvalues of the qubit-only part (photon field dropped), ascending.
std::array<double, 4> qubit_block_spectrum(const Aqrm2Params& p);

}  // namespace qrabi
