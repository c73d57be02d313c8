#pragma once

#include "qrabi/models.hpp"

namespace qrabi {

enum class Branch : int { plus = +1, minus = -1 };

inline int branch_sign(Branch b) { return static_cast<int>(b); }

enum class Construction { closed_form, nullspace_solve };

struct DarkStateResult {
  StateVector state;
  double energy = 0.0;
  Branch branch = Branch::plus;
  Construction construction = Construction::closed_form;
};

// Bias magnitude that decouples a one-photon eigenstate, as a function of the
// qubit splittings (all in units of the mode frequency). Throws
// no_dark_bias_error when no real bias exists for the given splittings.
double epsilon_condition(double delta1, double delta2);

// One-photon eigenstate of the biased two-qubit model at energy omega.
// Requires g2 = s g1 and eps2 = s eps1 with s the branch sign, and eps1 on
// the bias condition; equal splittings select the singlet form instead and
// lift the bias constraint.
DarkStateResult dark_state_aqrm2(const Aqrm2Params& p, Branch branch,
                                 int cutoff);

// Bias-free variant: requires eps1 = eps2 = 0, delta1 + delta2 = omega and
// g2 = s g1.
DarkStateResult dark_state_aqrm2_unbiased(const Aqrm2Params& p, Branch branch,
                                          int cutoff);

// Rotating-wave dark state in the excitation sector n_exc + 2: requires
// delta1 + delta2 = omega. cutoff = -1 picks the smallest usable cutoff.
DarkStateResult jc_dark_state(int n_exc, const Jc2Params& p, int cutoff = -1);

// Degenerate partner mixing the qubit singlet into the same sector: requires
// delta1 + delta2 = omega and g2 = s g1.
DarkStateResult jc_dark_state_mixed(int n_exc, const Jc2Params& p,
                                    Branch branch, int cutoff = -1);

// Multimode one-photon eigenstate with the photon in the collective mode;
// same qubit-parameter conditions as dark_state_aqrm2, plus equal mode
// frequencies and g_col2 = s g_col1.
DarkStateResult dark_state_multimode(const MultimodeParams& p, Branch branch,
                                     std::span<const int> cutoffs);

// Independent oracle: exhaustive kernel solve of the eigenvalue equations
// restricted to at most one photon, with no closed-form input. Returns every
// normalized solution at the requested energy (empty when none exists).
std::vector<DarkStateResult> one_photon_ansatz_solve(const Aqrm2Params& p,
                                                     double energy);

// ||H psi - E psi|| for a normalized state.
double residual(const Operator& h, const StateVector& psi, double energy);

}  // namespace qrabi
