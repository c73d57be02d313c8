#pragma once

#include "qrabi/models.hpp"

namespace qrabi {

// Parity: diagonal phase (-1)^(photon number + qubit excitations).
Operator parity_op(int cutoff);

// Total excitation count: photon number plus one per excited qubit.
Operator excitation_number_op(int cutoff);

// Basis indices whose excitation count equals `value`, ascending.
std::vector<Index> excitation_sector_indices(int cutoff, int value);

// Non-diagonal conserved operator of the biased model at equal splittings,
// eps1 = omega/2, eps2 = 0 and equal couplings; requires omega = 1 and g != 0.
Operator hidden_symmetry_J(const Aqrm2Params& p, int cutoff);

// Collective-mode lift: same operator acting on the coupled mode of the
// transformed multimode model, identity on the residual modes. Reduces to
// hidden_symmetry_J for a single mode.
Operator hidden_symmetry_J_multimode(const MultimodeParams& p, int cutoff1,
                                     std::span<const int> cutoffs_rest);

// Rank-one conserved projector onto a dark state.
Operator dark_projector(const StateVector& psi);

// Orthogonal mode-mixing matrix whose first row is proportional to the
// coupling vector; rows are returned as matrix rows. Errors on any
// exactly-zero coupling.
RealMatrix bogoliubov_coeffs(std::span<const double> couplings);

// Collective occupation operator of mixed mode j (row j of T) on the
// unmixed multimode basis, identity on the qubits.
Operator collective_number_op(const RealMatrix& t, int j,
                              std::span<const int> cutoffs);

// Occupations of the decoupled collective modes j = 2..M.
std::vector<Operator> mode_number_ops(const RealMatrix& t,
                                      std::span<const int> cutoffs);

struct SymmetryReport {
  std::string operator_name;
  double commutator_norm = 0.0;
  int margin = 0;
  double threshold = 0.0;
  bool commutes = false;
};

SymmetryReport check_symmetry(const std::string& name, const Operator& sym,
                              const Operator& hamiltonian, int margin,
                              double threshold);

}  // namespace qrabi
