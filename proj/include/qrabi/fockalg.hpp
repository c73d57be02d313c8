#pragma once

#include "qrabi/basis.hpp"

#include <initializer_list>

namespace qrabi {

// Single-mode ladder operators on the truncated Fock space {|0>,...,|N>}.
Operator annihilation_op(int cutoff);
Operator creation_op(int cutoff);
Operator number_op(int cutoff);
Operator mode_identity(int cutoff);

// Single-qubit operators in the {|g>, |e>} basis: sigma_z|e> = +|e>,
// sigma_x|g> = |e>, sigma_minus = |g><e|.
Operator qubit_identity();
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
Operator sigma_plus();
Operator sigma_minus();

Operator identity_op(const BasisDescriptor& basis);

// Kronecker product respecting the global layout: every mode factor must
// precede every qubit factor.
Operator tensor(std::span<const Operator> factors);
Operator tensor(std::initializer_list<Operator> factors);

Operator operator*(const Operator& a, const Operator& b);
Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(Complex scalar, const Operator& a);
Operator operator*(double scalar, const Operator& a);

struct EigResult {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns, vectors.col(k) <-> values(k)
};

// Dense Hermitian diagonalization with a real-symmetric fast path.
// Rejects operators whose hermiticity deviation exceeds tol::hermiticity.
EigResult eig_hermitian(const Operator& op);

// Max-norm of [A, B] restricted to rows and columns whose occupations all
// satisfy n_i <= N_i - margin, screening out truncation-boundary artifacts.
double commutator_interior_norm(const Operator& a, const Operator& b,
                                int margin);

Operator commutator(const Operator& a, const Operator& b);

// Orthonormal kernel basis of a rectangular matrix via SVD; a singular value
// counts as zero below rel_tol times the largest singular value.
std::vector<Vector> nullspace(const Matrix& m, double rel_tol);

}  // namespace qrabi
