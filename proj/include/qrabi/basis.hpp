#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrabi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Error taxonomy used across the toolkit. precondition_error marks violated
// physical parameter conditions, config_error unusable input files,
// numerical_error a failed numerical contract. The CLI maps them to exit
// codes 3, 2 and 4 respectively.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class no_dark_bias_error : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor-product basis layout: photon modes first (slowest), qubits last
// (fastest). The two-qubit block is ordered {gg, ge, eg, ee}, first qubit
// varying slowest. Global index = row-major over (n_1, ..., n_M, q).
struct BasisDescriptor {
  std::vector<int> mode_truncations;  // per-mode photon cutoff, levels 0..N_i
  int qubit_count = 0;

  BasisDescriptor() = default;
  BasisDescriptor(std::vector<int> truncations, int qubits);

  static BasisDescriptor single_mode(int cutoff, int qubits = 2);
  static BasisDescriptor multi_mode(std::vector<int> cutoffs, int qubits = 2);
  static BasisDescriptor qubits_only(int qubits);

  Index qubit_dim() const { return Index{1} << qubit_count; }
  Index dimension() const;
  Index index(std::span<const int> occupations, int qubit_code) const;
  void decode(Index index, std::vector<int>& occupations, int& qubit_code) const;

  bool operator==(const BasisDescriptor&) const = default;
};

struct Operator {
  Matrix matrix;
  BasisDescriptor basis;
  bool hermitian = false;
};

struct StateVector {
  Vector amplitudes;
  BasisDescriptor basis;
  std::string label;

  double norm() const { return amplitudes.norm(); }
  void normalize();
};

void require_same_basis(const BasisDescriptor& a, const BasisDescriptor& b,
                        const char* context);

}  // namespace qrabi
