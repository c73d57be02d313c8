#include "qrabi/basis.hpp"

#include <limits>

namespace qrabi {

BasisDescriptor::BasisDescriptor(std::vector<int> truncations, int qubits)
    : mode_truncations(std::move(truncations)), qubit_count(qubits) {
  if (qubit_count < 0) {
    throw std::invalid_argument("qubit count must be non-negative");
  }
  for (int n : mode_truncations) {
    if (n < 1) {
      throw std::invalid_argument("photon cutoff must be at least 1");
    }
  }
  (void)dimension();  // overflow guard
}

BasisDescriptor BasisDescriptor::single_mode(int cutoff, int qubits) {
  return BasisDescriptor({cutoff}, qubits);
}

BasisDescriptor BasisDescriptor::multi_mode(std::vector<int> cutoffs,
                                            int qubits) {
  return BasisDescriptor(std::move(cutoffs), qubits);
}

BasisDescriptor BasisDescriptor::qubits_only(int qubits) {
  return BasisDescriptor({}, qubits);
}

Index BasisDescriptor::dimension() const {
  Index dim = qubit_dim();
  for (int n : mode_truncations) {
    if (dim > std::numeric_limits<Index>::max() / (n + 1)) {
      throw std::invalid_argument("basis dimension overflows");
    }
    dim *= n + 1;
  }
  return dim;
}

Index BasisDescriptor::index(std::span<const int> occupations,
                             int qubit_code) const {
  if (static_cast<size_t>(occupations.size()) != mode_truncations.size()) {
    throw std::invalid_argument("occupation list length mismatch");
  }
  if (qubit_code < 0 || qubit_code >= qubit_dim()) {
    throw std::invalid_argument("qubit code out of range");
  }
  Index idx = 0;
  for (size_t i = 0; i < mode_truncations.size(); ++i) {
    if (occupations[i] < 0 || occupations[i] > mode_truncations[i]) {
      throw std::invalid_argument("occupation out of range");
    }
    idx = idx * (mode_truncations[i] + 1) + occupations[i];
  }
  return idx * qubit_dim() + qubit_code;
}

void BasisDescriptor::decode(Index index, std::vector<int>& occupations,
                             int& qubit_code) const {
  if (index < 0 || index >= dimension()) {
    throw std::invalid_argument("basis index out of range");
  }
  qubit_code = static_cast<int>(index % qubit_dim());
  index /= qubit_dim();
  occupations.assign(mode_truncations.size(), 0);
  for (size_t i = mode_truncations.size(); i-- > 0;) {
    occupations[i] = static_cast<int>(index % (mode_truncations[i] + 1));
    index /= mode_truncations[i] + 1;
  }
}

void StateVector::normalize() {
  const double n = amplitudes.norm();
  if (n == 0.0) {
    throw std::invalid_argument("cannot normalize a zero state");
  }
  amplitudes /= n;
}

void require_same_basis(const BasisDescriptor& a, const BasisDescriptor& b,
                        const char* context) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(context) + ": basis mismatch");
  }
}

}  // namespace qrabi
