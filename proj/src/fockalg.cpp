#include "qrabi/fockalg.hpp"

#include "qrabi/tolerances.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace qrabi {

namespace {

Operator make_mode_op(int cutoff, Matrix m, bool hermitian) {
  if (cutoff < 1) {
    throw std::invalid_argument("photon cutoff must be at least 1");
  }
  return Operator{std::move(m), BasisDescriptor::multi_mode({cutoff}, 0),
                  hermitian};
}

Operator make_qubit_op(Matrix m, bool hermitian) {
  return Operator{std::move(m), BasisDescriptor::qubits_only(1), hermitian};
}

}  // namespace

Operator annihilation_op(int cutoff) {
  Matrix a = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return make_mode_op(cutoff, std::move(a), false);
}

Operator creation_op(int cutoff) {
  Operator a = annihilation_op(cutoff);
  a.matrix.transposeInPlace();
  return a;
}

Operator number_op(int cutoff) {
  Matrix n = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) n(k, k) = static_cast<double>(k);
  return make_mode_op(cutoff, std::move(n), true);
}

Operator mode_identity(int cutoff) {
  return make_mode_op(cutoff, Matrix::Identity(cutoff + 1, cutoff + 1), true);
}

Operator qubit_identity() { return make_qubit_op(Matrix::Identity(2, 2), true); }

Operator sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return make_qubit_op(std::move(m), true);
}

Operator sigma_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, 1), Complex(0, -1), 0;
  return make_qubit_op(std::move(m), true);
}

Operator sigma_z() {
  Matrix m(2, 2);
  m << -1, 0, 0, 1;
  return make_qubit_op(std::move(m), true);
}

Operator sigma_plus() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1;  // |e><g|
  return make_qubit_op(std::move(m), false);
}

Operator sigma_minus() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1;  // |g><e|
  return make_qubit_op(std::move(m), false);
}

Operator identity_op(const BasisDescriptor& basis) {
  const Index d = basis.dimension();
  return Operator{Matrix::Identity(d, d), basis, true};
}

Operator tensor(std::span<const Operator> factors) {
  if (factors.empty()) {
    throw std::invalid_argument("tensor: no factors");
  }
  std::vector<int> cutoffs;
  int qubits = 0;
  Matrix acc = factors[0].matrix;
  bool hermitian = true;
  bool seen_qubits = false;
  for (size_t i = 0; i < factors.size(); ++i) {
    const BasisDescriptor& b = factors[i].basis;
    if (!b.mode_truncations.empty() && seen_qubits) {
      throw std::invalid_argument(
          "tensor: mode factors must precede qubit factors");
    }
    if (b.qubit_count > 0) seen_qubits = true;
    cutoffs.insert(cutoffs.end(), b.mode_truncations.begin(),
                   b.mode_truncations.end());
    qubits += b.qubit_count;
    hermitian = hermitian && factors[i].hermitian;
    if (i > 0) {
      acc = Eigen::kroneckerProduct(acc, factors[i].matrix).eval();
    }
  }
  return Operator{std::move(acc), BasisDescriptor(std::move(cutoffs), qubits),
                  hermitian};
}

Operator tensor(std::initializer_list<Operator> factors) {
  return tensor(std::span<const Operator>(factors.begin(), factors.size()));
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_basis(a.basis, b.basis, "operator product");
  return Operator{a.matrix * b.matrix, a.basis, false};
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_basis(a.basis, b.basis, "operator sum");
  return Operator{a.matrix + b.matrix, a.basis, a.hermitian && b.hermitian};
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_basis(a.basis, b.basis, "operator difference");
  return Operator{a.matrix - b.matrix, a.basis, a.hermitian && b.hermitian};
}

Operator operator*(Complex scalar, const Operator& a) {
  return Operator{scalar * a.matrix, a.basis,
                  a.hermitian && scalar.imag() == 0.0};
}

Operator operator*(double scalar, const Operator& a) {
  return Operator{scalar * a.matrix, a.basis, a.hermitian};
}

EigResult eig_hermitian(const Operator& op) {
  const Matrix& h = op.matrix;
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("eig_hermitian: matrix not square");
  }
  const double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol::hermiticity) {
    throw numerical_error("eig_hermitian: hermiticity deviation " +
                          std::to_string(dev));
  }
  EigResult out;
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h.real());
    if (solver.info() != Eigen::Success) {
      throw numerical_error("eig_hermitian: real solver failed");
    }
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) {
      throw numerical_error("eig_hermitian: solver failed");
    }
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
  }
  return out;
}

Operator commutator(const Operator& a, const Operator& b) {
  require_same_basis(a.basis, b.basis, "commutator");
  return Operator{a.matrix * b.matrix - b.matrix * a.matrix, a.basis, false};
}

double commutator_interior_norm(const Operator& a, const Operator& b,
                                int margin) {
  require_same_basis(a.basis, b.basis, "commutator_interior_norm");
  const BasisDescriptor& basis = a.basis;
  if (margin < 0) {
    throw std::invalid_argument("commutator_interior_norm: negative margin");
  }
  if (!basis.mode_truncations.empty()) {
    int min_cutoff = basis.mode_truncations[0];
    for (int n : basis.mode_truncations) min_cutoff = std::min(min_cutoff, n);
    if (margin >= min_cutoff) {
      throw std::invalid_argument(
          "commutator_interior_norm: margin must be below the smallest cutoff");
    }
  } else if (margin != 0) {
    throw std::invalid_argument(
        "commutator_interior_norm: margin must be 0 without photon modes");
  }

  const Matrix c = a.matrix * b.matrix - b.matrix * a.matrix;
  std::vector<Index> keep;
  std::vector<int> occ;
  int q = 0;
  for (Index i = 0; i < basis.dimension(); ++i) {
    basis.decode(i, occ, q);
    bool interior = true;
    for (size_t m = 0; m < occ.size(); ++m) {
      if (occ[m] > basis.mode_truncations[m] - margin) interior = false;
    }
    if (interior) keep.push_back(i);
  }
  double norm = 0.0;
  for (Index r : keep) {
    for (Index col : keep) {
      norm = std::max(norm, std::abs(c(r, col)));
    }
  }
  return norm;
}

std::vector<Vector> nullspace(const Matrix& m, double rel_tol) {
  if (rel_tol <= 0.0) {
    throw std::invalid_argument("nullspace: tolerance must be positive");
  }
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  Index rank = 0;
  if (sigma_max > 0.0) {
    for (Index i = 0; i < sigma.size(); ++i) {
      if (sigma(i) > rel_tol * sigma_max) ++rank;
    }
  }
  std::vector<Vector> kernel;
  for (Index j = rank; j < m.cols(); ++j) {
    kernel.push_back(svd.matrixV().col(j));
  }
  return kernel;
}

}  // namespace qrabi
