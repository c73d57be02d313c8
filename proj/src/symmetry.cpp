#include "qrabi/symmetry.hpp"

#include "qrabi/tolerances.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace qrabi {

namespace {

int excitations(int qubit_code) {
  return ((qubit_code >> 1) & 1) + (qubit_code & 1);
}

Operator ensure_hermitian(Operator op) {
  const double dev = (op.matrix - op.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol::hermiticity) {
    throw numerical_error("symmetry operator lost hermiticity: deviation " +
                          std::to_string(dev));
  }
  op.hermitian = true;
  return op;
}

}  // namespace

Operator parity_op(int cutoff) {
  const BasisDescriptor basis = BasisDescriptor::single_mode(cutoff);
  Matrix m = Matrix::Zero(basis.dimension(), basis.dimension());
  for (int n = 0; n <= cutoff; ++n) {
    for (int q = 0; q < 4; ++q) {
      const Index i = n * 4 + q;
      m(i, i) = ((n + excitations(q)) % 2 == 0) ? 1.0 : -1.0;
    }
  }
  return Operator{std::move(m), basis, true};
}

Operator excitation_number_op(int cutoff) {
  const BasisDescriptor basis = BasisDescriptor::single_mode(cutoff);
  Matrix m = Matrix::Zero(basis.dimension(), basis.dimension());
  for (int n = 0; n <= cutoff; ++n) {
    for (int q = 0; q < 4; ++q) {
      const Index i = n * 4 + q;
      m(i, i) = n + excitations(q);
    }
  }
  return Operator{std::move(m), basis, true};
}

std::vector<Index> excitation_sector_indices(int cutoff, int value) {
  std::vector<Index> out;
  for (int n = 0; n <= cutoff; ++n) {
    for (int q = 0; q < 4; ++q) {
      if (n + excitations(q) == value) out.push_back(n * 4 + q);
    }
  }
  return out;
}

namespace {

// Mode-space block table of the non-diagonal conserved operator, indexed by
// qubit pairs in the order {ee, eg, ge, gg}; empty entries are zero.
std::array<std::array<Matrix, 4>, 4> j_blocks(int cutoff, double delta,
                                              double g) {
  const Index d = cutoff + 1;
  const Matrix a = annihilation_op(cutoff).matrix;
  const Matrix ad = creation_op(cutoff).matrix;
  const Matrix asym = ad - a;
  const Matrix x = ad + a;
  const Matrix id = Matrix::Identity(d, d);
  std::array<std::array<Matrix, 4>, 4> blocks;
  for (auto& row : blocks) {
    for (auto& b : row) b = Matrix::Zero(d, d);
  }
  blocks[0][0] = asym + (4.0 * g + delta / g) * id;
  blocks[0][2] = x;
  blocks[1][1] = -asym - (delta / g) * id;
  blocks[1][2] = -4.0 * g * id;
  blocks[1][3] = -x;
  blocks[2][0] = -x;
  blocks[2][1] = -4.0 * g * id;
  blocks[2][2] = -asym + (delta / g) * id;
  blocks[3][1] = x;
  blocks[3][3] = asym + (4.0 * g - delta / g) * id;
  return blocks;
}

void require_j_preconditions(double omega, double delta1, double delta2,
                             double eps1, double eps2, double g1, double g2) {
  const double t = tol::precondition_abs;
  if (std::abs(omega - 1.0) > t) {
    throw precondition_error("conserved operator requires omega = 1");
  }
  if (std::abs(delta1 - delta2) > t) {
    throw precondition_error("conserved operator requires equal splittings");
  }
  if (std::abs(eps1 - omega / 2.0) > t || std::abs(eps2) > t) {
    throw precondition_error(
        "conserved operator requires eps1 = omega/2 and eps2 = 0");
  }
  if (std::abs(g1 - g2) > t) {
    throw precondition_error("conserved operator requires equal couplings");
  }
  if (std::abs(g1) <= t) {
    throw precondition_error("conserved operator is singular at zero coupling");
  }
}

// Assemble sum_{r,c} parity * block(r,c) (x) |q_r><q_c| with extra identity
// factors on residual modes. Qubit-pair order {ee, eg, ge, gg} maps to codes
// {3, 2, 1, 0}.
Operator assemble_j(double delta, double g, int cutoff1,
                    std::span<const int> cutoffs_rest) {
  const auto blocks = j_blocks(cutoff1, delta, g);
  const Index d1 = cutoff1 + 1;
  Matrix parity = Matrix::Zero(d1, d1);
  for (Index n = 0; n < d1; ++n) parity(n, n) = (n % 2 == 0) ? 1.0 : -1.0;

  constexpr std::array<int, 4> code = {3, 2, 1, 0};
  std::vector<int> cutoffs{cutoff1};
  cutoffs.insert(cutoffs.end(), cutoffs_rest.begin(), cutoffs_rest.end());
  const BasisDescriptor basis(cutoffs, 2);
  Index rest_dim = 1;
  for (int n : cutoffs_rest) rest_dim *= n + 1;

  Matrix m = Matrix::Zero(basis.dimension(), basis.dimension());
  const Matrix rest = Matrix::Identity(rest_dim, rest_dim);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      Matrix qb = Matrix::Zero(4, 4);
      qb(code[r], code[c]) = 1.0;
      const Matrix mode = parity * blocks[r][c];
      Matrix full = Eigen::kroneckerProduct(mode, rest).eval();
      m += Eigen::kroneckerProduct(full, qb).eval();
    }
  }
  return ensure_hermitian(Operator{std::move(m), basis, false});
}

}  // namespace

Operator hidden_symmetry_J(const Aqrm2Params& p, int cutoff) {
  p.validate();
  if (cutoff < 2) {
    throw std::invalid_argument("photon cutoff must be at least 2");
  }
  require_j_preconditions(p.omega, p.delta1, p.delta2, p.eps1, p.eps2, p.g1,
                          p.g2);
  return assemble_j(p.delta1, p.g1, cutoff, {});
}

Operator hidden_symmetry_J_multimode(const MultimodeParams& p, int cutoff1,
                                     std::span<const int> cutoffs_rest) {
  p.validate();
  if (static_cast<int>(cutoffs_rest.size()) != p.mode_count() - 1) {
    throw std::invalid_argument(
        "expected one cutoff for the coupled mode plus one per residual mode");
  }
  if (cutoff1 < 2) {
    throw std::invalid_argument("photon cutoff must be at least 2");
  }
  for (int n : cutoffs_rest) {
    if (n < 1) {
      throw std::invalid_argument("photon cutoff must be at least 1");
    }
  }
  if (!p.equal_frequencies(1e-12)) {
    throw precondition_error(
        "collective-mode operator requires equal mode frequencies");
  }
  if (!p.columns_proportional(tol::ratio_cross_product)) {
    throw precondition_error(
        "collective-mode operator requires proportional coupling columns");
  }
  double gb2 = 0.0;
  for (int i = 0; i < p.mode_count(); ++i) {
    if (std::abs(p.g_col2[i] - p.g_col1[i]) > tol::precondition_abs) {
      throw precondition_error(
          "conserved operator requires equal coupling columns");
    }
    gb2 += p.g_col1[i] * p.g_col1[i];
  }
  const double gb = std::sqrt(gb2);
  require_j_preconditions(p.omegas[0], p.delta1, p.delta2, p.eps1, p.eps2, gb,
                          gb);
  return assemble_j(p.delta1, gb, cutoff1, cutoffs_rest);
}

Operator dark_projector(const StateVector& psi) {
  if (std::abs(psi.norm() - 1.0) > tol::precondition_abs) {
    throw precondition_error("dark projector expects a normalized state");
  }
  return Operator{psi.amplitudes * psi.amplitudes.adjoint(), psi.basis, true};
}

RealMatrix bogoliubov_coeffs(std::span<const double> couplings) {
  const int m = static_cast<int>(couplings.size());
  if (m < 1) {
    throw std::invalid_argument("at least one coupling required");
  }
  for (double g : couplings) {
    if (g == 0.0) {
      throw precondition_error(
          "mode mixing is undefined for an exactly-zero coupling");
    }
  }
  std::vector<double> prefix(m);  // prefix[k] = sum_{i<=k} g_i^2
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    acc += couplings[i] * couplings[i];
    prefix[i] = acc;
  }
  RealMatrix t = RealMatrix::Zero(m, m);
  const double total = std::sqrt(prefix[m - 1]);
  for (int i = 0; i < m; ++i) t(0, i) = couplings[i] / total;
  for (int j = 1; j < m; ++j) {
    const double denom = std::sqrt(prefix[j] * prefix[j - 1]);
    for (int i = 0; i < j; ++i) {
      t(j, i) = couplings[i] * couplings[j] / denom;
    }
    t(j, j) = -prefix[j - 1] / denom;
  }
  return t;
}

Operator collective_number_op(const RealMatrix& t, int j,
                              std::span<const int> cutoffs) {
  const int m = static_cast<int>(cutoffs.size());
  if (t.rows() != m || t.cols() != m) {
    throw std::invalid_argument("mixing matrix shape must match mode count");
  }
  if (j < 0 || j >= m) {
    throw std::invalid_argument("collective mode index out of range");
  }
  const double orth_dev =
      (t * t.transpose() - RealMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
  if (orth_dev > 1e-10) {
    throw std::invalid_argument("mixing matrix is not orthogonal");
  }
  const Operator iq = qubit_identity();
  BasisDescriptor basis({cutoffs.begin(), cutoffs.end()}, 2);
  Operator sum{Matrix::Zero(basis.dimension(), basis.dimension()), basis, true};
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      const double coeff = t(j, i) * t(j, k);
      if (coeff == 0.0) continue;
      std::vector<Operator> factors;
      for (int mode = 0; mode < m; ++mode) {
        if (mode == i && mode == k) {
          factors.push_back(number_op(cutoffs[mode]));
        } else if (mode == i) {
          factors.push_back(creation_op(cutoffs[mode]));
        } else if (mode == k) {
          factors.push_back(annihilation_op(cutoffs[mode]));
        } else {
          factors.push_back(mode_identity(cutoffs[mode]));
        }
      }
      factors.push_back(iq);
      factors.push_back(iq);
      sum = sum + coeff * tensor(factors);
    }
  }
  return ensure_hermitian(std::move(sum));
}

std::vector<Operator> mode_number_ops(const RealMatrix& t,
                                      std::span<const int> cutoffs) {
  std::vector<Operator> out;
  for (int j = 1; j < static_cast<int>(cutoffs.size()); ++j) {
    out.push_back(collective_number_op(t, j, cutoffs));
  }
  return out;
}

SymmetryReport check_symmetry(const std::string& name, const Operator& sym,
                              const Operator& hamiltonian, int margin,
                              double threshold) {
  SymmetryReport report;
  report.operator_name = name;
  report.margin = margin;
  report.threshold = threshold;
  report.commutator_norm = commutator_interior_norm(sym, hamiltonian, margin);
  report.commutes = report.commutator_norm <= threshold;
  return report;
}

}  // namespace qrabi
