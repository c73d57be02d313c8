#include "qrabi/models.hpp"

#include "qrabi/tolerances.hpp"

#include <cmath>
#include <iostream>

namespace qrabi {

namespace {

bool finite(double x) { return std::isfinite(x); }

// Construction from real coefficients is exactly symmetric; verify and mark.
Operator ensure_hermitian(Operator op) {
  const double dev = (op.matrix - op.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol::hermiticity) {
    throw numerical_error("hamiltonian assembly lost hermiticity: deviation " +
                          std::to_string(dev));
  }
  op.hermitian = true;
  return op;
}

void require_cutoff(int cutoff) {
  if (cutoff < 2) {
    throw std::invalid_argument("photon cutoff must be at least 2");
  }
}

}  // namespace

void Aqrm2Params::validate() const {
  if (!(finite(omega) && finite(delta1) && finite(delta2) && finite(g1) &&
        finite(g2) && finite(eps1) && finite(eps2))) {
    throw std::invalid_argument("model parameters must be finite");
  }
  if (omega <= 0.0) {
    throw std::invalid_argument("mode frequency must be positive");
  }
}

void Jc2Params::validate() const {
  if (!(finite(omega) && finite(delta1) && finite(delta2) && finite(g1) &&
        finite(g2))) {
    throw std::invalid_argument("model parameters must be finite");
  }
  if (omega <= 0.0) {
    throw std::invalid_argument("mode frequency must be positive");
  }
}

void MultimodeParams::validate() const {
  const size_t m = omegas.size();
  if (m < 1) {
    throw std::invalid_argument("multimode model needs at least one mode");
  }
  if (g_col1.size() != m || g_col2.size() != m) {
    throw std::invalid_argument("coupling columns must have one entry per mode");
  }
  for (double w : omegas) {
    if (!finite(w) || w <= 0.0) {
      throw std::invalid_argument("mode frequencies must be positive");
    }
  }
  for (size_t i = 0; i < m; ++i) {
    if (!finite(g_col1[i]) || !finite(g_col2[i])) {
      throw std::invalid_argument("couplings must be finite");
    }
  }
  if (!(finite(delta1) && finite(delta2) && finite(eps1) && finite(eps2))) {
    throw std::invalid_argument("model parameters must be finite");
  }
}

bool MultimodeParams::columns_proportional(double tol) const {
  const int m = mode_count();
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (std::abs(g_col1[i] * g_col2[j] - g_col1[j] * g_col2[i]) > tol) {
        return false;
      }
    }
  }
  return true;
}

bool MultimodeParams::equal_frequencies(double tol) const {
  for (double w : omegas) {
    if (std::abs(w - omegas[0]) > tol * std::max(1.0, std::abs(omegas[0]))) {
      return false;
    }
  }
  return true;
}

Operator build_aqrm2(const Aqrm2Params& p, int cutoff) {
  p.validate();
  require_cutoff(cutoff);
  const Operator n = number_op(cutoff);
  const Operator x = creation_op(cutoff) + annihilation_op(cutoff);
  const Operator im = mode_identity(cutoff);
  const Operator iq = qubit_identity();
  const Operator sx = sigma_x();
  const Operator sz = sigma_z();
  Operator h = p.omega * tensor({n, iq, iq});
  h = h + p.g1 * tensor({x, sx, iq}) + p.g2 * tensor({x, iq, sx});
  h = h + p.delta1 * tensor({im, sz, iq}) + p.delta2 * tensor({im, iq, sz});
  h = h + p.eps1 * tensor({im, sx, iq}) + p.eps2 * tensor({im, iq, sx});
  return ensure_hermitian(std::move(h));
}

Operator build_jc2(const Jc2Params& p, int cutoff) {
  p.validate();
  require_cutoff(cutoff);
  const Operator n = number_op(cutoff);
  const Operator a = annihilation_op(cutoff);
  const Operator ad = creation_op(cutoff);
  const Operator im = mode_identity(cutoff);
  const Operator iq = qubit_identity();
  const Operator sp = sigma_plus();
  const Operator sm = sigma_minus();
  const Operator sz = sigma_z();
  Operator h = p.omega * tensor({n, iq, iq});
  h = h + p.delta1 * tensor({im, sz, iq}) + p.delta2 * tensor({im, iq, sz});
  h = h + p.g1 * (tensor({a, sp, iq}) + tensor({ad, sm, iq}));
  h = h + p.g2 * (tensor({a, iq, sp}) + tensor({ad, iq, sm}));
  return ensure_hermitian(std::move(h));
}

namespace {

// One-body operator acting as op on mode `target`, identity elsewhere,
// tensored with the given pair of qubit operators.
Operator mode_term(std::span<const int> cutoffs, int target, const Operator& op,
                   const Operator& q1, const Operator& q2) {
  std::vector<Operator> factors;
  for (size_t j = 0; j < cutoffs.size(); ++j) {
    factors.push_back(static_cast<int>(j) == target ? op
                                                    : mode_identity(cutoffs[j]));
  }
  factors.push_back(q1);
  factors.push_back(q2);
  return tensor(factors);
}

}  // namespace

Operator build_multimode(const MultimodeParams& p,
                         std::span<const int> cutoffs) {
  p.validate();
  if (static_cast<int>(cutoffs.size()) != p.mode_count()) {
    throw std::invalid_argument("one cutoff per mode required");
  }
  for (int n : cutoffs) require_cutoff(n);

  BasisDescriptor basis({cutoffs.begin(), cutoffs.end()}, 2);
  if (basis.dimension() > 4000) {
    std::cerr << "warning: multimode dimension " << basis.dimension()
              << " exceeds 4000; expect slow dense diagonalization\n";
  }
  const Operator iq = qubit_identity();
  const Operator sx = sigma_x();
  const Operator sz = sigma_z();
  Operator h = Operator{Matrix::Zero(basis.dimension(), basis.dimension()),
                        basis, true};
  for (int i = 0; i < p.mode_count(); ++i) {
    const Operator x = creation_op(cutoffs[i]) + annihilation_op(cutoffs[i]);
    h = h + p.omegas[i] * mode_term(cutoffs, i, number_op(cutoffs[i]), iq, iq);
    h = h + p.g_col1[i] * mode_term(cutoffs, i, x, sx, iq);
    h = h + p.g_col2[i] * mode_term(cutoffs, i, x, iq, sx);
  }
  h = h + p.delta1 * mode_term(cutoffs, -1, iq, sz, iq);
  h = h + p.delta2 * mode_term(cutoffs, -1, iq, iq, sz);
  h = h + p.eps1 * mode_term(cutoffs, -1, iq, sx, iq);
  h = h + p.eps2 * mode_term(cutoffs, -1, iq, iq, sx);
  return ensure_hermitian(std::move(h));
}

Operator build_transformed_multimode(const MultimodeParams& p, int cutoff1,
                                     std::span<const int> cutoffs_rest) {
  p.validate();
  if (static_cast<int>(cutoffs_rest.size()) != p.mode_count() - 1) {
    throw std::invalid_argument(
        "expected one cutoff for the coupled mode plus one per residual mode");
  }
  require_cutoff(cutoff1);
  for (int n : cutoffs_rest) {
    if (n < 1) {
      throw std::invalid_argument("photon cutoff must be at least 1");
    }
  }
  if (!p.equal_frequencies(1e-12)) {
    throw precondition_error(
        "collective-mode form requires equal mode frequencies");
  }
  if (!p.columns_proportional(tol::ratio_cross_product)) {
    throw precondition_error(
        "collective-mode form requires proportional coupling columns");
  }

  // Collective direction u along the coupling columns; signed projections
  // keep the builder unitary-equivalent for either coupling sign.
  const int m = p.mode_count();
  RealVector col1(m), col2(m);
  for (int i = 0; i < m; ++i) {
    col1(i) = p.g_col1[i];
    col2(i) = p.g_col2[i];
  }
  RealVector u = RealVector::Zero(m);
  if (col1.norm() > 0.0) {
    u = col1 / col1.norm();
  } else if (col2.norm() > 0.0) {
    u = col2 / col2.norm();
  }
  const double couple1 = u.dot(col1);
  const double couple2 = u.dot(col2);

  std::vector<int> cutoffs{cutoff1};
  cutoffs.insert(cutoffs.end(), cutoffs_rest.begin(), cutoffs_rest.end());
  const double omega = p.omegas[0];
  const Operator iq = qubit_identity();
  const Operator sx = sigma_x();
  const Operator sz = sigma_z();
  const Operator x1 = creation_op(cutoff1) + annihilation_op(cutoff1);
  BasisDescriptor basis(cutoffs, 2);
  Operator h = Operator{Matrix::Zero(basis.dimension(), basis.dimension()),
                        basis, true};
  for (int j = 0; j < m; ++j) {
    h = h + omega * mode_term(cutoffs, j, number_op(cutoffs[j]), iq, iq);
  }
  h = h + couple1 * mode_term(cutoffs, 0, x1, sx, iq);
  h = h + couple2 * mode_term(cutoffs, 0, x1, iq, sx);
  h = h + p.delta1 * mode_term(cutoffs, -1, iq, sz, iq);
  h = h + p.delta2 * mode_term(cutoffs, -1, iq, iq, sz);
  h = h + p.eps1 * mode_term(cutoffs, -1, iq, sx, iq);
  h = h + p.eps2 * mode_term(cutoffs, -1, iq, iq, sx);
  return ensure_hermitian(std::move(h));
}

std::array<double, 4> qubit_block_spectrum(const Aqrm2Params& p) {
  p.validate();
  const Operator iq = qubit_identity();
  const Operator sx = sigma_x();
  const Operator sz = sigma_z();
  Operator h = p.delta1 * tensor({sz, iq}) + p.delta2 * tensor({iq, sz});
  h = h + p.eps1 * tensor({sx, iq}) + p.eps2 * tensor({iq, sx});
  const EigResult eig = eig_hermitian(ensure_hermitian(std::move(h)));
  return {eig.values(0), eig.values(1), eig.values(2), eig.values(3)};
}

}  // namespace qrabi
