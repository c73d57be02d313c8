#include "qrabi/darkstates.hpp"

#include "qrabi/tolerances.hpp"

#include <cmath>

namespace qrabi {

namespace {

constexpr int kGG = 0;
constexpr int kGE = 1;
constexpr int kEG = 2;
constexpr int kEE = 3;

void require_close(double value, double target, const char* what) {
  if (std::abs(value - target) > tol::precondition_abs) {
    throw precondition_error(std::string(what) + " violated: |" +
                             std::to_string(value) + " - " +
                             std::to_string(target) + "| > 1e-10");
  }
}

Index idx(int cutoff, int n, int q) {
  return BasisDescriptor::single_mode(cutoff).index(std::span<const int>(&n, 1),
                                                    q);
}

}  // namespace

double epsilon_condition(double delta1, double delta2) {
  const double d1 = delta1, d2 = delta2;
  const double expr = (std::pow(d1, 4) + std::pow(d2 * d2 - 1.0, 2) -
                       2.0 * d1 * d1 * (1.0 + d2 * d2)) /
                      4.0;
  if (expr < 0.0) {
    throw no_dark_bias_error(
        "no real bias supports a one-photon eigenstate for splittings (" +
        std::to_string(d1) + ", " + std::to_string(d2) + ")");
  }
  return std::sqrt(expr);
}

DarkStateResult dark_state_aqrm2(const Aqrm2Params& p, Branch branch,
                                 int cutoff) {
  p.validate();
  if (cutoff < 2) {
    throw std::invalid_argument("photon cutoff must be at least 2");
  }
  const double s = branch_sign(branch);
  require_close(p.g2, s * p.g1, "coupling branch condition g2 = s*g1");
  require_close(p.eps2, s * p.eps1, "bias branch condition eps2 = s*eps1");

  const double d1 = p.delta1 / p.omega;
  const double d2 = p.delta2 / p.omega;
  const double gr = p.g1 / p.omega;
  const double er = p.eps1 / p.omega;

  StateVector psi{Vector::Zero(BasisDescriptor::single_mode(cutoff).dimension()),
                  BasisDescriptor::single_mode(cutoff),
                  branch == Branch::plus ? "dark_plus" : "dark_minus"};

  if (std::abs(d1 - d2) <= tol::precondition_abs) {
    // Equal splittings: the qubit singlet decouples for any bias magnitude.
    psi.amplitudes(idx(cutoff, 1, kEG)) = 1.0 / std::sqrt(2.0);
    psi.amplitudes(idx(cutoff, 1, kGE)) = -s / std::sqrt(2.0);
    return DarkStateResult{std::move(psi), p.omega, branch,
                           Construction::closed_form};
  }

  require_close(std::abs(er), epsilon_condition(d1, d2),
                "bias magnitude condition");
  const double den1 = -1.0 + d1 - d2;
  const double den2 = 1.0 + d1 - d2;
  const double den3 = d1 + d1 * d1 + d2 - d2 * d2;
  if (std::abs(den1) < 1e-12 || std::abs(den2) < 1e-12 ||
      std::abs(den3) < 1e-12) {
    throw precondition_error(
        "closed-form amplitudes are singular at these splittings");
  }

  const double diff = d1 - d2;
  const double k = 2.0 * er * diff / (den1 * den3);
  psi.amplitudes(idx(cutoff, 0, kGG)) = diff * (-1.0 + d1 + d2) / 2.0;
  psi.amplitudes(idx(cutoff, 0, kEE)) = -s * diff * (1.0 + d1 + d2) / 2.0;
  psi.amplitudes(idx(cutoff, 0, kEG)) = er * diff / den1;
  psi.amplitudes(idx(cutoff, 0, kGE)) = -s * er * diff / den2;
  psi.amplitudes(idx(cutoff, 1, kEG)) = gr;
  psi.amplitudes(idx(cutoff, 1, kGE)) = -s * gr;
  psi.amplitudes(idx(cutoff, 1, kGG)) = k * gr;
  psi.amplitudes(idx(cutoff, 1, kEE)) = -s * k * gr;
  psi.normalize();
  return DarkStateResult{std::move(psi), p.omega, branch,
                         Construction::closed_form};
}

DarkStateResult dark_state_aqrm2_unbiased(const Aqrm2Params& p, Branch branch,
                                          int cutoff) {
  p.validate();
  if (cutoff < 2) {
    throw std::invalid_argument("photon cutoff must be at least 2");
  }
  const double s = branch_sign(branch);
  require_close(p.eps1, 0.0, "bias-free condition eps1 = 0");
  require_close(p.eps2, 0.0, "bias-free condition eps2 = 0");
  require_close(p.delta1 + p.delta2, p.omega,
                "splitting sum condition delta1 + delta2 = omega");
  require_close(p.g2, s * p.g1, "coupling branch condition g2 = s*g1");

  const double d1 = p.delta1 / p.omega;
  const double d2 = p.delta2 / p.omega;
  const double gr = p.g1 / p.omega;

  StateVector psi{Vector::Zero(BasisDescriptor::single_mode(cutoff).dimension()),
                  BasisDescriptor::single_mode(cutoff),
                  branch == Branch::plus ? "dark_unbiased_plus"
                                         : "dark_unbiased_minus"};
  if (std::abs(d1 - d2) <= tol::precondition_abs) {
    psi.amplitudes(idx(cutoff, 1, kGE)) = 1.0 / std::sqrt(2.0);
    psi.amplitudes(idx(cutoff, 1, kEG)) = -s / std::sqrt(2.0);
  } else {
    psi.amplitudes(idx(cutoff, 0, kEE)) = d1 - d2;
    psi.amplitudes(idx(cutoff, 1, kGE)) = gr;
    psi.amplitudes(idx(cutoff, 1, kEG)) = -s * gr;
    psi.normalize();
  }
  return DarkStateResult{std::move(psi), p.omega, branch,
                         Construction::closed_form};
}

DarkStateResult jc_dark_state(int n_exc, const Jc2Params& p, int cutoff) {
  if (n_exc < 0) {
    throw std::invalid_argument("excitation label must be non-negative");
  }
  p.validate();
  require_close(p.delta1 + p.delta2, p.omega,
                "splitting sum condition delta1 + delta2 = omega");
  const int min_cutoff = n_exc + 2;
  if (cutoff == -1) cutoff = min_cutoff;
  if (cutoff < min_cutoff) {
    throw std::invalid_argument("cutoff too small for the requested sector");
  }
  StateVector psi{Vector::Zero(BasisDescriptor::single_mode(cutoff).dimension()),
                  BasisDescriptor::single_mode(cutoff), "jc_dark"};
  const double norm = std::sqrt(2.0 * n_exc + 3.0);
  psi.amplitudes(idx(cutoff, n_exc, kEE)) = std::sqrt(n_exc + 2.0) / norm;
  psi.amplitudes(idx(cutoff, n_exc + 2, kGG)) = -std::sqrt(n_exc + 1.0) / norm;
  return DarkStateResult{std::move(psi), (n_exc + 1.0) * p.omega, Branch::plus,
                         Construction::closed_form};
}

DarkStateResult jc_dark_state_mixed(int n_exc, const Jc2Params& p,
                                    Branch branch, int cutoff) {
  if (n_exc < 0) {
    throw std::invalid_argument("excitation label must be non-negative");
  }
  p.validate();
  const double s = branch_sign(branch);
  require_close(p.delta1 + p.delta2, p.omega,
                "splitting sum condition delta1 + delta2 = omega");
  require_close(p.g2, s * p.g1, "coupling branch condition g2 = s*g1");
  const int min_cutoff = std::max(2, n_exc + 1);
  if (cutoff == -1) cutoff = min_cutoff;
  if (cutoff < min_cutoff) {
    throw std::invalid_argument("cutoff too small for the requested sector");
  }
  const double d1 = p.delta1 / p.omega;
  const double d2 = p.delta2 / p.omega;
  const double gr = p.g1 / p.omega;
  if (std::abs(d1 - d2) <= tol::precondition_abs &&
      std::abs(gr) <= tol::precondition_abs) {
    throw precondition_error(
        "state degenerates to zero for equal splittings and zero coupling");
  }
  StateVector psi{Vector::Zero(BasisDescriptor::single_mode(cutoff).dimension()),
                  BasisDescriptor::single_mode(cutoff), "jc_dark_mixed"};
  const double root = std::sqrt(n_exc + 1.0);
  psi.amplitudes(idx(cutoff, n_exc, kEE)) = d1 - d2;
  psi.amplitudes(idx(cutoff, n_exc + 1, kGE)) = root * gr;
  psi.amplitudes(idx(cutoff, n_exc + 1, kEG)) = -s * root * gr;
  psi.normalize();
  return DarkStateResult{std::move(psi), (n_exc + 1.0) * p.omega, branch,
                         Construction::closed_form};
}

DarkStateResult dark_state_multimode(const MultimodeParams& p, Branch branch,
                                     std::span<const int> cutoffs) {
  p.validate();
  if (static_cast<int>(cutoffs.size()) != p.mode_count()) {
    throw std::invalid_argument("one cutoff per mode required");
  }
  for (int n : cutoffs) {
    if (n < 2) {
      throw std::invalid_argument("photon cutoff must be at least 2");
    }
  }
  if (!p.equal_frequencies(1e-12)) {
    throw precondition_error(
        "collective one-photon state requires equal mode frequencies");
  }
  const double s = branch_sign(branch);
  for (int i = 0; i < p.mode_count(); ++i) {
    require_close(p.g_col2[i], s * p.g_col1[i],
                  "coupling branch condition g_col2 = s*g_col1");
  }
  require_close(p.eps2, s * p.eps1, "bias branch condition eps2 = s*eps1");

  const double omega = p.omegas[0];
  const double d1 = p.delta1 / omega;
  const double d2 = p.delta2 / omega;
  const double er = p.eps1 / omega;
  const int m = p.mode_count();
  std::vector<double> w(m);
  double gb2 = 0.0;
  for (int i = 0; i < m; ++i) {
    w[i] = p.g_col1[i] / omega;
    gb2 += w[i] * w[i];
  }
  const double gb = std::sqrt(gb2);

  BasisDescriptor basis({cutoffs.begin(), cutoffs.end()}, 2);
  StateVector psi{Vector::Zero(basis.dimension()), basis,
                  branch == Branch::plus ? "dark_multimode_plus"
                                         : "dark_multimode_minus"};
  std::vector<int> occ(m, 0);
  auto at = [&](int mode, int q) {
    std::fill(occ.begin(), occ.end(), 0);
    if (mode >= 0) occ[mode] = 1;
    return basis.index(occ, q);
  };

  if (std::abs(d1 - d2) <= tol::precondition_abs) {
    if (gb == 0.0) {
      throw precondition_error(
          "collective mode undefined for all-zero couplings");
    }
    for (int i = 0; i < m; ++i) {
      psi.amplitudes(at(i, kEG)) = w[i] / gb / std::sqrt(2.0);
      psi.amplitudes(at(i, kGE)) = -s * w[i] / gb / std::sqrt(2.0);
    }
    return DarkStateResult{std::move(psi), omega, branch,
                           Construction::closed_form};
  }

  require_close(std::abs(er), epsilon_condition(d1, d2),
                "bias magnitude condition");
  const double den1 = -1.0 + d1 - d2;
  const double den2 = 1.0 + d1 - d2;
  const double den3 = d1 + d1 * d1 + d2 - d2 * d2;
  if (std::abs(den1) < 1e-12 || std::abs(den2) < 1e-12 ||
      std::abs(den3) < 1e-12) {
    throw precondition_error(
        "closed-form amplitudes are singular at these splittings");
  }
  const double diff = d1 - d2;
  const double k = 2.0 * er * diff / (den1 * den3);
  psi.amplitudes(at(-1, kGG)) = diff * (-1.0 + d1 + d2) / 2.0;
  psi.amplitudes(at(-1, kEE)) = -s * diff * (1.0 + d1 + d2) / 2.0;
  psi.amplitudes(at(-1, kEG)) = er * diff / den1;
  psi.amplitudes(at(-1, kGE)) = -s * er * diff / den2;
  for (int i = 0; i < m; ++i) {
    psi.amplitudes(at(i, kEG)) = w[i];
    psi.amplitudes(at(i, kGE)) = -s * w[i];
    psi.amplitudes(at(i, kGG)) = k * w[i];
    psi.amplitudes(at(i, kEE)) = -s * k * w[i];
  }
  psi.normalize();
  return DarkStateResult{std::move(psi), omega, branch,
                         Construction::closed_form};
}

std::vector<DarkStateResult> one_photon_ansatz_solve(const Aqrm2Params& p,
                                                     double energy) {
  p.validate();
  const Operator h = build_aqrm2(p, 2);
  const Index dim = h.basis.dimension();  // 12
  const Index support = 8;                // amplitudes with at most one photon
  Matrix shifted = h.matrix - energy * Matrix::Identity(dim, dim);
  const Matrix m = shifted.leftCols(support);
  const std::vector<Vector> kernel = nullspace(m, tol::nullspace_rel);

  Branch branch = Branch::plus;
  if (std::abs(p.g1) > 0.0) {
    branch = p.g2 * p.g1 >= 0.0 ? Branch::plus : Branch::minus;
  } else if (std::abs(p.eps1) > 0.0) {
    branch = p.eps2 * p.eps1 >= 0.0 ? Branch::plus : Branch::minus;
  }

  std::vector<DarkStateResult> out;
  for (const Vector& v : kernel) {
    StateVector psi{Vector::Zero(dim), h.basis, "one_photon_ansatz"};
    psi.amplitudes.head(support) = v;
    // Deterministic phase: largest amplitude real positive.
    Index imax = 0;
    psi.amplitudes.cwiseAbs().maxCoeff(&imax);
    const Complex z = psi.amplitudes(imax);
    psi.amplitudes *= std::conj(z) / std::abs(z);
    psi.normalize();
    const double res = (h.matrix * psi.amplitudes - energy * psi.amplitudes).norm();
    if (res > tol::dark_residual * std::max(1.0, std::abs(energy))) {
      throw numerical_error("ansatz kernel vector failed the residual check");
    }
    out.push_back(DarkStateResult{std::move(psi), energy, branch,
                                  Construction::nullspace_solve});
  }
  return out;
}

double residual(const Operator& h, const StateVector& psi, double energy) {
  require_same_basis(h.basis, psi.basis, "residual");
  if (std::abs(psi.norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("residual expects a normalized state");
  }
  return (h.matrix * psi.amplitudes - energy * psi.amplitudes).norm();
}

}  // namespace qrabi
