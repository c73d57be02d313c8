#include "qrabi/spectra.hpp"

#include "qrabi/fockalg.hpp"
#include "qrabi/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrabi {

namespace {

std::vector<Index> sector_of(const SweepModel& model, int cutoff) {
  std::vector<Index> ind = model.sector(cutoff);
  if (ind.empty()) {
    throw std::invalid_argument("sector restriction selected no basis states");
  }
  return ind;
}

Vector restricted_dark(const SweepModel& model, double g, int cutoff) {
  StateVector psi = model.dark_state(g, cutoff);
  if (!model.has_sector()) return psi.amplitudes;
  const std::vector<Index> ind = sector_of(model, cutoff);
  Vector out(ind.size());
  for (size_t i = 0; i < ind.size(); ++i) out(i) = psi.amplitudes(ind[i]);
  return out;
}

RealVector overlaps_at(const SweepModel& model, double g, int cutoff,
                       const SweepPoint& pt) {
  const Vector amp = restricted_dark(model, g, cutoff);
  if (amp.size() != pt.vectors.rows()) {
    throw std::invalid_argument("pinned state dimension mismatch");
  }
  RealVector ov(pt.vectors.cols());
  for (Index k = 0; k < pt.vectors.cols(); ++k) {
    ov(k) = std::norm(pt.vectors.col(k).dot(amp));
  }
  return ov;
}

}  // namespace

SweepPoint eval_point(const SweepModel& model, double g, int cutoff, int keep) {
  if (!model.hamiltonian) {
    throw std::invalid_argument("sweep model has no hamiltonian");
  }
  Operator h = model.hamiltonian(g, cutoff);
  if (model.has_sector()) {
    const std::vector<Index> ind = sector_of(model, cutoff);
    Matrix sub(ind.size(), ind.size());
    for (size_t r = 0; r < ind.size(); ++r) {
      for (size_t c = 0; c < ind.size(); ++c) {
        sub(r, c) = h.matrix(ind[r], ind[c]);
      }
    }
    h = Operator{std::move(sub), BasisDescriptor::qubits_only(0), h.hermitian};
  }
  if (keep < 1 || keep > h.matrix.rows()) {
    throw std::invalid_argument("keep must be between 1 and the dimension");
  }
  const EigResult eig = eig_hermitian(h);
  SweepPoint pt;
  pt.values = eig.values.head(keep);
  pt.vectors = eig.vectors.leftCols(keep);
  return pt;
}

SweepResult sweep(const SweepModel& model, std::span<const double> g_grid,
                  int cutoff, int keep) {
  if (g_grid.empty()) {
    throw std::invalid_argument("sweep grid is empty");
  }
  SweepResult result;
  result.model = model;
  result.g_grid.assign(g_grid.begin(), g_grid.end());
  result.cutoff = cutoff;
  result.keep = keep;
  result.levels.resize(g_grid.size(), keep);
  if (model.has_dark_state()) {
    result.dark_overlaps.resize(g_grid.size(), keep);
  }
  result.vectors.reserve(g_grid.size());
  for (size_t i = 0; i < g_grid.size(); ++i) {
    SweepPoint pt = eval_point(model, g_grid[i], cutoff, keep);
    result.levels.row(i) = pt.values.transpose();
    if (model.has_dark_state()) {
      result.dark_overlaps.row(i) =
          overlaps_at(model, g_grid[i], cutoff, pt).transpose();
    }
    result.vectors.push_back(std::move(pt.vectors));
  }
  return result;
}

ConvergenceReport convergence_check(const SweepModel& model, double g,
                                    std::span<const int> cutoffs, int k,
                                    double tolerance) {
  if (cutoffs.size() < 2) {
    throw std::invalid_argument("convergence check needs at least two cutoffs");
  }
  for (size_t i = 1; i < cutoffs.size(); ++i) {
    if (cutoffs[i] <= cutoffs[i - 1]) {
      throw std::invalid_argument("cutoffs must increase strictly");
    }
  }
  if (k < 1 || tolerance <= 0.0) {
    throw std::invalid_argument("need k >= 1 and a positive tolerance");
  }
  ConvergenceReport report;
  report.cutoffs.assign(cutoffs.begin(), cutoffs.end());
  report.k = k;
  report.tolerance = tolerance;
  RealVector prev = eval_point(model, g, cutoffs[0], k).values;
  for (size_t i = 1; i < cutoffs.size(); ++i) {
    RealVector cur = eval_point(model, g, cutoffs[i], k).values;
    report.changes.push_back((cur - prev).cwiseAbs().maxCoeff());
    prev = std::move(cur);
  }
  report.converged = report.changes.back() <= tolerance;
  return report;
}

const char* to_string(CrossingEvent::Kind kind) {
  switch (kind) {
    case CrossingEvent::Kind::dark_crossing:
      return "dark_crossing";
    case CrossingEvent::Kind::symmetry_sector_crossing:
      return "symmetry_sector_crossing";
    case CrossingEvent::Kind::avoided:
      return "avoided";
    case CrossingEvent::Kind::unclassified:
      return "unclassified";
  }
  return "unclassified";
}

namespace {

struct PinnedCount {
  int below = 0;       // levels below the pinned energy minus the band
  int above = 0;       // levels above the pinned energy plus the band
  int pinned = 0;      // index of the max-overlap level
  int candidate = -1;  // level nearest the pinned energy
  double candidate_energy = 0.0;
  double pinned_overlap = 0.0;
  double candidate_overlap = 0.0;
};

// The band of half-width tol::bisection_energy around the pinned energy keeps
// the exactly pinned level itself out of both counts. When the registered
// state is an exact eigenstate its level must also be excluded from candidate
// selection, otherwise it is always the nearest level.
PinnedCount pinned_count(const SweepModel& model, double g, int cutoff,
                         int keep, double energy, bool exclude_pin) {
  const SweepPoint pt = eval_point(model, g, cutoff, keep);
  const RealVector ov = overlaps_at(model, g, cutoff, pt);
  PinnedCount out;
  Index pin = 0;
  ov.maxCoeff(&pin);
  out.pinned = static_cast<int>(pin);
  out.pinned_overlap = ov(pin);
  double best = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < pt.values.size(); ++k) {
    if (pt.values(k) < energy - tol::bisection_energy) ++out.below;
    if (pt.values(k) > energy + tol::bisection_energy) ++out.above;
    if (exclude_pin && k == pin) continue;
    const double dist = std::abs(pt.values(k) - energy);
    if (dist < best) {
      best = dist;
      out.candidate = static_cast<int>(k);
      out.candidate_energy = pt.values(k);
      out.candidate_overlap = ov(k);
    }
  }
  if (pt.values(pt.values.size() - 1) <= energy) {
    throw std::invalid_argument(
        "keep is too small to bracket the pinned energy");
  }
  return out;
}

void refine_pinned(const SweepModel& model, int cutoff, int keep, double energy,
                   bool exclude_pin, double lo, double hi, int m_lo, int m_hi,
                   std::vector<CrossingEvent>& events) {
  if (m_lo == m_hi) return;
  if (hi - lo <= tol::bisection_interval) {
    const double mid = 0.5 * (lo + hi);
    const PinnedCount pc =
        pinned_count(model, mid, cutoff, keep, energy, exclude_pin);
    for (int r = 0; r < std::abs(m_hi - m_lo); ++r) {
      CrossingEvent ev;
      ev.g_star = mid;
      ev.energy = pc.candidate_energy;
      ev.level_indices = {std::min(pc.pinned, pc.candidate),
                          std::max(pc.pinned, pc.candidate)};
      ev.kind = CrossingEvent::Kind::dark_crossing;
      ev.labels = std::make_pair(pc.pinned_overlap, pc.candidate_overlap);
      ev.gap = std::abs(pc.candidate_energy - energy);
      events.push_back(ev);
    }
    return;
  }
  const double mid = 0.5 * (lo + hi);
  const PinnedCount pc =
      pinned_count(model, mid, cutoff, keep, energy, exclude_pin);
  if (std::abs(m_hi - m_lo) == 1 &&
      std::abs(pc.candidate_energy - energy) < tol::bisection_energy) {
    CrossingEvent ev;
    ev.g_star = mid;
    ev.energy = pc.candidate_energy;
    ev.level_indices = {std::min(pc.pinned, pc.candidate),
                        std::max(pc.pinned, pc.candidate)};
    ev.kind = CrossingEvent::Kind::dark_crossing;
    ev.labels = std::make_pair(pc.pinned_overlap, pc.candidate_overlap);
    ev.gap = std::abs(pc.candidate_energy - energy);
    events.push_back(ev);
    return;
  }
  refine_pinned(model, cutoff, keep, energy, exclude_pin, lo, mid, m_lo,
                pc.below, events);
  refine_pinned(model, cutoff, keep, energy, exclude_pin, mid, hi, pc.below,
                m_hi, events);
}

}  // namespace

std::vector<CrossingEvent> detect_dark_crossings(const SweepResult& result,
                                                 double energy) {
  if (!result.model.has_dark_state()) {
    throw std::invalid_argument("no pinned state registered on this model");
  }
  const SweepModel& model = result.model;
  const size_t points = result.g_grid.size();

  // Candidate selection must skip the pinned level only when the registered
  // state is an exact eigenstate. Probe at the strongest coupling.
  const double g_probe = result.g_grid.back();
  const StateVector trial = model.dark_state(g_probe, result.cutoff);
  const Operator h_probe = model.hamiltonian(g_probe, result.cutoff);
  const Vector tv = trial.amplitudes / trial.norm();
  const bool exclude_pin =
      (h_probe.matrix * tv - energy * tv).norm() <= 100.0 * tol::dark_residual;

  std::vector<PinnedCount> counts(points);
  for (size_t i = 0; i < points; ++i) {
    counts[i] = pinned_count(model, result.g_grid[i], result.cutoff,
                             result.keep, energy, exclude_pin);
  }
  std::vector<CrossingEvent> events;
  for (size_t i = 0; i + 1 < points; ++i) {
    const int d_below = counts[i + 1].below - counts[i].below;
    const int d_above = counts[i + 1].above - counts[i].above;
    if (d_below == 0) continue;
    // Transversal crossings move a level from one side of the band to the
    // other; a degenerate pair splitting off the pinned energy changes the
    // two counts in the same direction and is not a crossing.
    if (d_above == 0 || (d_above > 0) == (d_below > 0)) continue;
    std::vector<CrossingEvent> interval_events;
    refine_pinned(model, result.cutoff, result.keep, energy, exclude_pin,
                  result.g_grid[i], result.g_grid[i + 1], counts[i].below,
                  counts[i + 1].below, interval_events);
    const size_t limit =
        static_cast<size_t>(std::min(std::abs(d_below), std::abs(d_above)));
    if (interval_events.size() > limit) interval_events.resize(limit);
    events.insert(events.end(), interval_events.begin(),
                  interval_events.end());
  }
  std::sort(events.begin(), events.end(),
            [](const CrossingEvent& a, const CrossingEvent& b) {
              return a.g_star < b.g_star;
            });
  return events;
}

namespace {

double pair_gap(const SweepModel& model, double g, int cutoff, int keep,
                int lower) {
  const SweepPoint pt = eval_point(model, g, cutoff, keep);
  return pt.values(lower + 1) - pt.values(lower);
}

// Golden-section minimization of the gap between adjacent levels.
double refine_gap_minimum(const SweepModel& model, int cutoff, int keep,
                          int lower, double lo, double hi) {
  constexpr double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = pair_gap(model, x1, cutoff, keep, lower);
  double f2 = pair_gap(model, x2, cutoff, keep, lower);
  while (b - a > tol::bisection_interval) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = pair_gap(model, x1, cutoff, keep, lower);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = pair_gap(model, x2, cutoff, keep, lower);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<CrossingEvent> detect_level_crossings(const SweepResult& result,
                                                  const Operator* label_op) {
  const size_t points = result.g_grid.size();
  if (points < 3) {
    throw std::invalid_argument("gap scan needs at least three grid points");
  }
  std::vector<CrossingEvent> events;
  for (int k = 0; k + 1 < result.keep; ++k) {
    for (size_t i = 1; i + 1 < points; ++i) {
      const double prev = result.levels(i - 1, k + 1) - result.levels(i - 1, k);
      const double cur = result.levels(i, k + 1) - result.levels(i, k);
      const double next = result.levels(i + 1, k + 1) - result.levels(i + 1, k);
      if (cur < prev && cur <= next) {
        const double g_star =
            refine_gap_minimum(result.model, result.cutoff, result.keep, k,
                               result.g_grid[i - 1], result.g_grid[i + 1]);
        events.push_back(classify_crossing(result.model, g_star, {k, k + 1},
                                           result.cutoff, result.keep,
                                           label_op));
      }
    }
  }
  std::sort(events.begin(), events.end(),
            [](const CrossingEvent& a, const CrossingEvent& b) {
              return a.g_star < b.g_star;
            });
  return events;
}

CrossingEvent classify_crossing(const SweepModel& model, double g_star,
                                std::pair<int, int> level_indices, int cutoff,
                                int keep, const Operator* label_op) {
  const int a = level_indices.first;
  const int b = level_indices.second;
  if (a < 0 || b <= a || b >= keep) {
    throw std::invalid_argument("bad level pair");
  }
  const SweepPoint pt = eval_point(model, g_star, cutoff, keep);
  CrossingEvent ev;
  ev.g_star = g_star;
  ev.level_indices = level_indices;
  ev.energy = 0.5 * (pt.values(a) + pt.values(b));
  ev.gap = pt.values(b) - pt.values(a);

  if (ev.gap > tol::avoided_gap) {
    ev.kind = CrossingEvent::Kind::avoided;
    return ev;
  }
  if (ev.gap >= tol::crossing_energy) {
    ev.kind = CrossingEvent::Kind::unclassified;
    return ev;
  }
  if (model.has_dark_state()) {
    const RealVector ov = overlaps_at(model, g_star, cutoff, pt);
    if (std::max(ov(a), ov(b)) > 0.5) {
      ev.kind = CrossingEvent::Kind::dark_crossing;
      ev.labels = std::make_pair(ov(a), ov(b));
      return ev;
    }
  }
  if (label_op != nullptr) {
    const double delta = 1e-3;
    auto labels_at = [&](double g) {
      const SweepPoint q = eval_point(model, g, cutoff, keep);
      Matrix op = label_op->matrix;
      if (model.has_sector()) {
        const std::vector<Index> ind = model.sector(cutoff);
        Matrix sub(ind.size(), ind.size());
        for (size_t r = 0; r < ind.size(); ++r) {
          for (size_t c = 0; c < ind.size(); ++c) {
            sub(r, c) = op(ind[r], ind[c]);
          }
        }
        op = std::move(sub);
      }
      if (op.rows() != q.vectors.rows()) {
        throw std::invalid_argument("label operator dimension mismatch");
      }
      const double la =
          q.vectors.col(a).dot(op * q.vectors.col(a)).real();
      const double lb =
          q.vectors.col(b).dot(op * q.vectors.col(b)).real();
      return std::make_pair(la, lb);
    };
    const auto [lma, lmb] = labels_at(g_star - delta);
    const auto [lpa, lpb] = labels_at(g_star + delta);
    // Levels may swap across the degeneracy; the label multiset must match
    // side to side, and its internal spread must dominate that noise.
    const double noise =
        std::max(std::min(std::abs(lma - lpa), std::abs(lma - lpb)),
                 std::min(std::abs(lmb - lpa), std::abs(lmb - lpb)));
    const double separation = std::abs(lpa - lpb);
    if (separation > 10.0 * std::max(noise, 1e-11)) {
      ev.kind = CrossingEvent::Kind::symmetry_sector_crossing;
      ev.labels = std::make_pair(lpa, lpb);
      return ev;
    }
  }
  ev.kind = CrossingEvent::Kind::unclassified;
  return ev;
}

RealMatrix expectation_labels(const SweepResult& result, const Operator& op,
                              double cluster_tol) {
  Matrix opm = op.matrix;
  if (result.model.has_sector()) {
    const std::vector<Index> ind = result.model.sector(result.cutoff);
    Matrix sub(ind.size(), ind.size());
    for (size_t r = 0; r < ind.size(); ++r) {
      for (size_t c = 0; c < ind.size(); ++c) {
        sub(r, c) = opm(ind[r], ind[c]);
      }
    }
    opm = std::move(sub);
  }
  const size_t points = result.g_grid.size();
  RealMatrix labels(points, result.keep);
  for (size_t i = 0; i < points; ++i) {
    const Matrix& v = result.vectors[i];
    if (opm.rows() != v.rows()) {
      throw std::invalid_argument("label operator dimension mismatch");
    }
    int k = 0;
    while (k < result.keep) {
      int end = k + 1;
      while (end < result.keep &&
             result.levels(i, end) - result.levels(i, end - 1) < cluster_tol) {
        ++end;
      }
      const int span = end - k;
      if (span == 1) {
        labels(i, k) = v.col(k).dot(opm * v.col(k)).real();
      } else {
        // Degenerate cluster: diagonalize the observable inside it so each
        // member carries a sharp value.
        const Matrix block =
            v.middleCols(k, span).adjoint() * opm * v.middleCols(k, span);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(block);
        if (solver.info() != Eigen::Success) {
          throw numerical_error("cluster label diagonalization failed");
        }
        for (int c = 0; c < span; ++c) {
          labels(i, k + c) = solver.eigenvalues()(c);
        }
      }
      k = end;
    }
  }
  return labels;
}

std::pair<double, double> baseline_energy(int n, double g, double eps,
                                          double omega) {
  if (n < 0) {
    throw std::invalid_argument("level index must be non-negative");
  }
  if (omega <= 0.0) {
    throw std::invalid_argument("mode frequency must be positive");
  }
  const double base = n * omega - g * g / omega;
  return {base + eps, base - eps};
}

}  // namespace qrabi
