#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qrabi/darkstates.hpp"
#include "qrabi/spectra.hpp"
#include "qrabi/symmetry.hpp"
#include "qrabi/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace qrabi;

namespace {

SweepModel biased_model() {
  const double e = epsilon_condition(0.6, 0.3);
  SweepModel m;
  m.name = "aqrm2_biased";
  m.hamiltonian = [e](double g, int cutoff) {
    Aqrm2Params p;
    p.delta1 = 0.6;
    p.delta2 = 0.3;
    p.g1 = g;
    p.g2 = g;
    p.eps1 = e;
    p.eps2 = e;
    return build_aqrm2(p, cutoff);
  };
  m.dark_state = [e](double g, int cutoff) {
    Aqrm2Params p;
    p.delta1 = 0.6;
    p.delta2 = 0.3;
    p.g1 = g;
    p.g2 = g;
    p.eps1 = e;
    p.eps2 = e;
    return dark_state_aqrm2(p, Branch::plus, cutoff).state;
  };
  m.dark_energy = 1.0;
  return m;
}

SweepModel hidden_j_model() {
  SweepModel m;
  m.name = "aqrm2_hidden_j";
  m.hamiltonian = [](double g, int cutoff) {
    Aqrm2Params p;
    p.delta1 = 0.8;
    p.delta2 = 0.8;
    p.g1 = g;
    p.g2 = g;
    p.eps1 = 0.5;
    p.eps2 = 0.0;
    return build_aqrm2(p, cutoff);
  };
  return m;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  return g;
}

}  // namespace

TEST_CASE("sweep returns ascending levels and unit-normalized overlaps") {
  const SweepModel m = biased_model();
  const std::vector<double> grid = linspace(0.0, 0.45, 11);
  const SweepResult res = sweep(m, grid, 12, 12);
  REQUIRE(res.levels.rows() == 11);
  REQUIRE(res.levels.cols() == 12);
  REQUIRE(res.dark_overlaps.rows() == 11);
  for (int i = 0; i < res.levels.rows(); ++i) {
    for (int k = 1; k < res.levels.cols(); ++k) {
      CHECK(res.levels(i, k) >= res.levels(i, k - 1));
    }
    // Overlaps with kept levels sum to at most one, and the pinned level
    // soaks up almost everything away from crossings.
    const double total = res.dark_overlaps.row(i).sum();
    CHECK(total <= 1.0 + 1e-12);
    CHECK(res.dark_overlaps.row(i).maxCoeff() > 0.9);
  }
  CHECK(res.vectors.size() == 11);
  CHECK(res.vectors[0].cols() == 12);
}

TEST_CASE("sector restriction reproduces a subset of the full spectrum") {
  SweepModel full;
  full.hamiltonian = [](double g, int cutoff) {
    Jc2Params p;
    p.delta1 = 0.55;
    p.delta2 = 0.45;
    p.g1 = 0.1 * g;
    p.g2 = g;
    return build_jc2(p, cutoff);
  };
  SweepModel sector = full;
  sector.sector = [](int cutoff) { return excitation_sector_indices(cutoff, 2); };

  const std::vector<double> grid = linspace(0.1, 0.9, 5);
  const SweepResult rs = sweep(sector, grid, 8, 4);
  const SweepResult rf = sweep(full, grid, 8, 20);
  for (int i = 0; i < rs.levels.rows(); ++i) {
    for (int k = 0; k < rs.levels.cols(); ++k) {
      double best = 1e300;
      for (int kk = 0; kk < rf.levels.cols(); ++kk) {
        best = std::min(best, std::abs(rf.levels(i, kk) - rs.levels(i, k)));
      }
      CHECK(best < 1e-10);
    }
  }
}

TEST_CASE("eval_point matches the corresponding sweep row") {
  const SweepModel m = biased_model();
  const SweepPoint pt = eval_point(m, 0.37, 10, 5);
  const std::vector<double> grid{0.37};
  const SweepResult res = sweep(m, grid, 10, 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(pt.values(k) == doctest::Approx(res.levels(0, k)).epsilon(1e-14));
  }
}

TEST_CASE("convergence certifies the decoupled point and flags a hard one") {
  const SweepModel m = biased_model();
  const std::vector<int> cuts{8, 10, 12};
  const ConvergenceReport easy = convergence_check(m, 0.0, cuts, 6, 1e-12);
  CHECK(easy.converged);
  CHECK(easy.changes.size() == 2);
  CHECK(easy.changes.back() <= 1e-12);

  const std::vector<int> small_cuts{10, 12};
  const ConvergenceReport hard = convergence_check(m, 3.0, small_cuts, 10, 1e-10);
  CHECK_FALSE(hard.converged);
  CHECK(hard.changes.back() > 1e-10);

  CHECK_THROWS_AS(convergence_check(m, 0.5, std::vector<int>{12}, 4, 1e-8),
                  std::invalid_argument);
}

TEST_CASE("pinned-level crossings are located by bisection") {
  const SweepModel m = biased_model();
  const std::vector<double> grid = linspace(0.25, 0.42, 18);
  const SweepResult res = sweep(m, grid, 40, 14);
  const auto events = detect_dark_crossings(res, 1.0);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == CrossingEvent::Kind::dark_crossing);
  CHECK(events[0].g_star == doctest::Approx(0.33863282).epsilon(1e-5));
  CHECK(std::abs(events[0].energy - 1.0) < tol::crossing_energy);
  CHECK(events[0].gap < tol::crossing_energy);
}

TEST_CASE("gap minima are refined and labeled by the conserved operator") {
  const SweepModel m = hidden_j_model();
  const std::vector<double> grid = linspace(0.15, 0.3, 16);
  const int cutoff = 30;
  const SweepResult res = sweep(m, grid, cutoff, 6);
  const auto events = detect_level_crossings(res);
  bool found = false;
  for (const auto& ev : events) {
    if (ev.level_indices != std::pair<int, int>{2, 3}) continue;
    if (std::abs(ev.g_star - 0.241665) > 1e-4) continue;
    found = true;
    CHECK(ev.gap < tol::crossing_energy);
    // Unlabeled true degeneracies stay unclassified.
    CHECK(ev.kind == CrossingEvent::Kind::unclassified);
    // Labeling with the conserved operator built at the refined coupling
    // resolves the pair into opposite symmetry sectors.
    Aqrm2Params p;
    p.delta1 = 0.8;
    p.delta2 = 0.8;
    p.g1 = ev.g_star;
    p.g2 = ev.g_star;
    p.eps1 = 0.5;
    p.eps2 = 0.0;
    const Operator j = hidden_symmetry_J(p, cutoff);
    const CrossingEvent cls =
        classify_crossing(m, ev.g_star, ev.level_indices, cutoff, 6, &j);
    CHECK(cls.kind == CrossingEvent::Kind::symmetry_sector_crossing);
    CHECK(cls.gap < tol::crossing_energy);
    REQUIRE(cls.labels.has_value());
    CHECK(cls.labels->first == doctest::Approx(-cls.labels->second).epsilon(1e-6));
    CHECK(std::abs(cls.labels->first) == doctest::Approx(3.672).epsilon(1e-2));
  }
  CHECK(found);
}

TEST_CASE("classification reports a finite gap for a symmetry-broken model") {
  SweepModel generic;
  generic.hamiltonian = [](double g, int cutoff) {
    Aqrm2Params p;
    p.delta1 = 0.8;
    p.delta2 = 0.8;
    p.g1 = g;
    p.g2 = 0.9 * g;
    p.eps1 = 0.5;
    p.eps2 = 0.1;
    return build_aqrm2(p, cutoff);
  };
  const CrossingEvent av = classify_crossing(generic, 0.241665, {2, 3}, 30, 6);
  CHECK(av.gap > tol::crossing_energy);
  CHECK(av.kind == CrossingEvent::Kind::avoided);
}

TEST_CASE("kind names render stably") {
  CHECK(std::string(to_string(CrossingEvent::Kind::dark_crossing)) ==
        "dark_crossing");
  CHECK(std::string(to_string(CrossingEvent::Kind::symmetry_sector_crossing)) ==
        "symmetry_sector_crossing");
  CHECK(std::string(to_string(CrossingEvent::Kind::avoided)) == "avoided");
  CHECK(std::string(to_string(CrossingEvent::Kind::unclassified)) ==
        "unclassified");
}

TEST_CASE("expectation labels stay integral through a degenerate pair") {
  SweepModel m;
  m.hamiltonian = [](double g, int cutoff) {
    Jc2Params p;
    p.delta1 = 0.55;
    p.delta2 = 0.45;
    p.g1 = g;
    p.g2 = g;
    return build_jc2(p, cutoff);
  };
  const std::vector<double> grid = linspace(0.0, 0.6, 7);
  const SweepResult res = sweep(m, grid, 8, 6);
  const Operator c = excitation_number_op(8);
  const RealMatrix labels = expectation_labels(res, c, tol::degeneracy_cluster);
  REQUIRE(labels.rows() == res.levels.rows());
  REQUIRE(labels.cols() == res.levels.cols());
  for (int i = 0; i < labels.rows(); ++i) {
    for (int k = 0; k < labels.cols(); ++k) {
      CHECK(std::abs(labels(i, k) - std::round(labels(i, k))) < 1e-8);
    }
  }
}

TEST_CASE("displaced-oscillator baseline matches a splitting-free model") {
  CHECK(baseline_energy(0, 0.0, 0.5, 1.0).first == doctest::Approx(0.5));
  CHECK(baseline_energy(0, 0.0, 0.5, 1.0).second == doctest::Approx(-0.5));
  CHECK(baseline_energy(2, 0.3, 0.1, 1.0).first ==
        doctest::Approx(2.0 - 0.09 + 0.1));

  Aqrm2Params p;
  p.delta1 = 0.0;
  p.delta2 = 0.0;
  p.g1 = 0.4;
  p.g2 = 0.0;
  p.eps1 = 0.2;
  p.eps2 = 0.0;
  const Operator h = build_aqrm2(p, 40);
  const EigResult eig = eig_hermitian(h);
  const auto [up, down] = baseline_energy(0, 0.4, 0.2, 1.0);
  // Ground pair: each branch twice over the spectator qubit.
  CHECK(std::abs(eig.values(0) - down) < 1e-10);
  CHECK(std::abs(eig.values(1) - down) < 1e-10);
  CHECK(std::abs(eig.values(2) - up) < 1e-10);
  CHECK(std::abs(eig.values(3) - up) < 1e-10);
}
