#include <doctest.h>

#include <cmath>

#include "cinf/montecarlo.hpp"
#include "cinf/phase.hpp"

using namespace cinf;

namespace {

GridConfig small_config() {
  GridConfig cfg;
  cfg.n = 40;
  cfg.eta_values = {0.8, 0.9};
  cfg.k_values = {{0, 4, 8, 12, 16}, {8, 12, 16, 20, 24}};
  cfg.trials = 8;
  cfg.master_seed = 5;
  cfg.method = GridMethod::certificate;
  return cfg;
}

}  // namespace

TEST_CASE("grid results are schedule independent and reproducible") {
  GridConfig a = small_config();
  GridConfig b = small_config();
  a.threads = 1;
  b.threads = 7;
  PTGridResult ra = run_grid(a);
  PTGridResult rb = run_grid(b);
  REQUIRE(ra.cells.size() == rb.cells.size());
  for (std::size_t i = 0; i < ra.cells.size(); ++i) {
    CHECK(ra.cells[i].k == rb.cells[i].k);
    CHECK(ra.cells[i].successes == rb.cells[i].successes);
    CHECK(ra.cells[i].trials == rb.cells[i].trials);
  }
  for (std::size_t e = 0; e < ra.empirical_beta.size(); ++e)
    CHECK(ra.empirical_beta[e] == rb.empirical_beta[e]);
}

TEST_CASE("adding cells never perturbs existing streams") {
  GridConfig a = small_config();
  GridConfig b = small_config();
  b.k_values[0].push_back(20);  // extra cell in the first column
  PTGridResult ra = run_grid(a);
  PTGridResult rb = run_grid(b);
  for (const GridCell& ca : ra.cells) {
    bool found = false;
    for (const GridCell& cb : rb.cells)
      if (cb.eta_index == ca.eta_index && cb.k == ca.k) {
        CHECK(cb.successes == ca.successes);
        found = true;
      }
    CHECK(found);
  }
}

TEST_CASE("success fraction decays across the transition column") {
  GridConfig cfg = small_config();
  PTGridResult r = run_grid(cfg);
  // eta = 0.9 column: beta grid 0.2 .. 0.6 brackets the 0.4 transition
  double first = -1.0, last = -1.0;
  for (const GridCell& c : r.cells)
    if (c.eta_index == 1) {
      if (first < 0) first = double(c.successes) / c.trials;
      last = double(c.successes) / c.trials;
    }
  CHECK(first > 0.7);
  CHECK(last < 0.3);
  CHECK(r.empirical_beta[1] > 0.2);
  CHECK(r.empirical_beta[1] < 0.7);
  CHECK(r.theory_beta[1] == doctest::Approx(beta_ac(0.9)));
}

TEST_CASE("solver and certificate methods agree away from the transition") {
  GridConfig cert = small_config();
  cert.eta_values = {0.9};
  cert.k_values = {{2, 24}};  // beta 0.05 and 0.6, both far from 0.4
  cert.trials = 4;
  GridConfig solv = cert;
  solv.method = GridMethod::solver;
  PTGridResult rc = run_grid(cert);
  PTGridResult rs = run_grid(solv);
  for (std::size_t i = 0; i < rc.cells.size(); ++i)
    CHECK(rc.cells[i].successes == rs.cells[i].successes);
}

TEST_CASE("transition estimator on synthetic columns") {
  auto cell = [](int k, int succ, int trials) {
    GridCell c;
    c.k = k;
    c.successes = succ;
    c.trials = trials;
    return c;
  };
  // clean 50% crossing between k = 20 (0.75) and k = 30 (0.25)
  std::vector<GridCell> col{cell(10, 10, 10), cell(20, 75, 100),
                            cell(30, 25, 100), cell(40, 0, 10)};
  TransitionEstimate est = empirical_transition(col, 100);
  CHECK_FALSE(est.saturated);
  CHECK(est.beta == doctest::Approx(0.25).epsilon(1e-12));

  // non-monotone data is smoothed before crossing detection
  std::vector<GridCell> noisy{cell(10, 9, 10), cell(20, 10, 10),
                              cell(30, 2, 10), cell(40, 3, 10),
                              cell(50, 0, 10)};
  TransitionEstimate est2 = empirical_transition(noisy, 100);
  CHECK_FALSE(est2.saturated);
  CHECK(est2.beta > 0.2);
  CHECK(est2.beta < 0.3);

  // all successes: saturated at the top
  std::vector<GridCell> top{cell(0, 10, 10), cell(10, 10, 10)};
  CHECK(empirical_transition(top, 100).saturated);
  // all failures: saturated at the bottom
  std::vector<GridCell> bot{cell(10, 0, 10), cell(20, 0, 10)};
  TransitionEstimate eb = empirical_transition(bot, 100);
  CHECK(eb.saturated);
  CHECK(eb.beta == doctest::Approx(0.1));
}

TEST_CASE("grid rejects invalid configurations") {
  GridConfig cfg = small_config();
  cfg.trials = 0;
  CHECK_THROWS(run_grid(cfg));
  cfg = small_config();
  cfg.k_values[0].push_back(100);  // k > l
  CHECK_THROWS(run_grid(cfg));
  cfg = small_config();
  cfg.k_values.pop_back();
  CHECK_THROWS(run_grid(cfg));
}

TEST_CASE("spectrum experiment matches theory at small scale") {
  SpectrumReport rep = spectrum_experiment(240, 0.4, 0.9, 2, 3);
  CHECK_FALSE(rep.degenerate);
  CHECK(rep.pooled_count == 2 * 96);  // k = 96 eigenvalues per trial
  CHECK(rep.max_eigenvalue > 0.5);
  CHECK(rep.max_eigenvalue < 1.3);
  CHECK(rep.l1_distance < 0.35);
  // empirical zero-atom share approaches 1 - (1-eta)/beta = 0.75
  CHECK(rep.atom_fraction_empirical == doctest::Approx(0.75).epsilon(0.1));
  CHECK(rep.grid.size() == rep.f_theory.size());
  CHECK(rep.grid.size() == rep.f_empirical.size());
}

TEST_CASE("spectrum experiment is reproducible") {
  SpectrumReport a = spectrum_experiment(120, 0.4, 0.9, 2, 9);
  SpectrumReport b = spectrum_experiment(120, 0.4, 0.9, 2, 9);
  CHECK(a.l1_distance == b.l1_distance);
  CHECK(a.max_eigenvalue == b.max_eigenvalue);
}

TEST_CASE("spectrum experiment domain checks") {
  CHECK_THROWS(spectrum_experiment(100, 0.9, 0.5, 1, 1));  // k > l
  SpectrumReport deg = spectrum_experiment(100, 0.001, 0.9, 1, 1);  // k = 0
  CHECK(deg.degenerate);
}

TEST_CASE("per-instance eigenvalues live in the expected range") {
  LowRankInstance inst = make_instance(80, 30, 72, Scenario::asymmetric,
                                       Vector(), 12);
  Vector evs = q1_eigenvalues(inst, BlockMask(80, 72));
  REQUIRE(evs.size() == 30);
  for (int i = 0; i < evs.size(); ++i) {
    CHECK(evs(i) >= -1e-9);
    if (i > 0) CHECK(evs(i) >= evs(i - 1));
  }
  // rank of the product is at most n - l = 8
  int nonzero = 0;
  for (int i = 0; i < evs.size(); ++i)
    if (evs(i) > 1e-9) ++nonzero;
  CHECK(nonzero <= 8);
}
