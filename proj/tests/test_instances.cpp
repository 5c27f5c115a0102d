#include <doctest.h>

#include "cinf/instances.hpp"
#include "cinf/rng.hpp"

using namespace cinf;

TEST_CASE("block mask structure") {
  BlockMask mask(10, 7);
  CHECK(mask.ones_count() == 100 - 9);
  CHECK(mask.observed(0, 9));
  CHECK(mask.observed(9, 0));
  CHECK(mask.observed(6, 8));
  CHECK_FALSE(mask.observed(7, 7));
  CHECK_FALSE(mask.observed(9, 9));

  Matrix d = mask.dense();
  double ones = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      CHECK(d(i, j) == (mask.observed(i, j) ? 1.0 : 0.0));
      ones += d(i, j);
    }
  CHECK(ones == double(mask.ones_count()));
}

TEST_CASE("mask apply/complement partition the matrix") {
  BlockMask mask(12, 8);
  Matrix x = sample_haar_matrix(12, 5);
  Matrix a = mask.apply(x);
  Matrix c = mask.complement(x);
  CHECK((a + c - x).norm() == 0.0);
  // idempotent
  CHECK((mask.apply(a) - a).norm() == 0.0);
  CHECK((mask.complement(c) - c).norm() == 0.0);
  CHECK(mask.complement(a).norm() == 0.0);
}

TEST_CASE("haar basis is orthonormal and deterministic") {
  Matrix q = sample_haar_basis(40, 12, 77);
  CHECK((q.transpose() * q - Matrix::Identity(12, 12)).norm() < 1e-12);
  Matrix q2 = sample_haar_basis(40, 12, 77);
  CHECK((q - q2).norm() == 0.0);
  Matrix q3 = sample_haar_basis(40, 12, 78);
  CHECK((q - q3).norm() > 1e-3);
}

TEST_CASE("haar sampling covers both signs uniformly") {
  // With a plain QR (no sign fix) the diagonal of R is positive and the
  // first entry of a 1x1 sample would always carry the Gaussian's sign
  // pattern; under the exact Haar law each entry is symmetric about 0.
  int positive = 0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    Matrix q = sample_haar_basis(3, 1, stable_hash(123, t));
    if (q(0, 0) > 0) ++positive;
  }
  // binomial(400, 1/2): 5 sigma band is +-50
  CHECK(positive > 150);
  CHECK(positive < 250);
}

TEST_CASE("first haar column is uniform on the sphere") {
  const int n = 25;
  double sum_sq = 0.0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    Matrix q = sample_haar_basis(n, 3, stable_hash(9, t));
    sum_sq += q(0, 0) * q(0, 0);
  }
  // E[q(0,0)^2] = 1/n; var of the mean is ~2/(n^2 trials)
  CHECK(sum_sq / trials == doctest::Approx(1.0 / n).epsilon(0.35));
}

TEST_CASE("instance assembles the declared factorization") {
  LowRankInstance inst = make_instance(30, 5, 24, Scenario::asymmetric,
                                       Vector(), 11);
  CHECK(inst.dims.n == 30);
  CHECK(inst.dims.k == 5);
  CHECK(inst.dims.l == 24);
  CHECK(inst.singular_values.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(inst.singular_values(i) == 1.0);

  Matrix x = inst.u_basis * inst.singular_values.asDiagonal() *
             inst.v_basis.transpose();
  CHECK((x - inst.x_sol).norm() < 1e-14);

  // full frames
  Matrix u(30, 30), v(30, 30);
  u << inst.u_basis, inst.u_perp;
  v << inst.v_basis, inst.v_perp;
  CHECK((u.transpose() * u - Matrix::Identity(30, 30)).norm() < 1e-12);
  CHECK((v.transpose() * v - Matrix::Identity(30, 30)).norm() < 1e-12);

  // perp frames annihilate the solution
  CHECK((inst.x_sol.transpose() * inst.u_perp).norm() < 1e-12);
  CHECK((inst.x_sol * inst.v_perp).norm() < 1e-12);
}

TEST_CASE("symmetric scenario shares the basis") {
  LowRankInstance inst = make_instance(20, 4, 16, Scenario::symmetric,
                                       Vector(), 5);
  CHECK((inst.u_basis - inst.v_basis).norm() == 0.0);
  CHECK((inst.x_sol - inst.x_sol.transpose()).norm() < 1e-13);
}

TEST_CASE("custom singular values are applied in order") {
  Vector sigma(3);
  sigma << 3.0, 2.0, 0.5;
  LowRankInstance inst = make_instance(15, 3, 12, Scenario::asymmetric,
                                       sigma, 2);
  Eigen::JacobiSVD<Matrix> svd(inst.x_sol);
  CHECK(svd.singularValues()(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(svd.singularValues()(2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("invalid instance parameters are rejected") {
  CHECK_THROWS(make_instance(10, -1, 8, Scenario::asymmetric, Vector(), 1));
  CHECK_THROWS(make_instance(10, 11, 8, Scenario::asymmetric, Vector(), 1));
  CHECK_THROWS(make_instance(10, 2, 11, Scenario::asymmetric, Vector(), 1));
  Vector bad(2);
  bad << 1.0, -1.0;
  CHECK_THROWS(make_instance(10, 2, 8, Scenario::asymmetric, bad, 1));
  CHECK_THROWS(BlockMask(5, 6));
}

TEST_CASE("scenario names round-trip") {
  CHECK(scenario_from_string(to_string(Scenario::asymmetric)) ==
        Scenario::asymmetric);
  CHECK(scenario_from_string(to_string(Scenario::symmetric)) ==
        Scenario::symmetric);
  CHECK_THROWS(scenario_from_string("nope"));
}

TEST_CASE("dims ratios") {
  ProblemDims d{80, 32, 72};
  CHECK(d.beta() == doctest::Approx(0.4));
  CHECK(d.eta() == doctest::Approx(0.9));
  CHECK(d.alpha() == doctest::Approx(0.99));
}

TEST_CASE("stable hash is order sensitive and spread out") {
  CHECK(stable_hash(1, 2, 3) != stable_hash(1, 3, 2));
  CHECK(stable_hash(1, 2) != stable_hash(2, 1));
  CHECK(stable_hash(0) != 0);
}
