#include <cmath>
#include <random>

#include <doctest.h>

#include "cvqec/gaussian.hpp"
#include "test_helpers.hpp"

using namespace cvqec;
using test_helpers::max_abs_diff;

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

TEST_CASE("vacuum states") {
  const auto v1 = vacuum(1);
  CHECK(v1.mean().isZero(0.0));
  CHECK(max_abs_diff(v1.cov(), Mat::Identity(2, 2)) == 0.0);

  const auto v4 = vacuum(4);
  CHECK(v4.n_modes() == 4);
  CHECK(max_abs_diff(v4.cov(), Mat::Identity(8, 8)) == 0.0);

  CHECK(purity(vacuum(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(vacuum(0), std::invalid_argument);
}

TEST_CASE("coherent states") {
  const auto zero = coherent(0.0, 0.0);
  CHECK(max_abs_diff(zero.mean(), vacuum(1).mean()) == 0.0);
  CHECK(max_abs_diff(zero.cov(), vacuum(1).cov()) == 0.0);

  // Amplitude (4+4i)/sqrt(2): mean (4, 4), |alpha|^2 = 16.
  const auto a = coherent(4.0 / kSqrt2, 4.0 / kSqrt2);
  CHECK(a.mean()(0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(a.mean()(1) == doctest::Approx(4.0).epsilon(1e-14));

  const double analytic = std::exp(-16.0);  // 1.125e-7
  CHECK(overlap_fidelity(a, vacuum(1)) == doctest::Approx(analytic).epsilon(1e-9));
  // Independent quadrature oracle for the same overlap.
  const double numeric = test_helpers::wigner_grid_overlap(a, vacuum(1), 9.0, 80);
  CHECK(overlap_fidelity(a, vacuum(1)) == doctest::Approx(numeric).epsilon(1e-6));
}

TEST_CASE("two-mode squeezed vacuum") {
  SUBCASE("r = 0 is the two-mode vacuum") {
    const auto s = two_mode_squeezed(0.0);
    CHECK(max_abs_diff(s.cov(), Mat::Identity(4, 4)) < 1e-14);
    CHECK(s.mean().isZero(1e-14));
  }

  SUBCASE("6 dB squeezing") {
    const double target = std::pow(10.0, -0.6);  // 0.251
    const double r = -0.5 * std::log(target);
    const auto s = two_mode_squeezed(r);
    // Var(x3 - x4) = 2 e^{-2r} = 0.502.
    Vec diff(4);
    diff << 1, 0, -1, 0;
    CHECK(diff.dot(s.cov() * diff) == doctest::Approx(2.0 * target).epsilon(1e-12));
    Vec psum(4);
    psum << 0, 1, 0, 1;
    CHECK(psum.dot(s.cov() * psum) == doctest::Approx(2.0 * target).epsilon(1e-12));
    Vec xsum(4);
    xsum << 1, 0, 1, 0;
    CHECK(xsum.dot(s.cov() * xsum) == doctest::Approx(2.0 / target).epsilon(1e-9));
  }

  SUBCASE("pure for any r") {
    for (double r : {0.1, 0.7, 1.5}) {
      for (double nu : symplectic_eigenvalues(two_mode_squeezed(r).cov())) {
        CHECK(nu == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }

  CHECK_THROWS_AS(two_mode_squeezed(-0.1), std::invalid_argument);
}

TEST_CASE("beam splitter convention") {
  SUBCASE("t = 1 is the identity on the pair") {
    const auto op = beam_splitter(2, 0, 1, 1.0);
    CHECK(max_abs_diff(op.matrix, Mat::Identity(4, 4)) == 0.0);
  }

  SUBCASE("balanced splitter signs") {
    const auto op = balanced_beam_splitter(2, 0, 1);
    Vec mean_a(4), mean_b(4);
    mean_a << 3.0, 0.0, 0.0, 0.0;  // amplitude in the first input
    mean_b << 0.0, 0.0, 3.0, 0.0;  // amplitude in the second input
    const Vec out_a = op.matrix * mean_a;
    const Vec out_b = op.matrix * mean_b;
    CHECK(out_a(0) == doctest::Approx(3.0 / kSqrt2));
    CHECK(out_a(2) == doctest::Approx(3.0 / kSqrt2));
    CHECK(out_b(0) == doctest::Approx(3.0 / kSqrt2));
    CHECK(out_b(2) == doctest::Approx(-3.0 / kSqrt2));
  }

  SUBCASE("symplectic for random transmittance") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
      const auto op = beam_splitter(3, 0, 2, unit(rng));
      CHECK(symplectic_defect(op.matrix) < 1e-12);
    }
  }

  CHECK_THROWS_AS(beam_splitter(2, 1, 1, 0.5), std::invalid_argument);
}

TEST_CASE("cv cnot") {
  const auto c = cv_cnot(2, 0, 1);
  const auto inv = cv_cnot_inverse(2, 0, 1);
  CHECK(max_abs_diff(c.then(inv).matrix, Mat::Identity(4, 4)) < 1e-14);

  Vec mean(4);
  mean << 1.0, 0.0, 0.0, 0.0;
  const Vec out = c.matrix * mean;
  CHECK(out(0) == doctest::Approx(1.0));
  CHECK(out(2) == doctest::Approx(1.0));
  CHECK(out(1) == doctest::Approx(0.0));
  CHECK(out(3) == doctest::Approx(0.0));

  CHECK(symplectic_defect(c.matrix) < 1e-14);
}

TEST_CASE("apply") {
  SUBCASE("identity leaves the state unchanged") {
    const auto s = two_mode_squeezed(0.4);
    const auto out = apply(SymplecticOp::identity(2), s);
    CHECK(max_abs_diff(out.cov(), s.cov()) == 0.0);
    CHECK(max_abs_diff(out.mean(), s.mean()) == 0.0);
  }

  SUBCASE("displacement of vacuum gives a coherent state") {
    Vec d(2);
    d << kSqrt2 * 0.3, kSqrt2 * (-0.8);
    const auto out = apply(SymplecticOp::displacing(d), vacuum(1));
    const auto ref = coherent(0.3, -0.8);
    CHECK(max_abs_diff(out.mean(), ref.mean()) < 1e-15);
    CHECK(max_abs_diff(out.cov(), ref.cov()) == 0.0);
  }

  SUBCASE("purity preserved under symplectic evolution") {
    std::mt19937_64 rng(23);
    const auto op = test_helpers::random_symplectic(2, rng);
    const auto out = apply(op, two_mode_squeezed(0.5));
    CHECK(purity(out) == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("non-symplectic matrices are rejected") {
    SymplecticOp bad{2.0 * Mat::Identity(2, 2), Vec::Zero(2)};
    CHECK_THROWS_AS(apply(bad, vacuum(1)), std::invalid_argument);
  }
}

TEST_CASE("tensor and partial trace") {
  CHECK(max_abs_diff(tensor(vacuum(1), vacuum(1)).cov(), vacuum(2).cov()) == 0.0);

  SUBCASE("marginal of the EPR pair is thermal") {
    const double r = 0.5;
    const auto reduced = partial_trace(two_mode_squeezed(r), {0});
    CHECK(max_abs_diff(reduced.cov(), std::cosh(2.0 * r) * Mat::Identity(2, 2)) < 1e-12);
    // cosh(1) frozen from the hyperbolic identity.
    CHECK(reduced.cov()(0, 0) == doctest::Approx(1.5430806348152437).epsilon(1e-14));
  }

  SUBCASE("tensor then trace returns the factor") {
    const auto a = coherent(0.7, -0.2);
    const auto b = two_mode_squeezed(0.6);
    const auto joined = tensor(a, b);
    const auto back = partial_trace(joined, {0});
    CHECK(max_abs_diff(back.mean(), a.mean()) == 0.0);
    CHECK(max_abs_diff(back.cov(), a.cov()) == 0.0);
    const auto rest = partial_trace(joined, {1, 2});
    CHECK(max_abs_diff(rest.cov(), b.cov()) == 0.0);
  }

  CHECK_THROWS_AS(partial_trace(vacuum(2), {1, 0}), std::invalid_argument);
}

TEST_CASE("wigner function") {
  const auto vac = vacuum(1);
  Vec origin = Vec::Zero(2);
  CHECK(wigner(vac, origin) == doctest::Approx(1.0 / M_PI).epsilon(1e-14));

  const auto a = coherent(1.3, -0.4);
  CHECK(wigner(a, a.mean()) == doctest::Approx(1.0 / M_PI).epsilon(1e-14));

  SUBCASE("normalization, one mode") {
    CHECK(test_helpers::wigner_grid_integral(a, 8.0, 60) == doctest::Approx(1.0).epsilon(1e-8));
  }

  SUBCASE("normalization, two modes") {
    const auto s = two_mode_squeezed(0.35);
    CHECK(test_helpers::wigner_grid_integral(s, 8.0, 32) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("homodyne conditioning") {
  SUBCASE("product state leaves the other mode untouched") {
    const auto a = coherent(0.4, 0.9);
    const auto joint = tensor(a, coherent(-1.0, 0.3));
    const auto res = condition_on_homodyne(joint, 1, Quadrature::X, 0.2);
    CHECK(max_abs_diff(res.state.mean(), a.mean()) < 1e-15);
    CHECK(max_abs_diff(res.state.cov(), a.cov()) < 1e-15);
    // Outcome density is the Gaussian of the measured marginal.
    const double mu = kSqrt2 * (-1.0);
    const double expected = std::exp(-(0.2 - mu) * (0.2 - mu)) / std::sqrt(M_PI);
    CHECK(res.density == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("EPR conditioning reaches the Schur complement") {
    const double r = 0.8;
    const auto res = condition_on_homodyne(two_mode_squeezed(r), 1, Quadrature::X, 0.0);
    CHECK(res.state.cov()(0, 0) ==
          doctest::Approx(1.0 / std::cosh(2.0 * r)).epsilon(1e-12));
    CHECK(res.state.cov()(1, 1) == doctest::Approx(std::cosh(2.0 * r)).epsilon(1e-12));
  }

  SUBCASE("conditional covariance is outcome independent, mean is affine") {
    const auto s = two_mode_squeezed(0.6);
    const auto r0 = condition_on_homodyne(s, 1, Quadrature::P, 0.0, 0.85, 0.02);
    const auto r1 = condition_on_homodyne(s, 1, Quadrature::P, 1.7, 0.85, 0.02);
    CHECK(max_abs_diff(r0.state.cov(), r1.state.cov()) == 0.0);
    CHECK(max_abs_diff(r0.state.mean(), r1.state.mean()) > 0.0);
  }

  SUBCASE("unit efficiency and zero noise reduce to the ideal update") {
    const auto s = two_mode_squeezed(0.6);
    const auto noisy_free = condition_on_homodyne(s, 0, Quadrature::X, 0.3, 1.0, 0.0);
    // Ideal update computed by hand from the covariance blocks.
    const double v = s.cov()(0, 0);
    const Vec cross = s.cov()(Eigen::seqN(2, 2), Eigen::seqN(0, 1)).col(0);
    const Vec mean = cross * (0.3 / v);
    const Mat cov = s.cov().bottomRightCorner(2, 2) - cross * cross.transpose() / v;
    CHECK(max_abs_diff(noisy_free.state.mean(), mean) == 0.0);
    CHECK(max_abs_diff(noisy_free.state.cov(), cov) == 0.0);
  }

  SUBCASE("outcome density integrates to one") {
    const auto s = two_mode_squeezed(0.5);
    std::vector<double> nodes, weights;
    test_helpers::legendre_rule(160, -14.0, 14.0, nodes, weights);
    double total = 0.0;
    for (int i = 0; i < 160; ++i) {
      total += weights[i] *
               condition_on_homodyne(s, 0, Quadrature::X, nodes[i], 0.9, 0.05).density;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  }

  SUBCASE("degenerate measured variance is rejected") {
    // A covariance this squeezed is unphysical, so the guard triggers at
    // construction already; build the guard check directly instead.
    CHECK_THROWS_AS(condition_on_homodyne(vacuum(2), 0, Quadrature::X, 0.0, 1.5, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(condition_on_homodyne(vacuum(2), 0, Quadrature::X, 0.0, 0.9, -0.1),
                    std::invalid_argument);
  }
}

TEST_CASE("overlap fidelity") {
  const auto a = coherent(0.9, -1.1);
  CHECK(overlap_fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-14));

  // Same mean, covariance (1 + 2 e^{-2r}) I.
  const double e2r = 0.25;
  const GaussianState degraded(a.mean(), (1.0 + 2.0 * e2r) * Mat::Identity(2, 2));
  CHECK(overlap_fidelity(a, degraded) == doctest::Approx(1.0 / (1.0 + e2r)).epsilon(1e-12));

  // Mixed reference rejected.
  const GaussianState thermal(Vec::Zero(2), 2.0 * Mat::Identity(2, 2));
  CHECK_THROWS_AS(overlap_fidelity(thermal, a), std::invalid_argument);
}

TEST_CASE("bloch-messiah decomposition") {
  std::mt19937_64 rng(7);

  SUBCASE("passive input has trivial squeezes") {
    const auto passive = balanced_beam_splitter(3, 0, 2).then(phase_shift(3, 1, 0.7));
    const auto f = bloch_messiah(passive);
    for (double r : f.squeezes) CHECK(std::abs(r) < 1e-10);
    CHECK(max_abs_diff(f.reconstruct(), passive.matrix) < 1e-10);
  }

  SUBCASE("single-mode squeezer decomposes into itself up to phases") {
    const auto sq = squeezer(1, 0, 0.3);
    const auto f = bloch_messiah(sq);
    CHECK(f.squeezes.size() == 1);
    CHECK(f.squeezes[0] == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(max_abs_diff(f.reconstruct(), sq.matrix) < 1e-10);
    CHECK(symplectic_defect(f.passive_in.matrix) < 1e-10);
    CHECK(max_abs_diff(f.passive_in.matrix * f.passive_in.matrix.transpose(),
                       Mat::Identity(2, 2)) < 1e-10);
  }

  SUBCASE("random symplectics reconstruct") {
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 4);
      const auto op = test_helpers::random_symplectic(n, rng);
      const auto f = bloch_messiah(op);
      CHECK(max_abs_diff(f.reconstruct(), op.matrix) < 1e-10);
      // Passive factors are orthogonal and symplectic.
      CHECK(symplectic_defect(f.passive_out.matrix) < 1e-10);
      CHECK(symplectic_defect(f.passive_in.matrix) < 1e-10);
      CHECK(max_abs_diff(f.passive_out.matrix * f.passive_out.matrix.transpose(),
                         Mat::Identity(2 * n, 2 * n)) < 1e-10);
      CHECK(max_abs_diff(f.passive_in.matrix * f.passive_in.matrix.transpose(),
                         Mat::Identity(2 * n, 2 * n)) < 1e-10);
      // Squeezes sorted descending.
      for (std::size_t k = 1; k < f.squeezes.size(); ++k) {
        CHECK(f.squeezes[k - 1] >= f.squeezes[k] - 1e-12);
      }
    }
  }

  SUBCASE("non-symplectic input rejected") {
    SymplecticOp bad{Mat::Identity(4, 4) * 1.01, Vec::Zero(4)};
    CHECK_THROWS_AS(bloch_messiah(bad), std::invalid_argument);
  }
}

TEST_CASE("state validation") {
  Mat asym = Mat::Identity(2, 2);
  asym(0, 1) = 1e-6;
  CHECK_THROWS_AS(GaussianState(Vec::Zero(2), asym), std::invalid_argument);
  CHECK_THROWS_AS(GaussianState(Vec::Zero(2), 0.5 * Mat::Identity(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("constructors satisfy the symplectic condition") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto op = test_helpers::random_symplectic(n, rng);
    CHECK(symplectic_defect(op.matrix) < 1e-12);
  }
}

TEST_CASE("physicality preserved under evolution") {
  std::mt19937_64 rng(5);
  auto state = tensor(coherent(0.5, 0.1), two_mode_squeezed(0.9));
  for (int i = 0; i < 10; ++i) {
    state = apply(test_helpers::random_symplectic(3, rng), state);
    CHECK(symplectic_eigenvalues(state.cov()).front() >= 1.0 - 1e-9);
  }
}
