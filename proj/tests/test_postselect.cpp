#include <cmath>

#include <doctest.h>

#include "cvqec/postselect.hpp"
#include "cvqec/sweep.hpp"
#include "test_helpers.hpp"

using namespace cvqec;

namespace {

const GaussianState kFigInput = coherent(2.8284271247461903, 2.8284271247461903);

CodecConfig fig_config(double squeeze_db) {
  CodecConfig cfg;
  cfg.squeeze_r = db_to_r(squeeze_db);
  cfg.eta_hd = 0.9;
  cfg.n_e = 0.0;
  return cfg;
}

ThresholdWindow auto_window(double squeeze_db) {
  const double th = std::exp(-db_to_r(squeeze_db));
  return {th, th};
}

// Closed-form rectangle mass for independent Gaussian outcomes.
double erf_rect_mass(double half_width, double variance_gamma) {
  // Statistical std is sqrt(variance_gamma / 2).
  return std::erf(half_width / std::sqrt(variance_gamma));
}

}  // namespace

TEST_CASE("direct channel fidelity") {
  CHECK(direct_channel_fidelity(kFigInput, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(direct_channel_fidelity(vacuum(1), 0.7) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(direct_channel_fidelity(kFigInput, 0.2) ==
        doctest::Approx(0.8 + 0.2 * std::exp(-16.0)).epsilon(1e-12));
}

TEST_CASE("analytic filter, no erasures") {
  const double pe = 0.0;
  const auto cfg = fig_config(0.0);
  const ThresholdWindow window{1.0, 1.0};
  const auto res = filter_analytic(kFigInput, vacuum(1), pe, cfg, window);

  CHECK(res.fidelity_out1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.fidelity_out2 == doctest::Approx(1.0).epsilon(1e-9));

  // With no erasure both recorded outcomes are independent zero-mean
  // Gaussians of recorded variance eta + (1 - eta) = 1.
  const double expected = erf_rect_mass(1.0, 1.0) * erf_rect_mass(1.0, 1.0);
  CHECK(res.success_prob == doctest::Approx(expected).epsilon(1e-9));
  CHECK(res.quadrature_error < 1e-6);
  REQUIRE(res.per_pattern.size() == 1);
  CHECK(res.per_pattern[0].pattern.mask == 0);
}

TEST_CASE("analytic filter properties on the sweep grid") {
  const auto in2 = vacuum(1);

  SUBCASE("success probability recomposes from the pattern breakdown") {
    const auto cfg = fig_config(3.0);
    const auto res = filter_analytic(kFigInput, in2, 0.2, cfg, auto_window(3.0));
    REQUIRE(res.per_pattern.size() == 16);
    double total = 0.0;
    for (const auto& p : res.per_pattern) {
      CHECK(p.acceptance_prob >= 0.0);
      CHECK(p.acceptance_prob <= 1.0);
      total += p.pattern.probability * p.acceptance_prob;
    }
    CHECK(total == doctest::Approx(res.success_prob).epsilon(1e-9));
    CHECK(res.success_prob >= 0.0);
    CHECK(res.success_prob <= 1.0);
    CHECK(res.fidelity_out1 >= 0.0);
    CHECK(res.fidelity_out1 <= 1.0);
  }

  SUBCASE("shrinking the window trades success for fidelity") {
    const auto cfg = fig_config(0.0);
    const auto wide = filter_analytic(kFigInput, in2, 0.15, cfg, {1.5, 1.5});
    const auto tight = filter_analytic(kFigInput, in2, 0.15, cfg, {0.5, 0.5});
    CHECK(tight.success_prob < wide.success_prob);
    CHECK(tight.fidelity_out1 >= wide.fidelity_out1 - 1e-9);
  }

  SUBCASE("wide-open window accepts everything") {
    const auto cfg = fig_config(0.0);
    const auto res = filter_analytic(kFigInput, in2, 0.25, cfg, {1e3, 1e3});
    CHECK(res.success_prob == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("fidelity grows with input amplitude at fixed p_e") {
    const auto cfg = fig_config(0.0);
    double previous = -1.0;
    for (double amp2 : {0.0, 4.0, 9.0, 16.0}) {
      const auto alpha = std::sqrt(amp2 / 2.0);
      const auto res = filter_analytic(coherent(alpha, alpha), in2, 0.15, cfg, {1.0, 1.0});
      CHECK(res.fidelity_out1 >= previous - 1e-9);
      previous = res.fidelity_out1;
    }
  }
}

TEST_CASE("monte carlo agrees with the analytic engine") {
  const auto in2 = vacuum(1);
  long cell = 0;
  for (double pe : {0.0, 0.1, 0.3}) {
    for (double db : {0.0, 3.0, 6.0}) {
      const auto cfg = fig_config(db);
      const auto window = auto_window(db);
      const auto analytic = filter_analytic(kFigInput, in2, pe, cfg, window);
      const auto mc =
          filter_monte_carlo(kFigInput, in2, pe, cfg, window, 100000, 777 + cell++);
      CHECK(std::abs(analytic.success_prob - mc.success_prob) <=
            std::max(3.0 * mc.success_prob_se, 1e-9));
      CHECK(std::abs(analytic.fidelity_out1 - mc.fidelity_out1) <=
            std::max(3.0 * mc.fidelity_out1_se, 1e-9));
      CHECK(std::abs(analytic.fidelity_out2 - mc.fidelity_out2) <=
            std::max(3.0 * mc.fidelity_out2_se, 1e-9));
    }
  }
}

TEST_CASE("monte carlo basics") {
  const auto cfg = fig_config(3.0);
  const auto window = auto_window(3.0);

  SUBCASE("p_e = 0 gives unit fidelity exactly") {
    const auto res = filter_monte_carlo(kFigInput, vacuum(1), 0.0, cfg, window, 5000, 9);
    CHECK(res.fidelity_out1 == 1.0);
    CHECK(res.fidelity_out2 == 1.0);
  }

  SUBCASE("deterministic under a fixed seed") {
    const auto a = filter_monte_carlo(kFigInput, vacuum(1), 0.2, cfg, window, 20000, 4242);
    const auto b = filter_monte_carlo(kFigInput, vacuum(1), 0.2, cfg, window, 20000, 4242);
    CHECK(a.success_prob == b.success_prob);
    CHECK(a.fidelity_out1 == b.fidelity_out1);
    CHECK(a.fidelity_out2 == b.fidelity_out2);
  }

  SUBCASE("wide-open window keeps every sample") {
    const auto res = filter_monte_carlo(kFigInput, vacuum(1), 0.3, cfg, {1e3, 1e3}, 20000, 31);
    CHECK(res.success_prob == 1.0);
  }

  SUBCASE("full erasure degrades the output towards vacuum") {
    const auto analytic = filter_analytic(kFigInput, vacuum(1), 1.0, cfg, window);
    const auto mc = filter_monte_carlo(kFigInput, vacuum(1), 1.0, cfg, window, 100000, 55);
    CHECK(std::abs(analytic.fidelity_out1 - mc.fidelity_out1) <=
          std::max(3.0 * mc.fidelity_out1_se, 1e-9));
    CHECK(analytic.fidelity_out1 < 0.05);  // bright input against near-vacuum output
  }
}

TEST_CASE("filtration beats direct transmission at 0 dB") {
  const auto cfg = fig_config(0.0);
  for (double pe : {0.05, 0.1, 0.15, 0.2, 0.25}) {
    const auto res = filter_analytic(kFigInput, vacuum(1), pe, cfg, {1.0, 1.0});
    CHECK(res.fidelity_out1 > direct_channel_fidelity(kFigInput, pe));
  }
}

TEST_CASE("simple splitter protocol") {
  SUBCASE("identical to the filter engine with r = 0 and vacuum input 2") {
    const ThresholdWindow window{1.0, 1.0};
    const auto named = simple_splitter_protocol(kFigInput, 0.12, window, 0.9, 0.0);
    CodecConfig cfg;
    cfg.squeeze_r = 0.0;
    cfg.eta_hd = 0.9;
    const auto general = filter_analytic(kFigInput, vacuum(1), 0.12, cfg, window);
    CHECK(named.success_prob == general.success_prob);
    CHECK(named.fidelity_out1 == general.fidelity_out1);
    CHECK(named.fidelity_out2 == general.fidelity_out2);
  }

  SUBCASE("perfect at p_e = 0") {
    const auto res = simple_splitter_protocol(kFigInput, 0.0, {1.0, 1.0});
    CHECK(res.fidelity_out1 == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("engine input validation") {
  CodecConfig cfg;
  CHECK_THROWS_AS(filter_analytic(kFigInput, vacuum(1), -0.1, cfg, {1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(filter_analytic(kFigInput, vacuum(1), 0.1, cfg, {0.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(filter_monte_carlo(kFigInput, vacuum(1), 0.1, cfg, {1.0, 1.0}, 0, 1),
                  std::invalid_argument);
  const GaussianState mixed(Vec::Zero(2), 2.0 * Mat::Identity(2, 2));
  CHECK_THROWS_AS(filter_analytic(mixed, vacuum(1), 0.1, cfg, {1.0, 1.0}),
                  std::invalid_argument);
}
