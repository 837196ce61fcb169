#include "cvqec/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cvqec/postselect.hpp"
#include "cvqec/sweep.hpp"

namespace cvqec {

namespace {

const double kSqrt2 = std::sqrt(2.0);

std::string deviation(double worst) {
  std::ostringstream out;
  out << "worst deviation " << format_number(worst);
  return out.str();
}

SymplecticOp random_symplectic(int n_modes, std::mt19937_64& rng) {
  auto angle = [&rng]() { return 2.0 * M_PI * uniform01(rng); };
  auto op = SymplecticOp::identity(n_modes);
  for (int k = 0; k < 3 * n_modes; ++k) {
    op = op.then(phase_shift(n_modes, static_cast<int>(rng() % n_modes), angle()));
    if (n_modes > 1) {
      const int a = static_cast<int>(rng() % n_modes);
      const int b = static_cast<int>(rng() % n_modes);
      if (a != b) op = op.then(beam_splitter(n_modes, a, b, 0.05 + 0.9 * uniform01(rng)));
    }
    op = op.then(squeezer(n_modes, static_cast<int>(rng() % n_modes),
                          -1.0 + 2.0 * uniform01(rng)));
  }
  return op;
}

VerifyGroup check_symplectic(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng() % 4);
    worst = std::max(worst, symplectic_defect(random_symplectic(n, rng).matrix));
  }
  worst = std::max(worst, symplectic_defect(cv_cnot(2, 0, 1).matrix));
  worst = std::max(worst, symplectic_defect(balanced_beam_splitter(2, 0, 1).matrix));
  return {"symplectic-invariant", worst <= 1e-12, deviation(worst)};
}

VerifyGroup check_bloch_messiah(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 1);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto op = random_symplectic(n, rng);
    const auto f = bloch_messiah(op);
    worst = std::max(worst, (f.reconstruct() - op.matrix).cwiseAbs().maxCoeff());
    worst = std::max(worst, (f.passive_out.matrix * f.passive_out.matrix.transpose() -
                             Mat::Identity(2 * n, 2 * n))
                                .cwiseAbs()
                                .maxCoeff());
  }
  return {"bloch-messiah-roundtrip", worst <= 1e-10, deviation(worst)};
}

VerifyGroup check_conditioning() {
  double worst = 0.0;
  const double r = 0.6;
  const auto epr = two_mode_squeezed(r);

  const auto c0 = condition_on_homodyne(epr, 1, Quadrature::X, 0.0);
  const auto c1 = condition_on_homodyne(epr, 1, Quadrature::X, 2.3);
  worst = std::max(worst, (c0.state.cov() - c1.state.cov()).cwiseAbs().maxCoeff());
  worst = std::max(worst, std::abs(c0.state.cov()(0, 0) - 1.0 / std::cosh(2.0 * r)));

  // Outcome density normalization on a wide trapezoid grid.
  double total = 0.0;
  const int n_pts = 4001;
  const double lo = -16.0, hi = 16.0;
  const double h = (hi - lo) / (n_pts - 1);
  for (int i = 0; i < n_pts; ++i) {
    const double w = (i == 0 || i == n_pts - 1) ? 0.5 : 1.0;
    total += w * h * condition_on_homodyne(epr, 0, Quadrature::P, lo + i * h, 0.9, 0.03).density;
  }
  worst = std::max(worst, std::abs(total - 1.0));
  return {"homodyne-conditioning", worst <= 1e-8, deviation(worst)};
}

VerifyGroup check_decoder_moments() {
  double worst = 0.0;
  const double r = db_to_r(6.0);
  const double e2r = db_to_e2r(6.0);
  const auto in1 = coherent(1.7, -0.6);
  const auto in2 = coherent(-0.4, 0.9);
  const double x_mean = in1.mean()(0);

  const auto encoded = encode(in1, in2, r);
  const auto erased_a = erase_modes(encoded, ErasurePattern::from_mask(0b0001, 0.1));
  const auto pre = decoder_premeasurement(erased_a);

  // Losing A halves the surviving signal and leaks -X/(2 sqrt 2) into x_m.
  worst = std::max(worst, std::abs(pre.mean()(0) - x_mean / 2.0));
  worst = std::max(worst, std::abs(pre.mean()(6) + x_mean / (2.0 * kSqrt2)));

  CodecConfig cfg;
  cfg.squeeze_r = r;
  const auto decoded = decode_deterministic(erased_a, Mode::A, cfg);
  worst = std::max(worst, std::abs(decoded.joint.mean()(0) - x_mean));
  worst = std::max(worst, std::abs(decoded.joint.cov()(0, 0) - (1.0 + 2.0 * e2r)));
  // The untouched arm comes back exactly.
  worst = std::max(worst, (decoded.out2().mean() - in2.mean()).cwiseAbs().maxCoeff());
  worst = std::max(worst, (decoded.out2().cov() - in2.cov()).cwiseAbs().maxCoeff());

  // Noise-minimizing feedforward gains must reproduce the gain table signs.
  const auto table = gain_table(Mode::A).as_matrix();
  const auto mj = measurement_joint(pre, 1.0, 0.0);
  for (int out_q = 0; out_q < 2; ++out_q) {  // x1 with x_m, p1 with p_m
    const double optimal = -mj.cov_cross(out_q, out_q) / mj.cov_m(out_q, out_q);
    if (optimal * table(out_q, out_q) <= 0.0) {
      return {"decoder-moments", false, "gain sign calibration failed"};
    }
  }
  return {"decoder-moments", worst <= 1e-12, deviation(worst)};
}

VerifyGroup check_engine_equivalence(std::uint64_t seed, long mc_samples) {
  const auto in1 = coherent(2.8284271247461903, 2.8284271247461903);
  const auto in2 = vacuum(1);
  double worst_sigma = 0.0;
  int cell = 0;
  for (double pe : {0.0, 0.1, 0.3}) {
    for (double db : {0.0, 3.0, 6.0}) {
      CodecConfig cfg;
      cfg.squeeze_r = db_to_r(db);
      cfg.eta_hd = 0.9;
      const ThresholdWindow window{std::exp(-cfg.squeeze_r), std::exp(-cfg.squeeze_r)};
      const auto analytic = filter_analytic(in1, in2, pe, cfg, window);
      const auto mc = filter_monte_carlo(in1, in2, pe, cfg, window, mc_samples, seed + cell++);
      const auto pulls = [&](double a, double b, double se) {
        return std::abs(a - b) / std::max(3.0 * se, 1e-9);
      };
      worst_sigma = std::max(
          {worst_sigma, pulls(analytic.success_prob, mc.success_prob, mc.success_prob_se),
           pulls(analytic.fidelity_out1, mc.fidelity_out1, mc.fidelity_out1_se),
           pulls(analytic.fidelity_out2, mc.fidelity_out2, mc.fidelity_out2_se)});
    }
  }
  std::ostringstream detail;
  detail << "worst |analytic-mc| at " << format_number(worst_sigma) << " of the 3-sigma budget";
  return {"engine-equivalence", worst_sigma <= 1.0, detail.str()};
}

}  // namespace

std::vector<VerifyGroup> run_verification(std::uint64_t seed, long mc_samples) {
  std::vector<VerifyGroup> groups;
  groups.push_back(check_symplectic(seed));
  groups.push_back(check_bloch_messiah(seed));
  groups.push_back(check_conditioning());
  groups.push_back(check_decoder_moments());
  groups.push_back(check_engine_equivalence(seed, mc_samples));
  return groups;
}

bool all_passed(const std::vector<VerifyGroup>& groups) {
  for (const auto& g : groups) {
    if (!g.passed) return false;
  }
  return true;
}

}  // namespace cvqec
