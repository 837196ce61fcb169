#include "cvqec/postselect.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqec {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration.
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    weights[i] = weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

// Everything needed to evaluate one erasure event: the recorded-outcome
// marginal and the outcome-conditioned fidelities against the pure inputs.
struct EventPipeline {
  ErasurePattern pattern;
  Eigen::Vector2d outcome_mean;
  Eigen::Matrix2d outcome_cov;      // gamma units; statistical cov is half
  Eigen::Matrix2d outcome_prec;     // outcome_cov^{-1}
  double outcome_norm = 0.0;        // 1 / (pi sqrt(det outcome_cov))
  Eigen::Matrix2d outcome_chol;     // Cholesky of outcome_cov / 2, sampling
  // Conditional single-mode output blocks: mean(m) = base + gain * delta.
  Eigen::Vector2d base1, base2;
  Eigen::Matrix2d gain1, gain2;
  Eigen::Matrix2d overlap_prec1, overlap_prec2;  // (cov_in + cond_cov)^{-1}
  double overlap_norm1 = 0.0, overlap_norm2 = 0.0;
  Eigen::Vector2d target1, target2;  // pure input means

  double fidelity1(const Eigen::Vector2d& delta) const {
    const Eigen::Vector2d d = target1 - (base1 + gain1 * delta);
    return overlap_norm1 * std::exp(-d.dot(overlap_prec1 * d));
  }
  double fidelity2(const Eigen::Vector2d& delta) const {
    const Eigen::Vector2d d = target2 - (base2 + gain2 * delta);
    return overlap_norm2 * std::exp(-d.dot(overlap_prec2 * d));
  }
  double outcome_density(const Eigen::Vector2d& delta) const {
    return outcome_norm * std::exp(-delta.dot(outcome_prec * delta));
  }
};

std::vector<EventPipeline> build_pipelines(const GaussianState& in1, const GaussianState& in2,
                                           double p_e, const CodecConfig& cfg) {
  require(in1.n_modes() == 1 && in2.n_modes() == 1, "filter inputs must be single-mode");
  require(p_e >= 0.0 && p_e <= 1.0, "p_e must be in [0,1]");
  require(std::abs(std::sqrt(in1.cov().determinant()) - 1.0) <= 1e-6 &&
              std::abs(std::sqrt(in2.cov().determinant()) - 1.0) <= 1e-6,
          "filter fidelities are defined against pure inputs");

  const GaussianState encoded = encode(in1, in2, cfg.squeeze_r, cfg.symmetrize);
  const auto unmix = balanced_beam_splitter(4, 0, 1).inverse();

  std::vector<EventPipeline> pipelines;
  pipelines.reserve(16);
  for (const auto& pattern : all_patterns(p_e)) {
    if (pattern.probability <= 0.0) continue;
    GaussianState pre = decoder_premeasurement(erase_modes(encoded, pattern));
    if (cfg.symmetrize) pre = apply(unmix, pre);
    const auto mj = measurement_joint(pre, cfg.eta_hd, cfg.n_e);

    EventPipeline ep;
    ep.pattern = pattern;
    ep.outcome_mean = mj.mean_m;
    ep.outcome_cov = mj.cov_m;
    ep.outcome_prec = mj.cov_m.inverse();
    ep.outcome_norm = 1.0 / (M_PI * std::sqrt(mj.cov_m.determinant()));
    ep.outcome_chol = Eigen::LLT<Eigen::Matrix2d>(0.5 * mj.cov_m).matrixL();

    // Gaussian conditioning on the recorded outcomes: the conditional
    // covariance is outcome-independent, the mean is affine in delta.
    const Eigen::Matrix<double, 4, 2> k = mj.cov_cross * ep.outcome_prec;
    const Eigen::Matrix4d cond_cov = mj.cov_out - k * mj.cov_cross.transpose();
    ep.base1 = mj.mean_out.head<2>();
    ep.base2 = mj.mean_out.tail<2>();
    ep.gain1 = k.topRows<2>();
    ep.gain2 = k.bottomRows<2>();
    ep.target1 = in1.mean();
    ep.target2 = in2.mean();
    const Eigen::Matrix2d sum1 = in1.cov() + cond_cov.topLeftCorner<2, 2>();
    const Eigen::Matrix2d sum2 = in2.cov() + cond_cov.bottomRightCorner<2, 2>();
    ep.overlap_prec1 = sum1.inverse();
    ep.overlap_prec2 = sum2.inverse();
    ep.overlap_norm1 = 2.0 / std::sqrt(sum1.determinant());
    ep.overlap_norm2 = 2.0 / std::sqrt(sum2.determinant());
    pipelines.push_back(std::move(ep));
  }
  return pipelines;
}

struct Totals {
  double success = 0.0, fid1 = 0.0, fid2 = 0.0;
};

Totals integrate(const std::vector<EventPipeline>& pipelines, const ThresholdWindow& window,
                 int order, std::vector<PatternOutcome>* breakdown) {
  std::vector<double> nodes, weights;
  gauss_legendre(order, nodes, weights);

  Totals totals;
  for (const auto& ep : pipelines) {
    double acc = 0.0, f1 = 0.0, f2 = 0.0;
    for (int i = 0; i < order; ++i) {
      const double xm = window.x_th * nodes[i];
      for (int j = 0; j < order; ++j) {
        const double pm = window.p_th * nodes[j];
        const Eigen::Vector2d delta(xm - ep.outcome_mean(0), pm - ep.outcome_mean(1));
        const double w = weights[i] * weights[j] * ep.outcome_density(delta);
        acc += w;
        f1 += w * ep.fidelity1(delta);
        f2 += w * ep.fidelity2(delta);
      }
    }
    const double scale = window.x_th * window.p_th;
    acc *= scale;
    f1 *= scale;
    f2 *= scale;
    totals.success += ep.pattern.probability * acc;
    totals.fid1 += ep.pattern.probability * f1;
    totals.fid2 += ep.pattern.probability * f2;
    if (breakdown) breakdown->push_back({ep.pattern, acc, f1, f2});
  }
  return totals;
}

}  // namespace

FilterResult filter_analytic(const GaussianState& in1, const GaussianState& in2, double p_e,
                             const CodecConfig& cfg, const ThresholdWindow& window,
                             int quadrature_order) {
  require(window.x_th > 0.0 && window.p_th > 0.0, "window bounds must be positive");
  require(quadrature_order >= 2, "quadrature order must be >= 2");
  const auto pipelines = build_pipelines(in1, in2, p_e, cfg);

  const Totals coarse = integrate(pipelines, window, quadrature_order, nullptr);
  FilterResult result;
  const Totals fine = integrate(pipelines, window, 2 * quadrature_order, &result.per_pattern);

  const double denom = std::max(fine.success, 1e-300);
  result.success_prob = fine.success;
  result.fidelity_out1 = fine.fid1 / denom;
  result.fidelity_out2 = fine.fid2 / denom;

  const double coarse_denom = std::max(coarse.success, 1e-300);
  result.quadrature_error =
      std::max({std::abs(fine.success - coarse.success),
                std::abs(result.fidelity_out1 - coarse.fid1 / coarse_denom),
                std::abs(result.fidelity_out2 - coarse.fid2 / coarse_denom)});
  if (result.quadrature_error > 1e-4) {
    throw std::runtime_error("window quadrature did not converge under order doubling");
  }
  return result;
}

FilterResult filter_monte_carlo(const GaussianState& in1, const GaussianState& in2, double p_e,
                                const CodecConfig& cfg, const ThresholdWindow& window,
                                long n_samples, std::uint64_t seed) {
  require(window.x_th > 0.0 && window.p_th > 0.0, "window bounds must be positive");
  require(n_samples >= 1, "n_samples must be >= 1");
  const auto pipelines = build_pipelines(in1, in2, p_e, cfg);
  // Index pipelines by pattern mask for O(1) lookup of sampled events.
  std::array<const EventPipeline*, 16> by_mask{};
  for (const auto& ep : pipelines) by_mask[ep.pattern.mask] = &ep;

  std::mt19937_64 rng(seed);
  auto normal_pair = [&rng]() {
    const double u1 = 1.0 - uniform01(rng);  // (0,1]
    const double u2 = uniform01(rng);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    return Eigen::Vector2d(rad * std::cos(2.0 * M_PI * u2), rad * std::sin(2.0 * M_PI * u2));
  };

  long n_accept = 0;
  double sum_f1 = 0.0, sum_f1_sq = 0.0, sum_f2 = 0.0, sum_f2_sq = 0.0;
  std::array<long, 16> draws{};
  std::array<long, 16> accepts{};
  std::array<double, 16> f1_by_mask{}, f2_by_mask{};

  for (long s = 0; s < n_samples; ++s) {
    const auto pattern = sample_pattern(p_e, rng);
    const EventPipeline* ep = by_mask[pattern.mask];
    const Eigen::Vector2d m = ep->outcome_mean + ep->outcome_chol * normal_pair();
    ++draws[pattern.mask];
    if (std::abs(m(0)) > window.x_th || std::abs(m(1)) > window.p_th) continue;
    ++n_accept;
    ++accepts[pattern.mask];
    const Eigen::Vector2d delta = m - ep->outcome_mean;
    const double f1 = ep->fidelity1(delta);
    const double f2 = ep->fidelity2(delta);
    sum_f1 += f1;
    sum_f1_sq += f1 * f1;
    sum_f2 += f2;
    sum_f2_sq += f2 * f2;
    f1_by_mask[pattern.mask] += f1;
    f2_by_mask[pattern.mask] += f2;
  }

  FilterResult result;
  const double n = static_cast<double>(n_samples);
  result.success_prob = static_cast<double>(n_accept) / n;
  result.success_prob_se =
      std::sqrt(result.success_prob * (1.0 - result.success_prob) / n);
  if (n_accept > 0) {
    const double na = static_cast<double>(n_accept);
    result.fidelity_out1 = sum_f1 / na;
    result.fidelity_out2 = sum_f2 / na;
    if (n_accept > 1) {
      const double var1 = std::max(0.0, sum_f1_sq / na - result.fidelity_out1 * result.fidelity_out1);
      const double var2 = std::max(0.0, sum_f2_sq / na - result.fidelity_out2 * result.fidelity_out2);
      result.fidelity_out1_se = std::sqrt(var1 / na);
      result.fidelity_out2_se = std::sqrt(var2 / na);
    }
  }
  for (const auto& ep : pipelines) {
    const auto mask = ep.pattern.mask;
    if (draws[mask] == 0) {
      result.per_pattern.push_back({ep.pattern, 0.0, 0.0, 0.0});
      continue;
    }
    const double d = static_cast<double>(draws[mask]);
    result.per_pattern.push_back(
        {ep.pattern, static_cast<double>(accepts[mask]) / d, f1_by_mask[mask] / d,
         f2_by_mask[mask] / d});
  }
  return result;
}

double direct_channel_fidelity(const GaussianState& in1_pure, double p_e) {
  require(p_e >= 0.0 && p_e <= 1.0, "p_e must be in [0,1]");
  return (1.0 - p_e) + p_e * overlap_fidelity(in1_pure, vacuum(1));
}

FilterResult simple_splitter_protocol(const GaussianState& in1, double p_e,
                                      const ThresholdWindow& window, double eta_hd, double n_e) {
  CodecConfig cfg;
  cfg.squeeze_r = 0.0;
  cfg.eta_hd = eta_hd;
  cfg.n_e = n_e;
  return filter_analytic(in1, vacuum(1), p_e, cfg, window);
}

}  // namespace cvqec
