#include "cvqec/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqec {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

int ErasurePattern::erased_count() const {
  int c = 0;
  for (int m = 0; m < kTransmittedModes; ++m) c += erases(m);
  return c;
}

std::string ErasurePattern::label() const {
  if (mask == 0) return "none";
  std::string s;
  for (int m = 0; m < kTransmittedModes; ++m) {
    if (erases(m)) s += static_cast<char>('A' + m);
  }
  return s;
}

ErasurePattern ErasurePattern::from_mask(std::uint8_t mask, double p_e) {
  require(mask < 16, "pattern mask must use the four transmitted modes");
  require(p_e >= 0.0 && p_e <= 1.0, "p_e must be in [0,1]");
  ErasurePattern p;
  p.mask = mask;
  const int k = p.erased_count();
  p.probability = std::pow(p_e, k) * std::pow(1.0 - p_e, kTransmittedModes - k);
  return p;
}

std::array<ErasurePattern, 16> all_patterns(double p_e) {
  std::array<ErasurePattern, 16> out;
  for (std::uint8_t m = 0; m < 16; ++m) out[m] = ErasurePattern::from_mask(m, p_e);
  return out;
}

GaussianState erase_modes(const GaussianState& state, const ErasurePattern& pattern) {
  require(state.n_modes() >= kTransmittedModes, "state must carry the four transmitted modes");
  Vec mean = state.mean();
  Mat cov = state.cov();
  for (int m = 0; m < kTransmittedModes; ++m) {
    if (!pattern.erases(m)) continue;
    const int x = 2 * m, p = 2 * m + 1;
    mean(x) = mean(p) = 0.0;
    cov.row(x).setZero();
    cov.row(p).setZero();
    cov.col(x).setZero();
    cov.col(p).setZero();
    cov(x, x) = cov(p, p) = 1.0;
  }
  return {std::move(mean), std::move(cov)};
}

GaussianState partial_loss(const GaussianState& state, int mode, double transmittance) {
  require(mode >= 0 && mode < state.n_modes(), "loss mode out of range");
  require(transmittance >= 0.0 && transmittance <= 1.0, "transmittance must be in [0,1]");
  const double s = std::sqrt(transmittance);
  const int x = 2 * mode, p = 2 * mode + 1;
  Vec mean = state.mean();
  Mat cov = state.cov();
  mean(x) *= s;
  mean(p) *= s;
  cov.row(x) *= s;
  cov.row(p) *= s;
  cov.col(x) *= s;
  cov.col(p) *= s;
  cov(x, x) += 1.0 - transmittance;
  cov(p, p) += 1.0 - transmittance;
  return {std::move(mean), std::move(cov)};
}

GaussianMixture channel_mixture(const GaussianState& state, double p_e) {
  require(state.n_modes() >= kTransmittedModes, "state must carry the four transmitted modes");
  GaussianMixture mix;
  for (const auto& pattern : all_patterns(p_e)) {
    if (pattern.probability <= 0.0) continue;
    mix.components.push_back({pattern.probability, pattern, erase_modes(state, pattern)});
  }
  return mix;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ErasurePattern sample_pattern(double p_e, std::mt19937_64& rng) {
  require(p_e >= 0.0 && p_e <= 1.0, "p_e must be in [0,1]");
  std::uint8_t mask = 0;
  for (int m = 0; m < kTransmittedModes; ++m) {
    if (uniform01(rng) < p_e) mask |= static_cast<std::uint8_t>(1u << m);
  }
  return ErasurePattern::from_mask(mask, p_e);
}

}  // namespace cvqec
