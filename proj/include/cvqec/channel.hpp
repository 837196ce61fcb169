#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cvqec/gaussian.hpp"

// Probabilistic erasure channel on the four transmitted modes. Each mode is
// independently replaced by vacuum with probability p_e, giving sixteen
// possible transmission events.

namespace cvqec {

inline constexpr int kTransmittedModes = 4;

enum class Mode : int { A = 0, B = 1, C = 2, D = 3 };

/// Subset of the transmitted modes that was erased, with its probability
/// p_e^k (1-p_e)^(4-k).
struct ErasurePattern {
  std::uint8_t mask = 0;
  double probability = 1.0;

  bool erases(int mode) const { return (mask >> mode) & 1; }
  bool erases(Mode mode) const { return erases(static_cast<int>(mode)); }
  int erased_count() const;
  std::string label() const;  // "none", "A", "AC", ...

  static ErasurePattern from_mask(std::uint8_t mask, double p_e);
};

/// All sixteen patterns in mask order; probabilities sum to 1.
std::array<ErasurePattern, 16> all_patterns(double p_e);

struct GaussianMixture {
  struct Component {
    double weight;
    ErasurePattern pattern;
    GaussianState state;
  };
  std::vector<Component> components;
};

/// Replace each erased mode by vacuum (zero mean, identity block, no
/// cross-correlations). Modes beyond the first four are untouched.
GaussianState erase_modes(const GaussianState& state, const ErasurePattern& pattern);

/// Pure loss of transmittance eta on one mode: beam splitter against vacuum
/// with the ancilla traced out. eta = 0 erases, eta = 1 is the identity.
GaussianState partial_loss(const GaussianState& state, int mode, double transmittance);

/// The channel output as a mixture over erasure events. Components with zero
/// weight (p_e exactly 0 or 1) are dropped.
GaussianMixture channel_mixture(const GaussianState& state, double p_e);

/// One erasure event, i.i.d. Bernoulli(p_e) per mode.
ErasurePattern sample_pattern(double p_e, std::mt19937_64& rng);

/// Uniform double in [0,1) from the top 53 bits, stable across platforms.
double uniform01(std::mt19937_64& rng);

}  // namespace cvqec
