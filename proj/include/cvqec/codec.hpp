#pragma once

#include <optional>

#include "cvqec/channel.hpp"
#include "cvqec/gaussian.hpp"

// Encoder and deterministic feedforward decoder.
//
// Encoding mixes the two signal modes with the two halves of a two-mode
// squeezed vacuum on balanced beam splitters, producing transmitted modes
// (A, B, C, D). Decoding recombines (A,B) and (C,D), mixes the auxiliary
// ports on a third balanced beam splitter, homodynes p of mode 3 and x of
// mode 4, and displaces the outputs by gain-scaled outcomes:
//
//   x_out1 = x_1 + g_x1 * x_m      p_out1 = p_1 + g_p1 * p_m
//   x_out2 = x_2 + g_x2 * x_m      p_out2 = p_2 + g_p2 * p_m
//
// The outcome-linear displacement is folded into the Gaussian moments
// analytically, so decoding is exact (no sampling).

namespace cvqec {

/// Electronic feedforward gains (shot-noise units).
struct GainSet {
  double g_x1 = 0.0;
  double g_p1 = 0.0;
  double g_x2 = 0.0;
  double g_p2 = 0.0;

  /// Rows (x1,p1,x2,p2) by columns (x_m,p_m).
  Eigen::Matrix<double, 4, 2> as_matrix() const;
};

/// Gain row for a known erasure location; all zeros when none.
///   A: (-s2,-s2, 0, 0)   B: (+s2,+s2, 0, 0)
///   C: ( 0, 0, +s2,-s2)  D: ( 0, 0, -s2,+s2)        (s2 = sqrt 2)
GainSet gain_table(std::optional<Mode> erased);

struct CodecConfig {
  double squeeze_r = 0.0;  // EPR squeeze parameter, >= 0
  double eta_hd = 1.0;     // homodyne efficiency, (0,1]
  double n_e = 0.0;        // electronic noise, shot-noise units, >= 0
  bool symmetrize = false;
};

/// Encode two single-mode states into transmitted modes (A,B,C,D). With
/// symmetrize, the inputs are premixed on a balanced beam splitter.
GaussianState encode(const GaussianState& in1, const GaussianState& in2, double squeeze_r,
                     bool symmetrize = false);

/// Decoder state just before homodyne: modes (1: upper output, 2: lower
/// output, 3: p-measured port, 4: x-measured port).
GaussianState decoder_premeasurement(const GaussianState& received);

/// Joint Gaussian of the pre-displacement outputs (modes 1,2) and the
/// recorded outcomes m = (x_m, p_m) under the detector model: loss eta_hd
/// against vacuum before an ideal homodyne, plus electronic noise n_e on the
/// recorded quadrature's variance.
struct MeasurementJoint {
  Eigen::Vector4d mean_out;                // modes 1,2 quadrature means
  Eigen::Vector2d mean_m;                  // recorded (x_m, p_m) means
  Eigen::Matrix4d cov_out;
  Eigen::Matrix<double, 4, 2> cov_cross;   // Cov(outputs, recorded outcomes)
  Eigen::Matrix2d cov_m;
};
MeasurementJoint measurement_joint(const GaussianState& premeasured, double eta_hd, double n_e);

struct DecodeResult {
  GaussianState joint;  // 2-mode output, correlations kept
  GaussianState out1() const { return partial_trace(joint, {0}); }
  GaussianState out2() const { return partial_trace(joint, {1}); }
};

/// Full deterministic decode with the gain row for the flagged erasure.
/// Multi-erasure inputs are processed faithfully, but the single-erasure
/// fidelity guarantees no longer apply to them.
DecodeResult decode_deterministic(const GaussianState& received, std::optional<Mode> erased,
                                  const CodecConfig& cfg);

/// Inverse of the symmetrizing beam splitter, applied to the joint 2-mode
/// output.
GaussianState unsymmetrize(const GaussianState& joint2);

}  // namespace cvqec
