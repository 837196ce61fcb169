#include "cvqec/codec.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqec {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

const double kSqrt2 = std::sqrt(2.0);

}  // namespace

Eigen::Matrix<double, 4, 2> GainSet::as_matrix() const {
  Eigen::Matrix<double, 4, 2> g = Eigen::Matrix<double, 4, 2>::Zero();
  g(0, 0) = g_x1;
  g(1, 1) = g_p1;
  g(2, 0) = g_x2;
  g(3, 1) = g_p2;
  return g;
}

GainSet gain_table(std::optional<Mode> erased) {
  if (!erased) return {};
  switch (*erased) {
    case Mode::A:
      return {-kSqrt2, -kSqrt2, 0.0, 0.0};
    case Mode::B:
      return {kSqrt2, kSqrt2, 0.0, 0.0};
    case Mode::C:
      return {0.0, 0.0, kSqrt2, -kSqrt2};
    case Mode::D:
      return {0.0, 0.0, -kSqrt2, kSqrt2};
  }
  throw std::invalid_argument("unknown erasure location");
}

GaussianState encode(const GaussianState& in1, const GaussianState& in2, double squeeze_r,
                     bool symmetrize) {
  require(in1.n_modes() == 1 && in2.n_modes() == 1, "encoder inputs must be single-mode");
  require(squeeze_r >= 0.0, "squeeze parameter must be >= 0");
  // Mode layout before mixing: (in1, in2, E3, E4).
  GaussianState state = tensor(tensor(in1, in2), two_mode_squeezed(squeeze_r));
  auto circuit = SymplecticOp::identity(4);
  if (symmetrize) circuit = circuit.then(balanced_beam_splitter(4, 0, 1));
  circuit = circuit.then(balanced_beam_splitter(4, 0, 2))   // (in1,E3) -> (A,B)
                .then(balanced_beam_splitter(4, 1, 3))      // (in2,E4) -> (C,D)
                .then(mode_permutation({0, 2, 1, 3}));      // (A,B,C,D) ordering
  return apply(circuit, state);
}

GaussianState decoder_premeasurement(const GaussianState& received) {
  require(received.n_modes() == 4, "decoder expects the four transmitted modes");
  auto circuit = balanced_beam_splitter(4, 0, 1)            // (A,B) -> (out1, aux1)
                     .then(balanced_beam_splitter(4, 2, 3)) // (C,D) -> (out2, aux2)
                     .then(mode_permutation({0, 2, 1, 3}))  // (out1, out2, aux1, aux2)
                     .then(balanced_beam_splitter(4, 2, 3));  // aux ports -> modes 3,4
  return apply(circuit, received);
}

MeasurementJoint measurement_joint(const GaussianState& premeasured, double eta_hd, double n_e) {
  require(premeasured.n_modes() == 4, "premeasurement state must have four modes");
  require(eta_hd > 0.0 && eta_hd <= 1.0, "eta_hd must be in (0,1]");
  require(n_e >= 0.0, "n_e must be >= 0");

  // Recorded outcomes: m = (x of mode 4, p of mode 3).
  const Eigen::VectorXi out_idx = (Eigen::VectorXi(4) << 0, 1, 2, 3).finished();
  const Eigen::VectorXi m_idx = (Eigen::VectorXi(2) << 6, 5).finished();
  const double sqrt_eta = std::sqrt(eta_hd);

  MeasurementJoint joint;
  joint.mean_out = premeasured.mean()(out_idx);
  joint.mean_m = sqrt_eta * premeasured.mean()(m_idx);
  joint.cov_out = premeasured.cov()(out_idx, out_idx);
  joint.cov_cross = sqrt_eta * premeasured.cov()(out_idx, m_idx);
  joint.cov_m = eta_hd * premeasured.cov()(m_idx, m_idx) +
                ((1.0 - eta_hd) + n_e) * Eigen::Matrix2d::Identity();
  return joint;
}

DecodeResult decode_deterministic(const GaussianState& received, std::optional<Mode> erased,
                                  const CodecConfig& cfg) {
  const auto pre = decoder_premeasurement(received);
  const auto mj = measurement_joint(pre, cfg.eta_hd, cfg.n_e);
  const Eigen::Matrix<double, 4, 2> g = gain_table(erased).as_matrix();

  // out = r' + G m with m the recorded-outcome operators; exact moments.
  Vec mean = mj.mean_out + g * mj.mean_m;
  Mat cov = mj.cov_out + g * mj.cov_m * g.transpose() + mj.cov_cross * g.transpose() +
            g * mj.cov_cross.transpose();
  GaussianState joint(std::move(mean), std::move(cov));
  if (cfg.symmetrize) joint = unsymmetrize(joint);
  return {std::move(joint)};
}

GaussianState unsymmetrize(const GaussianState& joint2) {
  require(joint2.n_modes() == 2, "unsymmetrize expects the joint 2-mode output");
  return apply(balanced_beam_splitter(2, 0, 1).inverse(), joint2);
}

}  // namespace cvqec
