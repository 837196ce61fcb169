#pragma once

#include <vector>

#include <Eigen/Dense>

// Phase-space conventions used throughout this library:
//
//   * Quadratures are ordered (x1, p1, ..., xn, pn).
//   * The vacuum covariance matrix is the identity; a covariance is physical
//     iff every symplectic eigenvalue is >= 1.
//   * A coherent state of amplitude a has mean (sqrt(2) Re a, sqrt(2) Im a),
//     which gives |<a|b>|^2 = exp(-|a - b|^2).
//   * The Wigner function of an n-mode Gaussian state is
//         W(r) = exp[-(r - d)^T g^{-1} (r - d)] / (pi^n sqrt(det g)),
//     normalized to 1 over phase space.
//   * The symplectic form is Omega = blkdiag([[0,1],[-1,0]], ...).
//
// Every tolerance in the library and its tests assumes these conventions.

namespace cvqec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Quadrature { X, P };

/// Symplectic form Omega for n modes, interleaved ordering.
Mat symplectic_form(int n_modes);

/// Symplectic eigenvalues of a covariance matrix, ascending.
std::vector<double> symplectic_eigenvalues(const Mat& cov);

/// Max-norm deviation of S from the symplectic condition S Omega S^T = Omega.
double symplectic_defect(const Mat& s);

class GaussianState {
 public:
  /// Validates dimensions, symmetry (1e-12) and the uncertainty relation
  /// (symplectic eigenvalues >= 1 - 1e-9); stores the symmetrized covariance.
  GaussianState(Vec mean, Mat cov);

  int n_modes() const { return n_modes_; }
  const Vec& mean() const { return mean_; }
  const Mat& cov() const { return cov_; }

  static int x_index(int mode) { return 2 * mode; }
  static int p_index(int mode) { return 2 * mode + 1; }

 private:
  Vec mean_;
  Mat cov_;
  int n_modes_;
};

/// Linear phase-space map r -> S r + d. Factories below produce valid
/// symplectic matrices; apply() re-checks the invariant.
struct SymplecticOp {
  Mat matrix;
  Vec displacement;

  int n_modes() const { return static_cast<int>(matrix.rows()) / 2; }

  /// Composition: first this, then next (i.e. next * this).
  SymplecticOp then(const SymplecticOp& next) const;
  SymplecticOp inverse() const;

  static SymplecticOp identity(int n_modes);
  static SymplecticOp displacing(Vec d);
};

GaussianState vacuum(int n_modes);
GaussianState coherent(double alpha_re, double alpha_im);

/// Two-mode squeezed vacuum: Var((x1-x2)/sqrt2) = Var((p1+p2)/sqrt2) = e^{-2r}.
GaussianState two_mode_squeezed(double r);

/// Beam splitter acting identically on x and p:
///   out_a = sqrt(t) a + sqrt(1-t) b,  out_b = sqrt(1-t) a - sqrt(t) b.
SymplecticOp beam_splitter(int n_modes, int mode_a, int mode_b, double transmittance);
SymplecticOp balanced_beam_splitter(int n_modes, int mode_a, int mode_b);

/// CV CNOT: x_t -> x_t + x_c, p_c -> p_c - p_t; inverse undoes it.
SymplecticOp cv_cnot(int n_modes, int control, int target);
SymplecticOp cv_cnot_inverse(int n_modes, int control, int target);

/// Single-mode squeezer: x -> e^{-r} x, p -> e^{+r} p.
SymplecticOp squeezer(int n_modes, int mode, double r);

/// Phase rotation by theta in the (x,p) plane of one mode.
SymplecticOp phase_shift(int n_modes, int mode, double theta);

/// Mode relabeling: new mode i carries what was mode perm[i].
SymplecticOp mode_permutation(const std::vector<int>& perm);

GaussianState apply(const SymplecticOp& op, const GaussianState& state);

GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Keep the listed modes (strictly ascending), trace out the rest.
GaussianState partial_trace(const GaussianState& state, const std::vector<int>& keep);

/// Wigner function value at a phase-space point (length 2n).
double wigner(const GaussianState& state, const Vec& point);

/// Tr[rho^2] = 1/sqrt(det cov).
double purity(const GaussianState& state);

struct HomodyneResult {
  GaussianState state;  // conditional state of the remaining modes
  double density;       // probability density of the recorded outcome
};

/// Homodyne one quadrature of one mode and condition the rest on the recorded
/// value. The detector is a beam splitter of transmittance eta_hd against
/// vacuum followed by an ideal measurement, with electronic noise n_e (shot
/// noise units) added to the recorded quadrature's variance.
HomodyneResult condition_on_homodyne(const GaussianState& state, int mode,
                                     Quadrature quad, double outcome,
                                     double eta_hd = 1.0, double n_e = 0.0);

/// <psi|rho|psi> for a pure single-mode reference, via 2*pi Int W_pure W_rho.
double overlap_fidelity(const GaussianState& pure, const GaussianState& rho);

struct BlochMessiahFactors {
  SymplecticOp passive_out;      // orthogonal symplectic, applied last
  std::vector<double> squeezes;  // r_k >= 0, descending
  SymplecticOp passive_in;       // orthogonal symplectic, applied first

  /// passive_out * blkdiag(e^{r_k}, e^{-r_k}) * passive_in.
  Mat reconstruct() const;
};

/// Euler (Bloch-Messiah) decomposition: interferometer, single-mode
/// squeezers, interferometer. Decomposes the matrix part only.
BlochMessiahFactors bloch_messiah(const SymplecticOp& op);

}  // namespace cvqec
