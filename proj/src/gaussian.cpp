#include "cvqec/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cvqec {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPhysicalityTol = 1e-9;
constexpr double kSymplecticTol = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_mode_index(int n_modes, int mode, const char* name) {
  require(mode >= 0 && mode < n_modes, std::string(name) + " mode index out of range");
}

}  // namespace

Mat symplectic_form(int n_modes) {
  Mat omega = Mat::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

std::vector<double> symplectic_eigenvalues(const Mat& cov) {
  const int dim = static_cast<int>(cov.rows());
  require(dim % 2 == 0 && cov.cols() == dim, "covariance must be 2n x 2n");
  const int n = dim / 2;
  // Eigenvalues of Omega*cov come in +/- i*nu pairs; |.| recovers nu twice.
  Eigen::EigenSolver<Mat> es(symplectic_form(n) * cov, /*computeEigenvectors=*/false);
  std::vector<double> mags(dim);
  for (int i = 0; i < dim; ++i) mags[i] = std::abs(es.eigenvalues()[i]);
  std::sort(mags.begin(), mags.end());
  std::vector<double> nu(n);
  for (int k = 0; k < n; ++k) nu[k] = 0.5 * (mags[2 * k] + mags[2 * k + 1]);
  return nu;
}

double symplectic_defect(const Mat& s) {
  const int dim = static_cast<int>(s.rows());
  if (dim % 2 != 0 || s.cols() != dim) return std::numeric_limits<double>::infinity();
  const Mat omega = symplectic_form(dim / 2);
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

GaussianState::GaussianState(Vec mean, Mat cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
  const int dim = static_cast<int>(mean_.size());
  require(dim > 0 && dim % 2 == 0, "mean must have even positive length");
  require(cov_.rows() == dim && cov_.cols() == dim, "covariance size must match mean");
  n_modes_ = dim / 2;
  require((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTol,
          "covariance must be symmetric");
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
  const auto nu = symplectic_eigenvalues(cov_);
  require(nu.front() >= 1.0 - kPhysicalityTol, "covariance violates the uncertainty relation");
}

SymplecticOp SymplecticOp::then(const SymplecticOp& next) const {
  require(next.n_modes() == n_modes(), "mode counts must match in composition");
  return {next.matrix * matrix, next.matrix * displacement + next.displacement};
}

SymplecticOp SymplecticOp::inverse() const {
  // S^{-1} = Omega^T S^T Omega for symplectic S.
  const Mat omega = symplectic_form(n_modes());
  Mat inv = omega.transpose() * matrix.transpose() * omega;
  return {inv, -(inv * displacement).eval()};
}

SymplecticOp SymplecticOp::identity(int n_modes) {
  require(n_modes >= 1, "n_modes must be >= 1");
  return {Mat::Identity(2 * n_modes, 2 * n_modes), Vec::Zero(2 * n_modes)};
}

SymplecticOp SymplecticOp::displacing(Vec d) {
  require(d.size() > 0 && d.size() % 2 == 0, "displacement must have even positive length");
  const auto dim = d.size();
  return {Mat::Identity(dim, dim), std::move(d)};
}

GaussianState vacuum(int n_modes) {
  require(n_modes >= 1, "n_modes must be >= 1");
  return {Vec::Zero(2 * n_modes), Mat::Identity(2 * n_modes, 2 * n_modes)};
}

GaussianState coherent(double alpha_re, double alpha_im) {
  Vec mean(2);
  mean << std::sqrt(2.0) * alpha_re, std::sqrt(2.0) * alpha_im;
  return {mean, Mat::Identity(2, 2)};
}

GaussianState two_mode_squeezed(double r) {
  require(r >= 0.0, "squeeze parameter must be >= 0");
  // x-squeezed and p-squeezed arms mixed on a balanced beam splitter.
  auto prep = squeezer(2, 0, r).then(squeezer(2, 1, -r)).then(balanced_beam_splitter(2, 0, 1));
  return apply(prep, vacuum(2));
}

SymplecticOp beam_splitter(int n_modes, int mode_a, int mode_b, double transmittance) {
  check_mode_index(n_modes, mode_a, "beam splitter");
  check_mode_index(n_modes, mode_b, "beam splitter");
  require(mode_a != mode_b, "beam splitter modes must be distinct");
  require(transmittance >= 0.0 && transmittance <= 1.0, "transmittance must be in [0,1]");
  const double ct = std::sqrt(transmittance);
  const double st = std::sqrt(1.0 - transmittance);
  auto op = SymplecticOp::identity(n_modes);
  for (int q = 0; q < 2; ++q) {  // same action on x and p
    const int ia = 2 * mode_a + q, ib = 2 * mode_b + q;
    op.matrix(ia, ia) = ct;
    op.matrix(ia, ib) = st;
    op.matrix(ib, ia) = -st;
    op.matrix(ib, ib) = ct;
  }
  return op;
}

SymplecticOp balanced_beam_splitter(int n_modes, int mode_a, int mode_b) {
  return beam_splitter(n_modes, mode_a, mode_b, 0.5);
}

SymplecticOp cv_cnot(int n_modes, int control, int target) {
  check_mode_index(n_modes, control, "cnot");
  check_mode_index(n_modes, target, "cnot");
  require(control != target, "cnot modes must be distinct");
  auto op = SymplecticOp::identity(n_modes);
  op.matrix(2 * target, 2 * control) = 1.0;       // x_t += x_c
  op.matrix(2 * control + 1, 2 * target + 1) = -1.0;  // p_c -= p_t
  return op;
}

SymplecticOp cv_cnot_inverse(int n_modes, int control, int target) {
  return cv_cnot(n_modes, control, target).inverse();
}

SymplecticOp squeezer(int n_modes, int mode, double r) {
  check_mode_index(n_modes, mode, "squeezer");
  auto op = SymplecticOp::identity(n_modes);
  op.matrix(2 * mode, 2 * mode) = std::exp(-r);
  op.matrix(2 * mode + 1, 2 * mode + 1) = std::exp(r);
  return op;
}

SymplecticOp phase_shift(int n_modes, int mode, double theta) {
  check_mode_index(n_modes, mode, "phase shift");
  auto op = SymplecticOp::identity(n_modes);
  op.matrix(2 * mode, 2 * mode) = std::cos(theta);
  op.matrix(2 * mode, 2 * mode + 1) = std::sin(theta);
  op.matrix(2 * mode + 1, 2 * mode) = -std::sin(theta);
  op.matrix(2 * mode + 1, 2 * mode + 1) = std::cos(theta);
  return op;
}

SymplecticOp mode_permutation(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  require(n >= 1, "permutation must be nonempty");
  std::vector<bool> seen(n, false);
  for (int src : perm) {
    require(src >= 0 && src < n && !seen[src], "invalid mode permutation");
    seen[src] = true;
  }
  Mat s = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    s(2 * i, 2 * perm[i]) = 1.0;
    s(2 * i + 1, 2 * perm[i] + 1) = 1.0;
  }
  return {s, Vec::Zero(2 * n)};
}

GaussianState apply(const SymplecticOp& op, const GaussianState& state) {
  require(op.n_modes() == state.n_modes(), "operator/state mode counts must match");
  require(symplectic_defect(op.matrix) <= kSymplecticTol, "operator is not symplectic");
  Mat cov = op.matrix * state.cov() * op.matrix.transpose();
  cov = ((cov + cov.transpose()) / 2.0).eval();  // shed roundoff asymmetry
  return {op.matrix * state.mean() + op.displacement, std::move(cov)};
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const int da = 2 * a.n_modes(), db = 2 * b.n_modes();
  Vec mean(da + db);
  mean << a.mean(), b.mean();
  Mat cov = Mat::Zero(da + db, da + db);
  cov.topLeftCorner(da, da) = a.cov();
  cov.bottomRightCorner(db, db) = b.cov();
  return {mean, cov};
}

GaussianState partial_trace(const GaussianState& state, const std::vector<int>& keep) {
  require(!keep.empty(), "must keep at least one mode");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    check_mode_index(state.n_modes(), keep[i], "partial trace");
    require(i == 0 || keep[i] > keep[i - 1], "kept modes must be strictly ascending");
  }
  const int m = static_cast<int>(keep.size());
  Eigen::VectorXi idx(2 * m);
  for (int i = 0; i < m; ++i) {
    idx(2 * i) = 2 * keep[i];
    idx(2 * i + 1) = 2 * keep[i] + 1;
  }
  return {state.mean()(idx), state.cov()(idx, idx)};
}

double wigner(const GaussianState& state, const Vec& point) {
  require(point.size() == 2 * state.n_modes(), "point dimension must be 2n");
  Eigen::FullPivLU<Mat> lu(state.cov());
  const double det = lu.determinant();
  require(lu.isInvertible() && det > 0.0, "covariance not invertible");
  const Vec u = point - state.mean();
  const double quad = u.dot(lu.solve(u));
  const double pi_n = std::pow(M_PI, state.n_modes());
  return std::exp(-quad) / (pi_n * std::sqrt(det));
}

double purity(const GaussianState& state) {
  return 1.0 / std::sqrt(state.cov().determinant());
}

HomodyneResult condition_on_homodyne(const GaussianState& state, int mode, Quadrature quad,
                                     double outcome, double eta_hd, double n_e) {
  check_mode_index(state.n_modes(), mode, "homodyne");
  require(state.n_modes() >= 2, "conditioning needs at least one remaining mode");
  require(eta_hd > 0.0 && eta_hd <= 1.0, "eta_hd must be in (0,1]");
  require(n_e >= 0.0, "n_e must be >= 0");

  const int dim = 2 * state.n_modes();
  const int qi = 2 * mode + (quad == Quadrature::P ? 1 : 0);
  Eigen::VectorXi rest(dim - 2);
  for (int i = 0, j = 0; i < dim; ++i) {
    if (i == 2 * mode || i == 2 * mode + 1) continue;
    rest(j++) = i;
  }

  const double sqrt_eta = std::sqrt(eta_hd);
  const double var_rec = eta_hd * state.cov()(qi, qi) + (1.0 - eta_hd) + n_e;
  require(var_rec > 1e-12, "measured variance is degenerate");

  const Vec cross = sqrt_eta * state.cov()(rest, Eigen::VectorXi::Constant(1, qi)).col(0);
  const double delta = outcome - sqrt_eta * state.mean()(qi);

  Vec mean = state.mean()(rest) + cross * (delta / var_rec);
  Mat cov = state.cov()(rest, rest) - (cross * cross.transpose()) / var_rec;
  const double density = std::exp(-delta * delta / var_rec) / std::sqrt(M_PI * var_rec);
  return {GaussianState(std::move(mean), std::move(cov)), density};
}

double overlap_fidelity(const GaussianState& pure, const GaussianState& rho) {
  require(pure.n_modes() == 1 && rho.n_modes() == 1, "overlap fidelity is single-mode");
  require(std::abs(std::sqrt(pure.cov().determinant()) - 1.0) <= 1e-6,
          "reference state must be pure");
  const Mat sum = pure.cov() + rho.cov();
  const Vec diff = pure.mean() - rho.mean();
  const double det = sum.determinant();
  const double quad = diff.dot(sum.inverse() * diff);
  const double f = 2.0 / std::sqrt(det) * std::exp(-quad);
  return std::clamp(f, 0.0, 1.0);
}

Mat BlochMessiahFactors::reconstruct() const {
  const int n = passive_out.n_modes();
  Mat d = Mat::Identity(2 * n, 2 * n);
  for (int k = 0; k < n && k < static_cast<int>(squeezes.size()); ++k) {
    d(2 * k, 2 * k) = std::exp(squeezes[k]);
    d(2 * k + 1, 2 * k + 1) = std::exp(-squeezes[k]);
  }
  return passive_out.matrix * d * passive_in.matrix;
}

BlochMessiahFactors bloch_messiah(const SymplecticOp& op) {
  require(symplectic_defect(op.matrix) <= 1e-8, "input is not symplectic");
  const int n = op.n_modes();
  const int dim = 2 * n;
  const Mat omega = symplectic_form(n);

  // Polar part T = sqrt(S S^T) is symmetric positive definite and symplectic;
  // its eigenvalues come in (s, 1/s) pairs with Omega mapping one eigenvector
  // of each pair onto the other. Pick the s >= 1 side, completing pairs by
  // projection so clusters at s ~ 1 stay symplectically matched.
  Eigen::SelfAdjointEigenSolver<Mat> es(op.matrix * op.matrix.transpose());
  require(es.info() == Eigen::Success, "eigendecomposition failed");

  Mat basis(dim, dim);  // columns (a_1, b_1, a_2, b_2, ...)
  std::vector<double> squeezes;
  squeezes.reserve(n);
  int pairs = 0;
  for (int i = dim - 1; i >= 0 && pairs < n; --i) {  // eigenvalues descending
    Vec v = es.eigenvectors().col(i);
    if (pairs > 0) {
      const auto used = basis.leftCols(2 * pairs);
      v -= used * (used.transpose() * v);
    }
    const double norm = v.norm();
    if (norm < 1e-3) continue;  // already spanned by an accepted pair
    v /= norm;
    basis.col(2 * pairs) = v;
    basis.col(2 * pairs + 1) = -(omega * v);
    squeezes.push_back(0.5 * std::log(std::max(es.eigenvalues()[i], 1e-300)));
    ++pairs;
  }
  if (pairs != n) throw std::runtime_error("failed to pair symplectic eigenvectors");

  SymplecticOp passive_out{basis, Vec::Zero(dim)};
  Mat d_inv = Mat::Identity(dim, dim);
  for (int k = 0; k < n; ++k) {
    d_inv(2 * k, 2 * k) = std::exp(-squeezes[k]);
    d_inv(2 * k + 1, 2 * k + 1) = std::exp(squeezes[k]);
  }
  SymplecticOp passive_in{d_inv * basis.transpose() * op.matrix, Vec::Zero(dim)};
  return {std::move(passive_out), std::move(squeezes), std::move(passive_in)};
}

}  // namespace cvqec
