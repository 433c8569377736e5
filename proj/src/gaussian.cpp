#include "htdt/gaussian.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace htdt {

namespace {

void check_even_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
    throw std::invalid_argument(fmt::format(
        "{} must be a nonempty even-dimensional square matrix, got {}x{}",
        what, m.rows(), m.cols()));
  }
}

void check_symmetric(const Matrix& m, const char* what,
                     double tol = kSymmetryTol) {
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    throw std::invalid_argument(fmt::format(
        "{} must be symmetric to within {:g}; max |M - M^T| = {:g}", what, tol,
        asym));
  }
}

// Smallest eigenvalue of the Hermitian matrix A + i*B (A symmetric, B real).
double min_eig_hermitian(const Matrix& a, const Matrix& b) {
  Eigen::MatrixXcd h = a.cast<std::complex<double>>() +
                       std::complex<double>(0.0, 1.0) * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

Matrix symplectic_form(int modes) {
  if (modes <= 0) {
    throw std::invalid_argument(
        fmt::format("mode count must be positive, got {}", modes));
  }
  Matrix omega = Matrix::Zero(2 * modes, 2 * modes);
  for (int j = 0; j < modes; ++j) {
    omega(2 * j, 2 * j + 1) = 1.0;
    omega(2 * j + 1, 2 * j) = -1.0;
  }
  return omega;
}

GaussianState::GaussianState(Vector first_moments, Matrix covariance)
    : modes_(0),
      first_moments_(std::move(first_moments)),
      covariance_(std::move(covariance)) {
  check_even_square(covariance_, "covariance");
  if (first_moments_.size() != covariance_.rows()) {
    throw std::invalid_argument(fmt::format(
        "first-moments length {} does not match covariance dimension {}",
        first_moments_.size(), covariance_.rows()));
  }
  check_symmetric(covariance_, "covariance");
  covariance_ = ((covariance_ + covariance_.transpose()) / 2.0).eval();
  modes_ = static_cast<int>(covariance_.rows()) / 2;
}

GaussianState GaussianState::vacuum(int modes) {
  return GaussianState(Vector::Zero(2 * modes),
                       Matrix::Identity(2 * modes, 2 * modes));
}

bool GaussianState::is_physical(double tol) const {
  return min_eig_hermitian(covariance_, symplectic_form(modes_)) >= -tol;
}

GaussianMap::GaussianMap(Matrix x, Matrix y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() % 2 != 0 || x_.cols() % 2 != 0 || x_.rows() == 0 ||
      x_.cols() == 0) {
    throw std::invalid_argument(
        fmt::format("X must have even nonzero dimensions, got {}x{}",
                    x_.rows(), x_.cols()));
  }
  check_even_square(y_, "Y");
  if (y_.rows() != x_.rows()) {
    throw std::invalid_argument(
        fmt::format("Y dimension {} does not match X row count {}", y_.rows(),
                    x_.rows()));
  }
  check_symmetric(y_, "Y");
  y_ = ((y_ + y_.transpose()) / 2.0).eval();
}

GaussianMap GaussianMap::identity(int modes) {
  return GaussianMap(Matrix::Identity(2 * modes, 2 * modes),
                     Matrix::Zero(2 * modes, 2 * modes));
}

bool GaussianMap::is_cp(double tol) const {
  const Matrix omega_in = symplectic_form(modes_in());
  const Matrix omega_out = symplectic_form(modes_out());
  // Y + i(Omega_out - X Omega_in X^T) >= 0
  const Matrix skew = omega_out - x_ * omega_in * x_.transpose();
  return min_eig_hermitian(y_, skew) >= -tol;
}

bool GaussianMap::is_symplectic(double tol) const {
  if (modes_in() != modes_out()) return false;
  if (y_.cwiseAbs().maxCoeff() > tol) return false;
  const Matrix omega = symplectic_form(modes_in());
  return (x_ * omega * x_.transpose() - omega).cwiseAbs().maxCoeff() <= tol;
}

bool ResourceTriplet::is_physical(double tol) const {
  if (a < 1.0 - tol || b < 1.0 - tol || c < -tol) return false;
  const double bound_sq = a * b - 1.0 - std::abs(a - b);
  return c <= std::sqrt(std::max(bound_sq, 0.0)) + tol;
}

void ResourceTriplet::validate() const {
  if (a < 1.0 - 1e-12) {
    throw std::invalid_argument(
        fmt::format("resource triplet requires a >= 1, got a = {:g}", a));
  }
  if (b < 1.0 - 1e-12) {
    throw std::invalid_argument(
        fmt::format("resource triplet requires b >= 1, got b = {:g}", b));
  }
  if (c < -1e-12) {
    throw std::invalid_argument(
        fmt::format("resource triplet requires c >= 0, got c = {:g}", c));
  }
  const double bound = std::sqrt(std::max(a * b - 1.0 - std::abs(a - b), 0.0));
  if (c > bound + kPsdTol) {
    throw std::invalid_argument(fmt::format(
        "resource triplet violates c <= sqrt(ab - 1 - |a - b|): c = {:g}, "
        "bound = {:g}",
        c, bound));
  }
}

bool ChannelSpec::is_cp(double tol) const {
  return x > 0.0 && y >= std::abs(1.0 - x) - tol;
}

void ChannelSpec::validate() const {
  if (!(x > 0.0)) {
    throw std::invalid_argument(
        fmt::format("channel transmissivity must satisfy x > 0, got {:g}", x));
  }
  if (y < std::abs(1.0 - x) - kPsdTol) {
    throw std::invalid_argument(fmt::format(
        "channel violates complete positivity y >= |1 - x|: x = {:g}, y = "
        "{:g}, bound = {:g}",
        x, y, std::abs(1.0 - x)));
  }
}

GaussianMap ChannelSpec::to_map() const {
  return GaussianMap(std::sqrt(x) * Matrix::Identity(2, 2),
                     y * Matrix::Identity(2, 2));
}

GaussianState apply_map(const GaussianMap& map, const GaussianState& state) {
  if (map.modes_in() != state.modes()) {
    throw std::invalid_argument(fmt::format(
        "map expects {} input modes but the state has {}", map.modes_in(),
        state.modes()));
  }
  Vector v = map.x() * state.first_moments();
  Matrix cov = map.x() * state.covariance() * map.x().transpose() + map.y();
  cov = ((cov + cov.transpose()) / 2.0).eval();
  return GaussianState(std::move(v), std::move(cov));
}

GaussianMap embed_map(const GaussianMap& map, int first_mode,
                      int total_modes) {
  if (map.modes_in() != map.modes_out()) {
    throw std::invalid_argument("only square maps can be embedded");
  }
  const int m = map.modes_in();
  if (first_mode < 0 || first_mode + m > total_modes) {
    throw std::invalid_argument(
        fmt::format("cannot embed a {}-mode map at mode {} of {} modes", m,
                    first_mode, total_modes));
  }
  Matrix x = Matrix::Identity(2 * total_modes, 2 * total_modes);
  Matrix y = Matrix::Zero(2 * total_modes, 2 * total_modes);
  x.block(2 * first_mode, 2 * first_mode, 2 * m, 2 * m) = map.x();
  y.block(2 * first_mode, 2 * first_mode, 2 * m, 2 * m) = map.y();
  return GaussianMap(std::move(x), std::move(y));
}

GaussianState tensor(const GaussianState& s1, const GaussianState& s2) {
  const int n1 = 2 * s1.modes();
  const int n2 = 2 * s2.modes();
  Vector v(n1 + n2);
  v.head(n1) = s1.first_moments();
  v.tail(n2) = s2.first_moments();
  Matrix cov = Matrix::Zero(n1 + n2, n1 + n2);
  cov.topLeftCorner(n1, n1) = s1.covariance();
  cov.bottomRightCorner(n2, n2) = s2.covariance();
  return GaussianState(std::move(v), std::move(cov));
}

GaussianState partial_trace(const GaussianState& state,
                            const std::vector<int>& keep) {
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace requires a nonempty mode set");
  }
  std::vector<int> modes = keep;
  std::sort(modes.begin(), modes.end());
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
  if (modes.size() != keep.size()) {
    throw std::invalid_argument("partial_trace mode set contains duplicates");
  }
  for (int m : modes) {
    if (m < 0 || m >= state.modes()) {
      throw std::invalid_argument(fmt::format(
          "partial_trace mode index {} out of range [0, {})", m,
          state.modes()));
    }
  }
  const int n = static_cast<int>(modes.size());
  Vector v(2 * n);
  Matrix cov(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    v.segment(2 * i, 2) = state.first_moments().segment(2 * modes[i], 2);
    for (int j = 0; j < n; ++j) {
      cov.block(2 * i, 2 * j, 2, 2) =
          state.covariance().block(2 * modes[i], 2 * modes[j], 2, 2);
    }
  }
  return GaussianState(std::move(v), std::move(cov));
}

std::vector<double> symplectic_eigenvalues(const Matrix& cov) {
  check_even_square(cov, "covariance");
  check_symmetric(cov, "covariance");
  const int m = static_cast<int>(cov.rows()) / 2;
  Eigen::EigenSolver<Matrix> solver(symplectic_form(m) * cov, false);
  std::vector<double> mods(2 * m);
  for (int i = 0; i < 2 * m; ++i) {
    mods[i] = std::abs(solver.eigenvalues()(i));
  }
  std::sort(mods.begin(), mods.end());
  // Eigenvalues come in +-i*nu pairs; average adjacent moduli.
  std::vector<double> nu(m);
  for (int j = 0; j < m; ++j) {
    nu[j] = (mods[2 * j] + mods[2 * j + 1]) / 2.0;
  }
  return nu;
}

double log_negativity(const GaussianState& state) {
  if (state.modes() != 2) {
    throw std::invalid_argument(fmt::format(
        "log_negativity is defined for 2-mode states, got {} modes",
        state.modes()));
  }
  Vector pt_diag(4);
  pt_diag << 1.0, 1.0, 1.0, -1.0;
  const Matrix pt = pt_diag.asDiagonal();
  const Matrix cov_pt = pt * state.covariance() * pt;
  const double nu_min = symplectic_eigenvalues(cov_pt).front();
  if (nu_min <= 0.0) {
    throw std::invalid_argument(
        "covariance is not positive definite; partial transpose has a "
        "non-positive symplectic eigenvalue");
  }
  return std::max(0.0, -std::log(nu_min));
}

GaussianState resource_to_state(const ResourceTriplet& t) {
  t.validate();
  Matrix cov = Matrix::Zero(4, 4);
  cov(0, 0) = cov(1, 1) = t.a;
  cov(2, 2) = cov(3, 3) = t.b;
  cov(0, 2) = cov(2, 0) = -t.c;
  cov(1, 3) = cov(3, 1) = t.c;
  return GaussianState(Vector::Zero(4), std::move(cov));
}

}  // namespace htdt
