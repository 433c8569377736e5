#pragma once

#include <Eigen/Dense>

#include <vector>

namespace htdt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Quadrature ordering is (x1, p1, ..., xm, pm); vacuum covariance is the
// identity (anticommutator normalization). All noise figures in this library
// are expressed in these units.
inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

/// Symplectic form for `modes` modes: direct sum of [[0,1],[-1,0]] blocks.
Matrix symplectic_form(int modes);

/// Gaussian state: first-moments vector and covariance matrix.
///
/// Construction enforces shape and symmetry only. Physicality (the
/// uncertainty relation) is exposed as a predicate so tests can build
/// deliberately unphysical covariances.
class GaussianState {
 public:
  GaussianState(Vector first_moments, Matrix covariance);

  static GaussianState vacuum(int modes);

  int modes() const { return modes_; }
  const Vector& first_moments() const { return first_moments_; }
  const Matrix& covariance() const { return covariance_; }

  /// Uncertainty relation: all eigenvalues of Gamma + i*Omega >= -tol.
  bool is_physical(double tol = kPsdTol) const;

 private:
  int modes_;
  Vector first_moments_;
  Matrix covariance_;
};

/// Gaussian map (X, Y) acting as v -> Xv, Gamma -> X Gamma X^T + Y.
/// Complete positivity is a predicate, not a construction-time assertion.
class GaussianMap {
 public:
  GaussianMap(Matrix x, Matrix y);

  static GaussianMap identity(int modes);

  int modes_in() const { return static_cast<int>(x_.cols()) / 2; }
  int modes_out() const { return static_cast<int>(x_.rows()) / 2; }
  const Matrix& x() const { return x_; }
  const Matrix& y() const { return y_; }

  /// Complete positivity: Y + i*Omega_out - i*X Omega_in X^T >= -tol.
  bool is_cp(double tol = kPsdTol) const;

  /// Square map with Y = 0 and X Omega X^T = Omega.
  bool is_symplectic(double tol = kSymmetryTol) const;

 private:
  Matrix x_;
  Matrix y_;
};

/// Two-mode resource parameters (a, b, c): covariance
/// [[a I2, -c sz], [-c sz, b I2]] with sz = diag(1, -1).
struct ResourceTriplet {
  double a = 1.0;
  double b = 1.0;
  double c = 0.0;

  /// a, b >= 1, 0 <= c <= sqrt(ab - 1 - |a - b|) within tolerance.
  bool is_physical(double tol = kPsdTol) const;

  /// Throws std::invalid_argument naming the violated bound.
  void validate() const;
};

/// Phase-insensitive channel: X = sqrt(x) I2, Y = y I2.
struct ChannelSpec {
  double x = 1.0;  // transmissivity (x < 1) or gain (x > 1)
  double y = 0.0;  // added noise

  /// x > 0 and y >= |1 - x| within tolerance.
  bool is_cp(double tol = kPsdTol) const;

  void validate() const;

  GaussianMap to_map() const;
};

/// Applies (X, Y) to a state; the result covariance is re-symmetrized.
GaussianState apply_map(const GaussianMap& map, const GaussianState& state);

/// Embeds a map so it acts on the contiguous mode range starting at
/// `first_mode` of a `total_modes`-mode state, identity elsewhere.
GaussianMap embed_map(const GaussianMap& map, int first_mode, int total_modes);

/// Block-diagonal composition; mode order is s1's modes then s2's.
GaussianState tensor(const GaussianState& s1, const GaussianState& s2);

/// Keeps the listed modes (ascending index order), discarding the rest.
GaussianState partial_trace(const GaussianState& state,
                            const std::vector<int>& keep);

/// Moduli of the eigenvalues of i*Omega*cov, deduplicated to one value per
/// mode, ascending. Physical states have all values >= 1.
std::vector<double> symplectic_eigenvalues(const Matrix& cov);

/// Logarithmic negativity of a two-mode state:
/// max{0, -ln nu_-} with nu_- the smallest symplectic eigenvalue of the
/// partially transposed covariance (I2 (+) sz conjugation).
double log_negativity(const GaussianState& state);

/// Builds the two-mode resource state for a physical triplet (zero means).
GaussianState resource_to_state(const ResourceTriplet& t);

}  // namespace htdt
