#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "quasibasis/error.hpp"

namespace qb {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Relative asymmetry ‖A − A†‖/‖A‖ up to which inputs are symmetrized rather
// than rejected.
inline constexpr double kHermiticityTol = 1e-9;

// Relative eigenvalue clip for PSD matrix functions (scaled by max |λ|).
inline constexpr double kDefaultClip = 1e-12;

/// A d×d complex Hermitian matrix, d ≥ 2.
///
/// Every constructed value satisfies A = A† exactly: near-Hermitian input is
/// replaced by (A + A†)/2 and anything further off is rejected. A
/// default-constructed value is an empty placeholder with dim() == 0.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  /// Throws NotHermitian when ‖A − A†‖ > kHermiticityTol·‖A‖, and
  /// InvalidArgument for non-square or d < 2 input.
  static HermitianOperator from_matrix(const CMatrix& m);
  static HermitianOperator identity(int d);
  static HermitianOperator zero(int d);
  /// |v⟩⟨v| for the given (not necessarily normalized) vector.
  static HermitianOperator outer(const CVector& v);

  int dim() const { return static_cast<int>(m_.rows()); }
  bool empty() const { return m_.size() == 0; }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  double trace() const { return m_.trace().real(); }

  /// U A U† for a square matrix U of matching size.
  HermitianOperator conjugated(const CMatrix& u) const;

  HermitianOperator& operator+=(const HermitianOperator& other);
  HermitianOperator& operator-=(const HermitianOperator& other);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }
  friend HermitianOperator operator-(HermitianOperator a) { return a *= -1.0; }

 private:
  explicit HermitianOperator(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// tr(AB). Real for Hermitian arguments.
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);
/// tr(A²).
double hs_norm_sq(const HermitianOperator& a);
/// Largest entrywise modulus of A − B.
double max_abs_diff(const HermitianOperator& a, const HermitianOperator& b);

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

struct SpectralDecomposition {
  RVector eigenvalues;   // ascending
  CMatrix eigenvectors;  // columns, orthonormal
};

SpectralDecomposition eig_hermitian(const HermitianOperator& a);

/// Eigenvalues of every element in ascending order.
RVector eigenvalues(const HermitianOperator& a);
double min_eigenvalue(const HermitianOperator& a);

enum class PsdFunction { Sqrt, InvSqrt };

/// V f(Λ) V† for f ∈ {sqrt, 1/sqrt}.
///
/// Eigenvalues in [−clip, clip) are treated as zero: sqrt maps them to 0 and
/// inv_sqrt reports Singular. Anything below −clip throws NotPositive. The
/// default clip is kDefaultClip·max|λ|.
HermitianOperator mat_func_psd(const HermitianOperator& a, PsdFunction f,
                               std::optional<double> clip = std::nullopt);

/// Same functional calculus for a real symmetric matrix (Gram matrices,
/// superoperator coordinates). Input asymmetry is handled as for
/// HermitianOperator.
RMatrix mat_func_psd(const RMatrix& a, PsdFunction f, std::optional<double> clip = std::nullopt);

/// V f(Λ) V† for an arbitrary real function.
HermitianOperator apply_function(const HermitianOperator& a, const std::function<double(double)>& f);

/// Symmetrizes a real matrix or throws NotHermitian.
RMatrix symmetrized(const RMatrix& a);

/// Generalized Gell-Mann orthonormal basis of the d²-dimensional real space
/// of d×d Hermitian operators: B_0 = I/√d, then symmetric pairs (j<k),
/// antisymmetric pairs (j<k), then diagonal elements.
std::vector<HermitianOperator> herm_onb(int d);

/// Coordinates hs_inner(A, B_α) in the herm_onb(d) basis.
RVector op_to_coords(const HermitianOperator& a);
/// Inverse of op_to_coords; d is inferred from the vector length (d²).
HermitianOperator coords_to_op(const RVector& coords);

/// Linear, Hermiticity-preserving map on ℒ(ℋ_d), stored as the real d²×d²
/// matrix [B_α, Φ(B_β)] in herm_onb(d) coordinates.
class SuperOperator {
 public:
  using Action = std::function<CMatrix(const CMatrix&)>;

  static SuperOperator identity(int d);
  static SuperOperator from_matrix(int d, RMatrix m);
  /// matrix[α][β] = hs_inner(B_α, action(B_β)). Throws NotHermitian when the
  /// action leaves the Hermitian operators.
  static SuperOperator from_action(int d, const Action& action);

  int hilbert_dim() const { return d_; }
  int operator_dim() const { return d_ * d_; }
  const RMatrix& matrix() const { return m_; }

  HermitianOperator apply(const HermitianOperator& x) const;
  /// (*this) ∘ inner.
  SuperOperator compose(const SuperOperator& inner) const;

  bool is_self_adjoint(double tol = 1e-10) const;
  /// Ascending eigenvalues; requires self-adjointness.
  RVector spectrum() const;

  SuperOperator sqrt() const;
  SuperOperator inv_sqrt() const;
  SuperOperator inverse() const;

 private:
  SuperOperator(int d, RMatrix m) : d_(d), m_(std::move(m)) {}
  int d_ = 0;
  RMatrix m_;
};

}  // namespace qb
