#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "quasibasis/operator_core.hpp"

namespace qb {

// Default absolute tolerance for basis validation.
inline constexpr double kDefaultTol = 1e-9;
// Gram matrices with a larger condition number are treated as dependent.
inline constexpr double kMaxGramCondition = 1e12;
// Weights at or below this are singular for constructions that divide by them.
inline constexpr double kWeightFloor = 1e-12;

struct Residual {
  std::string name;
  double value = 0.0;
};

/// Classification of a candidate list of d² Hermitian operators.
struct BasisClass {
  bool is_measure_basis = false;
  bool is_mic = false;
  bool is_wigner = false;
  bool is_unbiased = false;
  bool is_rank1 = false;
  bool has_zero_weight = false;
  double min_eigenvalue = 0.0;
  double sum_residual = 0.0;         // max |Σ L_i − I| entrywise
  double min_trace = 0.0;
  double gram_condition = 0.0;       // ∞ when singular
  double max_offdiag_gram = 0.0;
  double max_bias_deviation = 0.0;   // max |l_i − 1/d|
  std::vector<Residual> failures;    // every failed measure-basis invariant

  /// Short human summary, e.g. "MIC, unbiased, rank-1".
  std::string summary() const;
};

/// Classifies a candidate basis. Throws InvalidArgument for a wrong element
/// count and DimensionMismatch for mixed dimensions.
BasisClass validate(std::span<const HermitianOperator> elements, double tol = kDefaultTol);

/// Ordered list of d² Hermitian operators summing to the identity, with
/// nonnegative traces and a nonsingular Gram matrix. Immutable once built.
class MeasureBasis {
 public:
  /// Validates and throws NotMeasureBasis naming the first failed invariant.
  static MeasureBasis create(std::vector<HermitianOperator> elements, std::string label = {},
                             double tol = kDefaultTol);

  int dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<HermitianOperator>& elements() const { return elements_; }
  const HermitianOperator& operator[](std::size_t i) const { return elements_[i]; }
  const std::string& label() const { return label_; }

  MeasureBasis relabeled(std::string label) const;

 private:
  MeasureBasis(int dim, std::vector<HermitianOperator> elements, std::string label)
      : dim_(dim), elements_(std::move(elements)), label_(std::move(label)) {}

  int dim_ = 0;
  std::vector<HermitianOperator> elements_;
  std::string label_;
};

BasisClass classify(const MeasureBasis& basis, double tol = kDefaultTol);

/// [G]_ij = tr(L_i L_j).
RMatrix gram(std::span<const HermitianOperator> elements);
RMatrix gram(const MeasureBasis& basis);

/// l_i = tr L_i, recomputed from the elements.
RVector bias(const MeasureBasis& basis);
RMatrix bias_matrix(const MeasureBasis& basis);

struct GramInverse {
  RMatrix inverse;
  double condition = 0.0;
};

/// Spectral inverse of the Gram matrix. Throws Singular above kMaxGramCondition.
GramInverse inverse_gram(const MeasureBasis& basis);

/// Throws SingularWeight if any weight is ≤ kWeightFloor.
void require_positive_weights(const MeasureBasis& basis, const char* context);

/// out_i = Σ_j coefficients(i, j) · elements_j.
std::vector<HermitianOperator> combine(const RMatrix& coefficients,
                                       std::span<const HermitianOperator> elements);

/// The unique basis with tr(L̃_i L_j) = δ_ij.
std::vector<HermitianOperator> dual_basis(const MeasureBasis& basis);

/// S(X) = Σ (tr X L_i) L_i.
SuperOperator frame_operator(const MeasureBasis& basis);
/// 𝒮_L(X) = Σ (tr X L_i / l_i) L_i. Requires positive weights.
SuperOperator rescaled_frame_operator(const MeasureBasis& basis);

/// Φ = A G⁻¹ for a measure basis with positive weights.
class BornMatrix {
 public:
  BornMatrix(RMatrix phi, RVector weights) : phi_(std::move(phi)), weights_(std::move(weights)) {}

  const RMatrix& phi() const { return phi_; }
  const RVector& weights() const { return weights_; }
  Eigen::Index size() const { return phi_.rows(); }

  /// max_j |Σ_i Φ_ij − 1|.
  double column_sum_residual() const;
  /// max |Φ l − l|.
  double weight_fixed_point_residual() const;
  bool has_negative_entry(double tol = 0.0) const;
  double min_entry() const { return phi_.minCoeff(); }

 private:
  RMatrix phi_;
  RVector weights_;
};

BornMatrix born_matrix(const MeasureBasis& basis);

}  // namespace qb
