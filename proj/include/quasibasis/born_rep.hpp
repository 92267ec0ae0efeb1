#pragma once

#include <span>
#include <vector>

#include "quasibasis/bases.hpp"

namespace qb {

// Trace and eigenvalue slack for accepting a density operator.
inline constexpr double kStateTol = 1e-9;

/// Real vector over the reference outcomes summing to one, possibly with
/// negative entries.
class QuasiDistribution {
 public:
  /// Throws InvalidArgument unless |Σ v − 1| ≤ 1e-10·max(1, ‖v‖₁, magnitude).
  /// `magnitude` bounds the terms that were summed to produce v, e.g.
  /// Σ_ij |M_ij p_j| for v = M p, so rounding in ill-conditioned maps is
  /// not mistaken for a normalization failure.
  static QuasiDistribution create(RVector values, double magnitude = 0.0);

  const RVector& values() const { return values_; }
  double sum() const { return values_.sum(); }
  /// Σ |negative entries|.
  double negativity() const;

 private:
  explicit QuasiDistribution(RVector v) : values_(std::move(v)) {}
  RVector values_;
};

bool is_state(const HermitianOperator& rho, double tol = kStateTol);
/// Throws NotState with the offending residual.
void require_state(const HermitianOperator& rho, const char* context);
/// Throws NotPovm unless the effects are PSD and sum to the identity.
void require_povm(std::span<const HermitianOperator> povm, const char* context);

/// Computational-basis projectors |j⟩⟨j|.
std::vector<HermitianOperator> computational_povm(int d);

/// p_i = tr(ρ L_i).
RVector state_to_probs(const HermitianOperator& rho, const MeasureBasis& basis);

struct Reconstruction {
  HermitianOperator op;
  bool is_state = false;
};

/// Σ_i p_i L̃_i. Vectors outside the image of the state space are still
/// inverted; the result is flagged rather than rejected.
Reconstruction probs_to_state(const RVector& probs, const MeasureBasis& basis);

/// P(D_j | H_i) = tr(D_j ρ_i), ρ_i = H_i / h_i. Rows index D, columns H.
RMatrix conditional_matrix(std::span<const HermitianOperator> povm, const MeasureBasis& basis);

struct TwoStepQ {
  RVector q_direct;      // tr(D_j ρ)
  RVector q_ltp_analog;  // P(D|H) Φ P(H)
  double max_deviation = 0.0;
};

TwoStepQ two_step_q(std::span<const HermitianOperator> povm, const MeasureBasis& basis, const HermitianOperator& rho);

/// P(D|H) P(H): the classical law of total probability with Φ replaced by I.
RVector classical_ltp(std::span<const HermitianOperator> povm, const MeasureBasis& basis,
                      const HermitianOperator& rho);

struct GaugeSplit {
  RMatrix left;               // P(D|H) √Φ
  QuasiDistribution right;    // √Φ P(H)
  double reconstruction_error = 0.0;  // max_j |(left·right)_j − tr(D_j ρ)|
  double row_sum_residual = 0.0;      // max_j |Σ_i left_ji − d·tr D_j|
  double column_sum_residual = 0.0;   // max_i |Σ_j left_ji − 1|
};

/// Symmetric split of Φ between the two factors. Unbiased references only;
/// anything else throws BiasedReference.
GaugeSplit gauge_split(std::span<const HermitianOperator> povm, const MeasureBasis& basis,
                       const HermitianOperator& rho);

/// Entanglement-breaking MIC channel 𝒮_L(X) = Σ (tr X L_j / l_j) L_j.
HermitianOperator ebmc_apply(const MeasureBasis& basis, const HermitianOperator& x);

}  // namespace qb
