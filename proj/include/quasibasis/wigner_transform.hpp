#pragma once

#include <cstddef>
#include <vector>

#include "quasibasis/bases.hpp"

namespace qb {

// Maximum elementwise disagreement tolerated between the two PW routes.
inline constexpr double kCrossErrorTol = 1e-8;
// Default per-entry tolerance for Wigner equivalence.
inline constexpr double kEquivalenceTol = 1e-8;

/// Principal square root of the Born matrix,
/// √Φ = A^{1/2} (A^{1/2} G⁻¹ A^{1/2})^{1/2} A^{-1/2}.
///
/// The inner matrix is symmetric positive definite, so √Φ has a strictly
/// positive spectrum; a nonpositive eigenvalue after clipping throws Singular.
RMatrix sqrt_born(const MeasureBasis& basis);

struct PWResult {
  MeasureBasis basis;                         // validated Wigner basis
  std::vector<HermitianOperator> via_superop; // 𝒮_L^{-1/2}(L_i)
  std::vector<HermitianOperator> via_sqrtphi; // Σ_j [√Φ]_ij L_j
  double cross_error = 0.0;                   // max entrywise deviation
};

/// Principal Wigner basis F_i = 𝒮_L^{-1/2}(L_i), computed along both routes.
/// Throws PathDisagreement when cross_error > kCrossErrorTol and
/// NotWignerBasis when the output fails validation.
PWResult principal_wigner(const MeasureBasis& basis);

/// F^S_i = −F_i + (2 f_i/d) I. Throws NotWignerBasis unless F is one.
MeasureBasis shifted(const MeasureBasis& wigner, double tol = kDefaultTol);

enum class MatchMode { Ordered, Permuted };

enum class Equivalence {
  Equivalent,
  NotEquivalent,      // verified: no ordering (or the given one) matches
  GreedyMatchFailed,  // permuted mode only: greedy assignment found no match
};

const char* to_string(Equivalence e);

struct EquivalenceResult {
  Equivalence outcome = Equivalence::NotEquivalent;
  double max_deviation = 0.0;
  // permutation[i] = index in PW(M) matched to element i of PW(L).
  std::vector<std::size_t> permutation;

  bool equivalent() const { return outcome == Equivalence::Equivalent; }
};

/// Compares PW(L) with PW(M) entrywise.
EquivalenceResult wigner_equivalent(const MeasureBasis& lhs, const MeasureBasis& rhs,
                                    double tol = kEquivalenceTol, MatchMode mode = MatchMode::Ordered);

/// {𝒮_L^{1/2}(F_i)}: a measure basis with the bias of F whose principal
/// Wigner basis is F.
MeasureBasis lift(const MeasureBasis& wigner, const MeasureBasis& reference);

}  // namespace qb
