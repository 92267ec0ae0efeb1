#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "quasibasis/bases.hpp"
#include "quasibasis/constructions.hpp"

namespace qb {

/// Σ_i ‖L_i − M_i‖² in the Hilbert–Schmidt norm.
double distance(const MeasureBasis& lhs, const MeasureBasis& rhs);

struct DistanceReport {
  double distance = std::numeric_limits<double>::quiet_NaN();
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  RVector spectrum;  // frame-operator eigenvalues, ascending
  bool saturates_lower = false;
  bool saturates_upper = false;
};

/// Distance bounds between an unbiased MIC E and any unbiased Wigner basis:
///   Σ_k (√λ_k − √(1/d))²  ≤  Σ_i ‖E_i − F_i‖²  ≤  Σ_k (√λ_k + √(1/d))² − 4/d
/// with λ the spectrum of the frame operator of E. Throws BiasedReference for
/// biased input and NotPositive when E is not a MIC.
DistanceReport distance_bounds(const MeasureBasis& mic);

/// distance_bounds(mic) plus the actual distance to `wigner` and saturation
/// flags at tolerance tol. `wigner` must be an unbiased Wigner basis.
DistanceReport distance_report(const MeasureBasis& mic, const MeasureBasis& wigner, double tol = 1e-9);

struct SicBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// ((d−1)/d)(d + 2 ∓ 2√(d+1)): the global extremes of the distance bounds,
/// attained only by SICs.
SicBounds sic_bounds(int d);

/// max(0, −min_i λ_min(F_i)); the most negative entry any state can produce.
double ceiling_negativity(const MeasureBasis& wigner);

/// Sampling estimate of the same quantity over random pure states. Always a
/// lower estimate of ceiling_negativity.
double sampled_ceiling_negativity(const MeasureBasis& wigner, int samples, std::uint64_t seed);

/// Γ_jkl = d² tr(F_j F_k F_l), stored densely (n³ entries, n = d²).
class TripleProducts {
 public:
  TripleProducts(int dim, std::vector<Complex> gamma);

  int dim() const { return d_; }
  std::size_t size() const { return n_; }
  Complex operator()(std::size_t j, std::size_t k, std::size_t l) const { return gamma_[(j * n_ + k) * n_ + l]; }
  const std::vector<Complex>& data() const { return gamma_; }

  /// max |Γ_jkl − Γ_klj|.
  double cyclic_residual() const;
  /// max |Γ_jkl − conj(Γ_lkj)|.
  double conjugation_residual() const;
  /// max_j |Σ_kl Γ_jkl − d² tr F_j| given the traces of the elements.
  double sum_residual(const RVector& traces) const;

 private:
  int d_;
  std::size_t n_;
  std::vector<Complex> gamma_;
};

/// Throws InvalidArgument for d > 5 (d⁶ entries) unless force is set.
TripleProducts triple_products(const MeasureBasis& basis, bool force = false);

/// Oriented area of the triangle (a, b, c) in the affine plane Z_d × Z_d as
/// the shoelace sum Σ_edges p∧q mod d, with p∧q = p.k·q.l − p.l·q.k. This is
/// the doubled Euclidean area, the normalization under which the Wootters
/// triple products are (1/d) exp(4πi A/d) in the labels of wootters_wigner.
int affine_area(int d, WHIndex a, WHIndex b, WHIndex c);

struct AreaMismatch {
  std::size_t j = 0, k = 0, l = 0;
  Complex expected;
  Complex actual;
};

struct AreaCheck {
  double max_residual = 0.0;
  std::vector<AreaMismatch> mismatches;  // triples above tol
};

/// Compares the triple products of `basis`, read in flat Weyl–Heisenberg
/// labels, against (1/d) exp(4πi A_jkl / d) with A from affine_area.
AreaCheck area_check(const MeasureBasis& basis, double tol = 1e-10);

/// area_check(wootters_wigner(d)) for d an odd prime.
AreaCheck wootters_area_check(int d, double tol = 1e-10);

/// Checks d³ tr(F_j F_k F_l) = r³ tr(Π_jΠ_kΠ_l) + (1 − r)(δ_jk + δ_kl + δ_jl)
///   − (2r + r²(d − 2)) / (d² r),  r = sign·√(d+1),
/// for F = PW(E) (sign = +1) or the shifted PW (sign = −1), Π_j = d E_j.
/// Returns the maximum residual. Throws NotSic unless E is a SIC.
double sic_triple_relation_check(const MeasureBasis& sic, int sign);

/// Throws NotSic unless the Gram matches (1/d²)(dδ_ij + 1)/(d + 1) to tol.
void require_sic(const MeasureBasis& basis, double tol = kDefaultTol);

struct Diagnostics {
  bool equiangular = false;
  double spread = 0.0;  // max − min off-diagonal Gram entry
  std::vector<int> rank_profile;
  bool wh_covariant = false;
};

/// Number of eigenvalues above rel_threshold × max |eigenvalue|.
int element_rank(const HermitianOperator& op, double rel_threshold = 1e-8);

/// True when conjugation by every X^k Z^l permutes the basis (greedy match
/// of each conjugated element to an unused element within tol).
bool wh_covariant(const MeasureBasis& basis, double tol = 1e-8);

Diagnostics diagnostics(const MeasureBasis& basis, double equiangular_tol = 1e-9, double rank_threshold = 1e-8);

}  // namespace qb
