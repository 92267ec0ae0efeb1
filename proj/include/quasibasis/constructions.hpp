#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quasibasis/bases.hpp"
#include "quasibasis/rng.hpp"

namespace qb {

/// Weyl–Heisenberg label (k, l) ∈ Z_d × Z_d with flat index k·d + l.
struct WHIndex {
  int k = 0;
  int l = 0;

  int flat(int d) const { return k * d + l; }
  static WHIndex from_flat(int flat, int d) { return {flat / d, flat % d}; }
};

/// X^k Z^l with X|j⟩ = |j+1 mod d⟩ and Z|j⟩ = ω^j|j⟩, ω = exp(2πi/d).
/// Indices are reduced mod d.
CMatrix wh_displacement(int d, int k, int l);

/// Unit vector seeding a Weyl–Heisenberg orbit.
struct Fiducial {
  CVector amplitudes;

  int dim() const { return static_cast<int>(amplitudes.size()); }

  /// Renormalizes input whose norm is within 1e-6 of one; anything further
  /// off is rejected as InvalidArgument.
  static Fiducial create(CVector amplitudes);
};

/// E_{k,l} = (1/d) D_{k,l}|f⟩⟨f|D_{k,l}† in flat order. Throws NotSic with the
/// maximum Gram deviation when the orbit is not equiangular to within tol.
MeasureBasis sic_from_fiducial(const Fiducial& fiducial, double tol = kDefaultTol);

/// Built-in SICs: the d=2 tetrahedron and the d=3 Hesse SIC.
MeasureBasis builtin_sic(int d);
Fiducial hesse_fiducial();

bool is_prime(int n);

/// Wootters Wigner basis for d = 2 or d an odd prime, flat index q·d + p.
MeasureBasis wootters_wigner(int d);
/// Elementwise tensor product of per-prime Wootters bases, mixed-radix order.
MeasureBasis composite_wootters(std::span<const int> primes);
/// Prime factorization with multiplicity, ascending.
std::vector<int> prime_factors(int n);

/// L^t_i = t L_i + (1 − t)(l_i/d) I. Throws InvalidArgument for t = 0.
MeasureBasis collinear(const MeasureBasis& basis, double t);

struct TRange {
  double t_min = 0.0;
  double t_max = 0.0;
};

/// Interval [t_min, t_max] (excluding 0) on which collinear(L, t) is a MIC.
TRange mic_t_range(const MeasureBasis& basis);

/// {L_i ⊗ M_j} at flat index i·|M| + j.
MeasureBasis tensor_basis(const MeasureBasis& a, const MeasureBasis& b);
/// n-fold tensor power of builtin_sic(2).
MeasureBasis tensorhedron(int n);

// Seeded random inputs for property tests; d ∈ [2, 8].
MeasureBasis random_mic(int d, std::uint64_t seed);
MeasureBasis random_unbiased_mic(int d, std::uint64_t seed);
MeasureBasis random_unbiased_wigner(int d, std::uint64_t seed);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
CMatrix random_unitary(int d, Rng& rng);
/// Haar-random orthogonal n×n matrix O with O·1 = 1.
RMatrix random_orthogonal_fixing_ones(int n, Rng& rng);
HermitianOperator random_pure_state(int d, Rng& rng);
/// W W† / tr(W W†) for a complex Ginibre W (full rank almost surely).
HermitianOperator random_mixed_state(int d, Rng& rng);
HermitianOperator random_hermitian(int d, Rng& rng);

}  // namespace qb
