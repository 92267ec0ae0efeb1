#include <doctest.h>

#include <cmath>

#include "quasibasis/bases.hpp"
#include "quasibasis/constructions.hpp"
#include "test_support.hpp"

using namespace qb;
using namespace qbtest;

namespace {

// Measure basis with three traceless elements: I − σx − σy − σz, σx, σy, σz.
std::vector<HermitianOperator> zero_weight_elements() {
  return {herm(pauli(0) - pauli(1) - pauli(2) - pauli(3)), herm(pauli(1)), herm(pauli(2)), herm(pauli(3))};
}

RVector sorted(RVector v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

}  // namespace

TEST_CASE("validate: qubit SIC, Wootters qubit, repeated identity") {
  const auto sic = validate(builtin_sic(2).elements());
  CHECK(sic.is_measure_basis);
  CHECK(sic.is_mic);
  CHECK(sic.is_unbiased);
  CHECK(sic.is_rank1);
  CHECK_FALSE(sic.is_wigner);
  CHECK(sic.summary() == "MIC, unbiased, rank-1");

  const auto w = validate(wootters_wigner(2).elements());
  CHECK(w.is_wigner);
  CHECK_FALSE(w.is_mic);
  CHECK(w.min_eigenvalue == doctest::Approx((1.0 - std::sqrt(3.0)) / 4.0).epsilon(1e-12));

  std::vector<HermitianOperator> repeated(4, 0.25 * HermitianOperator::identity(2));
  const auto rep = validate(repeated);
  CHECK_FALSE(rep.is_measure_basis);
  bool named = false;
  for (const auto& f : rep.failures) named = named || f.name == "linear_independence";
  CHECK(named);
}

TEST_CASE("validate: shape errors and named failures") {
  std::vector<HermitianOperator> three(3, HermitianOperator::identity(2));
  CHECK_THROWS_AS(validate(three), qb::Error);
  auto mixed = builtin_sic(2).elements();
  mixed[1] = HermitianOperator::identity(3);
  try {
    validate(mixed);
    FAIL("expected DimensionMismatch");
  } catch (const qb::Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }

  auto off = builtin_sic(2).elements();
  off[0] = 2.0 * off[0];
  const auto cls = validate(off);
  CHECK_FALSE(cls.is_measure_basis);
  REQUIRE_FALSE(cls.failures.empty());
  CHECK(cls.failures.front().name == "sum_to_identity");
  CHECK(cls.failures.front().value == doctest::Approx(cls.sum_residual));
  try {
    MeasureBasis::create(off);
    FAIL("expected NotMeasureBasis");
  } catch (const qb::Error& e) {
    CHECK(e.kind() == ErrorKind::NotMeasureBasis);
  }

  auto negative = wootters_wigner(2).elements();
  // Flip a trace sign while keeping the sum: swap mass between elements.
  negative[0] = negative[0] + HermitianOperator::identity(2);
  negative[1] = negative[1] - HermitianOperator::identity(2);
  const auto neg = validate(negative);
  CHECK_FALSE(neg.is_measure_basis);
  CHECK(neg.min_trace < 0.0);
}

TEST_CASE("gram examples") {
  const RMatrix g2 = gram(builtin_sic(2));
  CHECK(max_diff(g2, sic_gram(2)) < 1e-15);
  CHECK(g2(0, 0) == doctest::Approx(0.25));
  CHECK(g2(0, 1) == doctest::Approx(1.0 / 12.0));

  const RMatrix g3 = gram(builtin_sic(3));
  CHECK(g3(0, 0) == doctest::Approx(1.0 / 9.0));
  CHECK(g3(2, 5) == doctest::Approx(1.0 / 36.0));

  for (const auto& w : {wootters_wigner(3), random_unbiased_wigner(4, 9)}) {
    const RMatrix g = gram(w);
    CHECK(max_diff(g, RMatrix(bias(w).asDiagonal())) < 1e-12);
  }
}

TEST_CASE("gram matches explicit traces on random bases") {
  const auto basis = random_mic(3, 21);
  const RMatrix g = gram(basis);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      CHECK(std::abs(g(i, j) - naive_trace_product(basis[i].matrix(), basis[j].matrix())) < 1e-14);
}

TEST_CASE("bias examples") {
  CHECK(max_diff(RMatrix(bias(builtin_sic(2))), RMatrix(RVector::Constant(4, 0.5))) < 1e-15);
  const auto mic = random_unbiased_mic(3, 8);
  CHECK((bias(mic).array() - 1.0 / 3.0).abs().maxCoeff() < 1e-10);
  const auto b = random_mic(4, 3);
  CHECK(bias(b).sum() == doctest::Approx(4.0));
  CHECK(max_diff(bias_matrix(b), RMatrix(bias(b).asDiagonal())) == 0.0);
}

TEST_CASE("inverse Gram of the qubit SIC matches the closed form") {
  const auto inv = inverse_gram(builtin_sic(2));
  CHECK(max_diff(inv.inverse, sic_gram_inverse(2)) < 1e-12);
  CHECK(inv.condition == doctest::Approx(3.0));  // eigenvalues 1/2 and 1/6
  CHECK(max_diff(inverse_gram(builtin_sic(3)).inverse, sic_gram_inverse(3)) < 1e-11);
}

TEST_CASE("dual basis") {
  const auto w = wootters_wigner(3);
  const auto dual = dual_basis(w);
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(max_abs_diff(dual[i], (1.0 / w[i].trace()) * w[i]) < 1e-12);

  const auto b = random_mic(3, 5);
  const auto db = dual_basis(b);
  const RMatrix g_dual = gram(db);
  CHECK(max_diff(g_dual, inverse_gram(b).inverse) < 1e-8 * g_dual.cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      CHECK(std::abs(hs_inner(db[i], b[j]) - (i == j ? 1.0 : 0.0)) < 1e-9);
}

TEST_CASE("property: both expansions reconstruct random operators") {
  TestRng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 3;
    const auto basis = random_mic(d, 100 + trial % 7);
    const auto dual = dual_basis(basis);
    const auto x = random_herm(d, rng);
    HermitianOperator via_dual_coeffs = HermitianOperator::zero(d);
    HermitianOperator via_basis_coeffs = HermitianOperator::zero(d);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      via_dual_coeffs += hs_inner(x, dual[i]) * basis[i];
      via_basis_coeffs += hs_inner(x, basis[i]) * dual[i];
    }
    CHECK(max_abs_diff(via_dual_coeffs, x) < 1e-9);
    CHECK(max_abs_diff(via_basis_coeffs, x) < 1e-9);
  }
}

TEST_CASE("frame operators against the vectorized oracle") {
  for (const auto& basis : {builtin_sic(2), builtin_sic(3), random_mic(3, 2), random_mic(4, 6)}) {
    const int d = basis.dim();
    const auto s = frame_operator(basis);
    const auto rs = rescaled_frame_operator(basis);
    const CMatrix s_oracle = oracle_frame_vec(basis.elements(), RVector::Ones(d * d));
    const CMatrix rs_oracle = oracle_frame_vec(basis.elements(), bias(basis).cwiseInverse());
    TestRng rng(d);
    for (int k = 0; k < 5; ++k) {
      const auto x = random_herm(d, rng);
      CHECK(max_diff(s.apply(x).matrix(), apply_vec(s_oracle, x.matrix())) < 1e-12);
      CHECK(max_diff(rs.apply(x).matrix(), apply_vec(rs_oracle, x.matrix())) < 1e-10);
      CHECK(rs.apply(x).trace() == doctest::Approx(x.trace()).epsilon(1e-10));
    }
    CHECK(s.is_self_adjoint());
    CHECK(rs.is_self_adjoint());
    CHECK(max_abs_diff(rs.apply(HermitianOperator::identity(d)), HermitianOperator::identity(d)) < 1e-10);
  }
}

TEST_CASE("frame operator examples") {
  const auto w = wootters_wigner(3);
  CHECK(max_diff(rescaled_frame_operator(w).matrix(), RMatrix::Identity(9, 9)) < 1e-12);

  RVector expected(4);
  expected << 1.0 / 6, 1.0 / 6, 1.0 / 6, 0.5;
  CHECK(max_diff(RMatrix(frame_operator(builtin_sic(2)).spectrum()), RMatrix(expected)) < 1e-14);
}

TEST_CASE("property: frame spectrum equals Gram spectrum") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int d = 2 + static_cast<int>(seed % 4);
    const auto basis = seed % 2 ? random_mic(d, seed) : random_unbiased_wigner(d, seed);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(gram(basis), Eigen::EigenvaluesOnly);
    CHECK(max_diff(RMatrix(sorted(frame_operator(basis).spectrum())), RMatrix(sorted(es.eigenvalues()))) < 1e-9);
  }
}

TEST_CASE("born matrix examples and invariants") {
  const auto phi = born_matrix(builtin_sic(2));
  const RMatrix expected = 3.0 * RMatrix::Identity(4, 4) - 0.5 * RMatrix::Ones(4, 4);
  CHECK(max_diff(phi.phi(), expected) < 1e-12);
  CHECK(phi.has_negative_entry());

  CHECK(max_diff(born_matrix(wootters_wigner(3)).phi(), RMatrix::Identity(9, 9)) < 1e-12);
  CHECK_FALSE(born_matrix(wootters_wigner(3)).has_negative_entry(1e-12));

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int d = 2 + static_cast<int>(seed % 4);
    const auto mic = random_mic(d, seed);
    const auto b = born_matrix(mic);
    CHECK(b.column_sum_residual() < 1e-9);
    CHECK(b.weight_fixed_point_residual() < 1e-9);
    CHECK(b.has_negative_entry());
    CHECK(b.min_entry() < 0.0);
  }
}

TEST_CASE("property: a validated MIC is never a Wigner basis") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto cls = classify(random_mic(2 + static_cast<int>(seed % 5), seed));
    CHECK(cls.is_mic);
    CHECK_FALSE(cls.is_wigner);
    CHECK(cls.max_offdiag_gram > kDefaultTol);
  }
}

TEST_CASE("zero-weight elements pass validation but are rejected downstream") {
  const auto cls = validate(zero_weight_elements());
  CHECK(cls.is_measure_basis);
  CHECK(cls.has_zero_weight);
  const auto basis = MeasureBasis::create(zero_weight_elements(), "zero-weight");
  for (auto fn : {+[](const MeasureBasis& b) { (void)rescaled_frame_operator(b); },
                  +[](const MeasureBasis& b) { (void)born_matrix(b); }}) {
    try {
      fn(basis);
      FAIL("expected SingularWeight");
    } catch (const qb::Error& e) {
      CHECK(e.kind() == ErrorKind::SingularWeight);
    }
  }
  // The plain frame operator does not divide by weights.
  CHECK(frame_operator(basis).is_self_adjoint());
}

TEST_CASE("combine forms the documented linear combinations") {
  const auto basis = builtin_sic(2);
  RMatrix c = RMatrix::Zero(4, 4);
  c(0, 1) = 2.0;
  c(0, 3) = -1.0;
  c(2, 2) = 1.0;
  const auto out = combine(c, basis.elements());
  CHECK(max_abs_diff(out[0], 2.0 * basis[1] - basis[3]) < 1e-15);
  CHECK(max_abs_diff(out[2], basis[2]) < 1e-15);
  CHECK(max_abs_diff(out[1], HermitianOperator::zero(2)) < 1e-15);
}
