#include "quasibasis/wigner_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "quasibasis/parallel.hpp"

namespace qb {
namespace {

double max_elementwise_deviation(std::span<const HermitianOperator> a, std::span<const HermitianOperator> b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, max_abs_diff(a[i], b[i]));
  return out;
}

std::vector<HermitianOperator> apply_each(const SuperOperator& map, std::span<const HermitianOperator> elements) {
  std::vector<HermitianOperator> out(elements.size());
  parallel_for(out.size(), [&](std::size_t i) { out[i] = map.apply(elements[i]); });
  return out;
}

void require_wigner(const MeasureBasis& basis, double tol, const char* context) {
  const BasisClass cls = classify(basis, tol);
  if (!cls.is_wigner) {
    std::ostringstream os;
    os << context << ": input is not a Wigner basis (max off-diagonal Gram entry " << cls.max_offdiag_gram << ")";
    throw Error(ErrorKind::NotWignerBasis, os.str(), cls.max_offdiag_gram);
  }
}

}  // namespace

const char* to_string(Equivalence e) {
  switch (e) {
    case Equivalence::Equivalent: return "equivalent";
    case Equivalence::NotEquivalent: return "not equivalent";
    case Equivalence::GreedyMatchFailed: return "not equivalent under greedy matching";
  }
  return "unknown";
}

RMatrix sqrt_born(const MeasureBasis& basis) {
  require_positive_weights(basis, "sqrt_born");
  const RVector l = bias(basis);
  const RVector root_l = l.cwiseSqrt();
  const RMatrix g_inv = inverse_gram(basis).inverse;
  const RMatrix inner = root_l.asDiagonal() * g_inv * root_l.asDiagonal();
  const RMatrix inner_root = mat_func_psd(inner, PsdFunction::Sqrt);

  Eigen::SelfAdjointEigenSolver<RMatrix> check(inner_root, Eigen::EigenvaluesOnly);
  if (check.eigenvalues()[0] <= 0.0) {
    std::ostringstream os;
    os << "sqrt_born: principal root has nonpositive eigenvalue " << check.eigenvalues()[0];
    throw Error(ErrorKind::Singular, os.str(), check.eigenvalues()[0]);
  }
  return root_l.asDiagonal() * inner_root * root_l.cwiseInverse().asDiagonal();
}

PWResult principal_wigner(const MeasureBasis& basis) {
  const SuperOperator root = rescaled_frame_operator(basis).inv_sqrt();
  auto via_superop = apply_each(root, basis.elements());
  auto via_sqrtphi = combine(sqrt_born(basis), basis.elements());
  const double cross = max_elementwise_deviation(via_superop, via_sqrtphi);
  if (cross > kCrossErrorTol) {
    std::ostringstream os;
    os << "principal_wigner: superoperator and sqrt-Born routes disagree by " << cross;
    throw Error(ErrorKind::PathDisagreement, os.str(), cross);
  }

  MeasureBasis out = MeasureBasis::create(via_superop, "PW(" + basis.label() + ")");
  const BasisClass cls = classify(out);
  const double bias_drift = (bias(out) - bias(basis)).cwiseAbs().maxCoeff();
  if (!cls.is_wigner || bias_drift > kDefaultTol) {
    std::ostringstream os;
    os << "principal_wigner: output failed Wigner validation (off-diagonal " << cls.max_offdiag_gram
       << ", bias drift " << bias_drift << ")";
    throw Error(ErrorKind::NotWignerBasis, os.str(), std::max(cls.max_offdiag_gram, bias_drift));
  }
  return {std::move(out), std::move(via_superop), std::move(via_sqrtphi), cross};
}

MeasureBasis shifted(const MeasureBasis& wigner, double tol) {
  require_wigner(wigner, tol, "shifted");
  const int d = wigner.dim();
  const auto identity = HermitianOperator::identity(d);
  std::vector<HermitianOperator> elements;
  elements.reserve(wigner.size());
  for (const auto& f : wigner.elements()) elements.push_back(-f + (2.0 * f.trace() / d) * identity);
  return MeasureBasis::create(std::move(elements), "S" + wigner.label());
}

EquivalenceResult wigner_equivalent(const MeasureBasis& lhs, const MeasureBasis& rhs, double tol, MatchMode mode) {
  EquivalenceResult out;
  if (lhs.dim() != rhs.dim()) {
    out.max_deviation = std::numeric_limits<double>::infinity();
    return out;
  }
  const auto a = principal_wigner(lhs).basis;
  const auto b = principal_wigner(rhs).basis;
  const std::size_t n = a.size();

  if (mode == MatchMode::Ordered) {
    out.max_deviation = max_elementwise_deviation(a.elements(), b.elements());
    out.outcome = out.max_deviation <= tol ? Equivalence::Equivalent : Equivalence::NotEquivalent;
    out.permutation.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.permutation[i] = i;
    return out;
  }

  // Greedy nearest-element matching among unused, bias-compatible elements.
  std::vector<bool> used(n, false);
  out.permutation.assign(n, n);
  bool greedy_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    double best_any = std::numeric_limits<double>::infinity();
    std::size_t best_j = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(a[i].trace() - b[j].trace()) > tol) continue;
      const double dev = max_abs_diff(a[i], b[j]);
      best_any = std::min(best_any, dev);
      if (!used[j] && dev < best) {
        best = dev;
        best_j = j;
      }
    }
    if (best_any > tol) {
      // No element of PW(M) is close to this one: no permutation can work.
      out.outcome = Equivalence::NotEquivalent;
      out.max_deviation = best_any;
      return out;
    }
    if (best_j == n || best > tol) {
      greedy_ok = false;
      out.max_deviation = std::max(out.max_deviation, best);
      continue;
    }
    used[best_j] = true;
    out.permutation[i] = best_j;
    out.max_deviation = std::max(out.max_deviation, best);
  }
  if (!greedy_ok) {
    out.outcome = Equivalence::GreedyMatchFailed;
    return out;
  }
  // Verify the assignment as a whole.
  double verified = 0.0;
  for (std::size_t i = 0; i < n; ++i) verified = std::max(verified, max_abs_diff(a[i], b[out.permutation[i]]));
  out.max_deviation = verified;
  out.outcome = verified <= tol ? Equivalence::Equivalent : Equivalence::GreedyMatchFailed;
  return out;
}

MeasureBasis lift(const MeasureBasis& wigner, const MeasureBasis& reference) {
  if (wigner.dim() != reference.dim()) throw Error(ErrorKind::DimensionMismatch, "lift: dimension mismatch");
  require_wigner(wigner, kDefaultTol, "lift");
  const SuperOperator root = rescaled_frame_operator(reference).sqrt();
  return MeasureBasis::create(apply_each(root, wigner.elements()),
                              "lift(" + wigner.label() + "," + reference.label() + ")");
}

}  // namespace qb
