#include "quasibasis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "quasibasis/parallel.hpp"
#include "quasibasis/wigner_transform.hpp"

namespace qb {

double distance(const MeasureBasis& lhs, const MeasureBasis& rhs) {
  if (lhs.dim() != rhs.dim() || lhs.size() != rhs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "distance: bases have different shapes");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) acc += hs_norm_sq(lhs[i] - rhs[i]);
  return acc;
}

DistanceReport distance_bounds(const MeasureBasis& mic) {
  const BasisClass cls = classify(mic);
  if (!cls.is_unbiased) {
    throw Error(ErrorKind::BiasedReference, "distance_bounds: the bounds are only established for unbiased MICs",
                cls.max_bias_deviation);
  }
  if (!cls.is_mic) {
    throw Error(ErrorKind::NotPositive, "distance_bounds: input is not a MIC", cls.min_eigenvalue);
  }
  DistanceReport out;
  out.spectrum = frame_operator(mic).spectrum();
  const double root_inv_d = std::sqrt(1.0 / mic.dim());
  for (Eigen::Index k = 0; k < out.spectrum.size(); ++k) {
    const double root = std::sqrt(std::max(out.spectrum[k], 0.0));
    out.lower_bound += (root - root_inv_d) * (root - root_inv_d);
    out.upper_bound += (root + root_inv_d) * (root + root_inv_d);
  }
  out.upper_bound -= 4.0 / mic.dim();
  return out;
}

DistanceReport distance_report(const MeasureBasis& mic, const MeasureBasis& wigner, double tol) {
  const BasisClass wcls = classify(wigner);
  if (!wcls.is_wigner || !wcls.is_unbiased) {
    throw Error(ErrorKind::NotWignerBasis, "distance_report: second basis must be an unbiased Wigner basis",
                std::max(wcls.max_offdiag_gram, wcls.max_bias_deviation));
  }
  DistanceReport out = distance_bounds(mic);
  out.distance = distance(mic, wigner);
  out.saturates_lower = std::abs(out.distance - out.lower_bound) <= tol;
  out.saturates_upper = std::abs(out.distance - out.upper_bound) <= tol;
  return out;
}

SicBounds sic_bounds(int d) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "sic_bounds: dimension must be at least 2");
  const double dd = d;
  const double scale = (dd - 1.0) / dd;
  const double root = 2.0 * std::sqrt(dd + 1.0);
  return {scale * (dd + 2.0 - root), scale * (dd + 2.0 + root)};
}

double ceiling_negativity(const MeasureBasis& wigner) {
  const BasisClass cls = classify(wigner);
  if (!cls.is_wigner) {
    throw Error(ErrorKind::NotWignerBasis, "ceiling_negativity: input is not a Wigner basis", cls.max_offdiag_gram);
  }
  double lowest = 0.0;
  for (const auto& f : wigner.elements()) lowest = std::min(lowest, min_eigenvalue(f));
  return -lowest;
}

double sampled_ceiling_negativity(const MeasureBasis& wigner, int samples, std::uint64_t seed) {
  Rng rng(seed, 0x6e6567);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto rho = random_pure_state(wigner.dim(), rng);
    for (const auto& f : wigner.elements()) best = std::max(best, -hs_inner(rho, f));
  }
  return best;
}

TripleProducts::TripleProducts(int dim, std::vector<Complex> gamma)
    : d_(dim), n_(static_cast<std::size_t>(dim) * dim), gamma_(std::move(gamma)) {
  if (gamma_.size() != n_ * n_ * n_) throw Error(ErrorKind::DimensionMismatch, "triple products: wrong tensor size");
}

double TripleProducts::cyclic_residual() const {
  double out = 0.0;
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t l = 0; l < n_; ++l) out = std::max(out, std::abs((*this)(j, k, l) - (*this)(k, l, j)));
  return out;
}

double TripleProducts::conjugation_residual() const {
  double out = 0.0;
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t l = 0; l < n_; ++l)
        out = std::max(out, std::abs((*this)(j, k, l) - std::conj((*this)(l, k, j))));
  return out;
}

double TripleProducts::sum_residual(const RVector& traces) const {
  double out = 0.0;
  const double d2 = static_cast<double>(d_) * d_;
  for (std::size_t j = 0; j < n_; ++j) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t l = 0; l < n_; ++l) acc += (*this)(j, k, l);
    out = std::max(out, std::abs(acc - d2 * traces[static_cast<Eigen::Index>(j)]));
  }
  return out;
}

TripleProducts triple_products(const MeasureBasis& basis, bool force) {
  const int d = basis.dim();
  if (d > 5 && !force) {
    throw Error(ErrorKind::InvalidArgument,
                "triple_products: d > 5 stores d^6 complex entries; pass force to compute anyway");
  }
  const std::size_t n = basis.size();
  const double d2 = static_cast<double>(d) * d;
  std::vector<Complex> gamma(n * n * n);
  parallel_for(n, [&](std::size_t j) {
    for (std::size_t k = 0; k < n; ++k) {
      const CMatrix jk = basis[j].matrix() * basis[k].matrix();
      for (std::size_t l = 0; l < n; ++l) {
        // tr(M F_l) = Σ_ab M_ab (F_l)_ba = Σ_ab M_ab conj((F_l)_ab)
        gamma[(j * n + k) * n + l] = d2 * (jk.array() * basis[l].matrix().conjugate().array()).sum();
      }
    }
  });
  return TripleProducts(d, std::move(gamma));
}

int affine_area(int d, WHIndex a, WHIndex b, WHIndex c) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "affine_area: dimension must be at least 2");
  const WHIndex vertices[3] = {a, b, c};
  long acc = 0;
  for (int e = 0; e < 3; ++e) {
    const WHIndex& p = vertices[e];
    const WHIndex& q = vertices[(e + 1) % 3];
    acc += static_cast<long>(p.k) * q.l - static_cast<long>(p.l) * q.k;
  }
  return static_cast<int>(((acc % d) + d) % d);
}

AreaCheck area_check(const MeasureBasis& basis, double tol) {
  const int d = basis.dim();
  const auto gamma = triple_products(basis, true);
  const std::size_t n = basis.size();
  AreaCheck out;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        const int area = affine_area(d, WHIndex::from_flat(static_cast<int>(j), d),
                                     WHIndex::from_flat(static_cast<int>(k), d),
                                     WHIndex::from_flat(static_cast<int>(l), d));
        const Complex expected = std::polar(1.0 / d, 4.0 * std::numbers::pi * area / d);
        const double residual = std::abs(gamma(j, k, l) - expected);
        out.max_residual = std::max(out.max_residual, residual);
        if (residual > tol) out.mismatches.push_back({j, k, l, expected, gamma(j, k, l)});
      }
  return out;
}

AreaCheck wootters_area_check(int d, double tol) {
  if (d == 2 || !is_prime(d)) throw Error(ErrorKind::InvalidArgument, "wootters_area_check: d must be an odd prime");
  return area_check(wootters_wigner(d), tol);
}

void require_sic(const MeasureBasis& basis, double tol) {
  const int d = basis.dim();
  const RMatrix g = gram(basis);
  const double d2 = static_cast<double>(d) * d;
  double deviation = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double expected = ((i == j ? d : 0) + 1.0) / (d2 * (d + 1));
      deviation = std::max(deviation, std::abs(g(i, j) - expected));
    }
  if (deviation > tol) {
    std::ostringstream os;
    os << "input is not a SIC: Gram deviates from the SIC Gram by " << deviation;
    throw Error(ErrorKind::NotSic, os.str(), deviation);
  }
}

double sic_triple_relation_check(const MeasureBasis& sic, int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidArgument, "sic_triple_relation_check: sign must be ±1");
  require_sic(sic);
  const int d = sic.dim();
  const double dd = d;
  const double r = sign * std::sqrt(dd + 1.0);
  const MeasureBasis pw = principal_wigner(sic).basis;
  const MeasureBasis f = sign > 0 ? pw : shifted(pw);

  const std::size_t n = sic.size();
  std::vector<CMatrix> proj;
  proj.reserve(n);
  for (const auto& e : sic.elements()) proj.push_back(dd * e.matrix());
  const double constant = (2.0 * r + r * r * (dd - 2.0)) / (dd * dd * r);

  double residual = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const CMatrix fjk = f[j].matrix() * f[k].matrix();
      const CMatrix pjk = proj[j] * proj[k];
      for (std::size_t l = 0; l < n; ++l) {
        const Complex lhs = dd * dd * dd * (fjk * f[l].matrix()).trace();
        const double deltas = (j == k) + (k == l) + (j == l);
        const Complex rhs = r * r * r * (pjk * proj[l]).trace() + (1.0 - r) * deltas - constant;
        residual = std::max(residual, std::abs(lhs - rhs));
      }
    }
  return residual;
}

int element_rank(const HermitianOperator& op, double rel_threshold) {
  const RVector ev = eigenvalues(op);
  const double threshold = rel_threshold * ev.cwiseAbs().maxCoeff();
  return static_cast<int>((ev.array().abs() > threshold).count());
}

bool wh_covariant(const MeasureBasis& basis, double tol) {
  const int d = basis.dim();
  const std::size_t n = basis.size();
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      if (k == 0 && l == 0) continue;
      const CMatrix u = wh_displacement(d, k, l);
      std::vector<bool> used(n, false);
      for (std::size_t i = 0; i < n; ++i) {
        const auto image = basis[i].conjugated(u);
        bool matched = false;
        for (std::size_t j = 0; j < n && !matched; ++j) {
          if (!used[j] && max_abs_diff(image, basis[j]) <= tol) {
            used[j] = true;
            matched = true;
          }
        }
        if (!matched) return false;
      }
    }
  return true;
}

Diagnostics diagnostics(const MeasureBasis& basis, double equiangular_tol, double rank_threshold) {
  Diagnostics out;
  const RMatrix g = gram(basis);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (i == j) continue;
      lo = std::min(lo, g(i, j));
      hi = std::max(hi, g(i, j));
    }
  out.spread = hi - lo;
  out.equiangular = out.spread <= equiangular_tol;
  for (const auto& e : basis.elements()) out.rank_profile.push_back(element_rank(e, rank_threshold));
  out.wh_covariant = wh_covariant(basis);
  return out;
}

}  // namespace qb
