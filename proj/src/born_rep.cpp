#include "quasibasis/born_rep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quasibasis/wigner_transform.hpp"

namespace qb {
namespace {

void require_same_dim(int a, int b, const char* context) {
  if (a != b) throw Error(ErrorKind::DimensionMismatch, std::string(context) + ": dimension mismatch");
}

}  // namespace

QuasiDistribution QuasiDistribution::create(RVector values, double magnitude) {
  const double total = values.sum();
  const double scale = std::max({1.0, values.lpNorm<1>(), magnitude});
  if (std::abs(total - 1.0) > 1e-10 * scale) {
    std::ostringstream os;
    os << "quasi-distribution: entries sum to " << total;
    throw Error(ErrorKind::InvalidArgument, os.str(), total - 1.0);
  }
  return QuasiDistribution(std::move(values));
}

double QuasiDistribution::negativity() const { return -values_.cwiseMin(0.0).sum(); }

bool is_state(const HermitianOperator& rho, double tol) {
  return std::abs(rho.trace() - 1.0) <= tol && min_eigenvalue(rho) >= -tol;
}

void require_state(const HermitianOperator& rho, const char* context) {
  const double tr_dev = rho.trace() - 1.0;
  if (std::abs(tr_dev) > kStateTol) {
    std::ostringstream os;
    os << context << ": trace deviates from 1 by " << tr_dev;
    throw Error(ErrorKind::NotState, os.str(), tr_dev);
  }
  const double lmin = min_eigenvalue(rho);
  if (lmin < -kStateTol) {
    std::ostringstream os;
    os << context << ": minimum eigenvalue " << lmin << " is negative";
    throw Error(ErrorKind::NotState, os.str(), lmin);
  }
}

void require_povm(std::span<const HermitianOperator> povm, const char* context) {
  if (povm.empty()) throw Error(ErrorKind::NotPovm, std::string(context) + ": empty POVM");
  const int d = povm.front().dim();
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& e : povm) {
    require_same_dim(e.dim(), d, context);
    const double lmin = min_eigenvalue(e);
    if (lmin < -kStateTol) {
      std::ostringstream os;
      os << context << ": effect has negative eigenvalue " << lmin;
      throw Error(ErrorKind::NotPovm, os.str(), lmin);
    }
    sum += e.matrix();
  }
  const double residual = (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (residual > kStateTol) {
    std::ostringstream os;
    os << context << ": effects sum to identity only within " << residual;
    throw Error(ErrorKind::NotPovm, os.str(), residual);
  }
}

std::vector<HermitianOperator> computational_povm(int d) {
  std::vector<HermitianOperator> out;
  for (int j = 0; j < d; ++j) {
    CMatrix m = CMatrix::Zero(d, d);
    m(j, j) = 1.0;
    out.push_back(HermitianOperator::from_matrix(m));
  }
  return out;
}

RVector state_to_probs(const HermitianOperator& rho, const MeasureBasis& basis) {
  require_same_dim(rho.dim(), basis.dim(), "state_to_probs");
  require_state(rho, "state_to_probs");
  RVector p(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) p[static_cast<Eigen::Index>(i)] = hs_inner(rho, basis[i]);
  return p;
}

Reconstruction probs_to_state(const RVector& probs, const MeasureBasis& basis) {
  if (probs.size() != static_cast<Eigen::Index>(basis.size())) {
    throw Error(ErrorKind::DimensionMismatch, "probs_to_state: vector length must be d²");
  }
  const auto dual = dual_basis(basis);
  HermitianOperator acc = HermitianOperator::zero(basis.dim());
  for (std::size_t i = 0; i < dual.size(); ++i) acc += probs[static_cast<Eigen::Index>(i)] * dual[i];
  const bool state = is_state(acc);
  return {std::move(acc), state};
}

RMatrix conditional_matrix(std::span<const HermitianOperator> povm, const MeasureBasis& basis) {
  require_positive_weights(basis, "conditional_matrix");
  const RVector l = bias(basis);
  RMatrix out(static_cast<Eigen::Index>(povm.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < povm.size(); ++j) {
    require_same_dim(povm[j].dim(), basis.dim(), "conditional_matrix");
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto col = static_cast<Eigen::Index>(i);
      out(static_cast<Eigen::Index>(j), col) = hs_inner(povm[j], basis[i]) / l[col];
    }
  }
  return out;
}

namespace {

RVector direct_probs(std::span<const HermitianOperator> povm, const HermitianOperator& rho) {
  RVector q(static_cast<Eigen::Index>(povm.size()));
  for (std::size_t j = 0; j < povm.size(); ++j) q[static_cast<Eigen::Index>(j)] = hs_inner(povm[j], rho);
  return q;
}

}  // namespace

TwoStepQ two_step_q(std::span<const HermitianOperator> povm, const MeasureBasis& basis, const HermitianOperator& rho) {
  require_povm(povm, "two_step_q");
  TwoStepQ out;
  out.q_direct = direct_probs(povm, rho);
  out.q_ltp_analog = conditional_matrix(povm, basis) * born_matrix(basis).phi() * state_to_probs(rho, basis);
  out.max_deviation = (out.q_direct - out.q_ltp_analog).cwiseAbs().maxCoeff();
  return out;
}

RVector classical_ltp(std::span<const HermitianOperator> povm, const MeasureBasis& basis,
                      const HermitianOperator& rho) {
  require_povm(povm, "classical_ltp");
  return conditional_matrix(povm, basis) * state_to_probs(rho, basis);
}

GaugeSplit gauge_split(std::span<const HermitianOperator> povm, const MeasureBasis& basis,
                       const HermitianOperator& rho) {
  require_povm(povm, "gauge_split");
  const BasisClass cls = classify(basis);
  if (!cls.is_unbiased) {
    std::ostringstream os;
    os << "gauge_split: reference basis is biased (max |l_i - 1/d| = " << cls.max_bias_deviation
       << "); the symmetric split needs a symmetric Born matrix, which only unbiased bases have";
    throw Error(ErrorKind::BiasedReference, os.str(), cls.max_bias_deviation);
  }
  const RMatrix root = sqrt_born(basis);
  const RVector q = direct_probs(povm, rho);
  RMatrix left = conditional_matrix(povm, basis) * root;
  const RVector p = state_to_probs(rho, basis);
  auto right = QuasiDistribution::create(root * p, (root.cwiseAbs() * p.cwiseAbs()).sum());

  double row_residual = 0.0;
  for (std::size_t j = 0; j < povm.size(); ++j) {
    const auto r = static_cast<Eigen::Index>(j);
    row_residual = std::max(row_residual, std::abs(left.row(r).sum() - basis.dim() * povm[j].trace()));
  }
  const double column_residual = (left.colwise().sum().array() - 1.0).abs().maxCoeff();
  const double recon = (left * right.values() - q).cwiseAbs().maxCoeff();
  return {std::move(left), std::move(right), recon, row_residual, column_residual};
}

HermitianOperator ebmc_apply(const MeasureBasis& basis, const HermitianOperator& x) {
  require_same_dim(x.dim(), basis.dim(), "ebmc_apply");
  require_positive_weights(basis, "ebmc_apply");
  HermitianOperator acc = HermitianOperator::zero(basis.dim());
  for (const auto& e : basis.elements()) acc += (hs_inner(x, e) / e.trace()) * e;
  return acc;
}

}  // namespace qb
