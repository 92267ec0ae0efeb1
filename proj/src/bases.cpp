#include "quasibasis/bases.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "quasibasis/parallel.hpp"

namespace qb {
namespace {

int checked_dim(std::span<const HermitianOperator> elements) {
  if (elements.empty()) throw Error(ErrorKind::InvalidArgument, "basis: no elements");
  const int d = elements.front().dim();
  for (const auto& e : elements) {
    if (e.dim() != d) throw Error(ErrorKind::DimensionMismatch, "basis: elements have mixed dimensions");
  }
  if (elements.size() != static_cast<std::size_t>(d) * d) {
    std::ostringstream os;
    os << "basis: expected " << d * d << " elements for d=" << d << ", got " << elements.size();
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  return d;
}

RMatrix coordinate_matrix(const MeasureBasis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  RMatrix c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) c.col(i) = op_to_coords(basis[static_cast<std::size_t>(i)]);
  return c;
}

}  // namespace

std::string BasisClass::summary() const {
  if (!is_measure_basis) return "not a measure basis";
  std::string out = is_mic ? "MIC" : (is_wigner ? "Wigner basis" : "measure basis");
  out += is_unbiased ? ", unbiased" : ", biased";
  if (is_rank1) out += ", rank-1";
  if (has_zero_weight) out += ", zero-weight element";
  return out;
}

RMatrix gram(std::span<const HermitianOperator> elements) {
  const auto n = static_cast<Eigen::Index>(elements.size());
  RMatrix g(n, n);
  parallel_for(elements.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = hs_inner(elements[i], elements[j]);
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  });
  return g;
}

RMatrix gram(const MeasureBasis& basis) { return gram(std::span(basis.elements())); }

BasisClass validate(std::span<const HermitianOperator> elements, double tol) {
  const int d = checked_dim(elements);
  BasisClass out;

  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& e : elements) sum += e.matrix();
  out.sum_residual = (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (out.sum_residual > tol) out.failures.push_back({"sum_to_identity", out.sum_residual});

  out.min_trace = std::numeric_limits<double>::infinity();
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  out.is_rank1 = true;
  for (const auto& e : elements) {
    const double tr = e.trace();
    out.min_trace = std::min(out.min_trace, tr);
    out.max_bias_deviation = std::max(out.max_bias_deviation, std::abs(tr - 1.0 / d));
    if (tr <= kWeightFloor) out.has_zero_weight = true;
    const RVector ev = eigenvalues(e);
    out.min_eigenvalue = std::min(out.min_eigenvalue, ev[0]);
    const double threshold = 1e-8 * ev.cwiseAbs().maxCoeff();
    if ((ev.array() > threshold).count() != 1 || ev[0] < -threshold) out.is_rank1 = false;
  }
  if (out.min_trace < -tol) out.failures.push_back({"nonnegative_trace", out.min_trace});

  const RMatrix g = gram(elements);
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(g, Eigen::EigenvaluesOnly);
  const RVector gev = solver.eigenvalues();
  const double gmax = gev.cwiseAbs().maxCoeff();
  const double gmin = gev[0];
  out.gram_condition = gmin > 0.0 ? gmax / gmin : std::numeric_limits<double>::infinity();
  if (!(out.gram_condition <= kMaxGramCondition)) {
    out.failures.push_back({"linear_independence", gmin});
  }
  RMatrix off = g;
  off.diagonal().setZero();
  out.max_offdiag_gram = off.cwiseAbs().maxCoeff();

  out.is_measure_basis = out.failures.empty();
  out.is_mic = out.is_measure_basis && out.min_eigenvalue >= -tol;
  out.is_wigner = out.is_measure_basis && out.max_offdiag_gram <= tol;
  out.is_unbiased = out.max_bias_deviation <= tol;
  out.is_rank1 = out.is_rank1 && out.is_measure_basis;
  if (out.is_mic && out.is_wigner) {
    // Positive semidefinite elements cannot be mutually orthogonal; only
    // an inconsistent tolerance lands here.
    out.failures.push_back({"mic_and_wigner", out.max_offdiag_gram});
    out.is_wigner = false;
  }
  return out;
}

MeasureBasis MeasureBasis::create(std::vector<HermitianOperator> elements, std::string label, double tol) {
  const BasisClass cls = validate(elements, tol);
  if (!cls.is_measure_basis) {
    const auto& f = cls.failures.front();
    std::ostringstream os;
    os << "not a measure basis: " << f.name << " residual " << f.value;
    throw Error(ErrorKind::NotMeasureBasis, os.str(), f.value);
  }
  const int d = elements.front().dim();
  return MeasureBasis(d, std::move(elements), std::move(label));
}

MeasureBasis MeasureBasis::relabeled(std::string label) const {
  return MeasureBasis(dim_, elements_, std::move(label));
}

BasisClass classify(const MeasureBasis& basis, double tol) { return validate(basis.elements(), tol); }

RVector bias(const MeasureBasis& basis) {
  RVector l(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) l[static_cast<Eigen::Index>(i)] = basis[i].trace();
  return l;
}

RMatrix bias_matrix(const MeasureBasis& basis) { return bias(basis).asDiagonal(); }

GramInverse inverse_gram(const MeasureBasis& basis) {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(gram(basis));
  const RVector& ev = solver.eigenvalues();
  const double cond = ev[0] > 0.0 ? ev.cwiseAbs().maxCoeff() / ev[0] : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxGramCondition)) {
    std::ostringstream os;
    os << "gram inverse: condition number " << cond << " exceeds " << kMaxGramCondition;
    throw Error(ErrorKind::Singular, os.str(), cond);
  }
  const RMatrix& v = solver.eigenvectors();
  RMatrix inv = v * ev.cwiseInverse().asDiagonal() * v.transpose();
  return {(inv + inv.transpose()) * 0.5, cond};
}

void require_positive_weights(const MeasureBasis& basis, const char* context) {
  const RVector l = bias(basis);
  const Eigen::Index n = l.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (l[i] <= kWeightFloor) {
      std::ostringstream os;
      os << context << ": element " << i << " has weight " << l[i] << " (zero weights are singular here)";
      throw Error(ErrorKind::SingularWeight, os.str(), l[i]);
    }
  }
}

std::vector<HermitianOperator> combine(const RMatrix& coefficients, std::span<const HermitianOperator> elements) {
  if (coefficients.cols() != static_cast<Eigen::Index>(elements.size()) || elements.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "combine: coefficient matrix does not match element count");
  }
  const int d = elements.front().dim();
  std::vector<HermitianOperator> out(static_cast<std::size_t>(coefficients.rows()));
  parallel_for(out.size(), [&](std::size_t i) {
    CMatrix acc = CMatrix::Zero(d, d);
    for (std::size_t j = 0; j < elements.size(); ++j) {
      acc += coefficients(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * elements[j].matrix();
    }
    out[i] = HermitianOperator::from_matrix(acc);
  });
  return out;
}

std::vector<HermitianOperator> dual_basis(const MeasureBasis& basis) {
  return combine(inverse_gram(basis).inverse, basis.elements());
}

SuperOperator frame_operator(const MeasureBasis& basis) {
  const RMatrix c = coordinate_matrix(basis);
  return SuperOperator::from_matrix(basis.dim(), c * c.transpose());
}

SuperOperator rescaled_frame_operator(const MeasureBasis& basis) {
  require_positive_weights(basis, "rescaled frame operator");
  const RMatrix c = coordinate_matrix(basis);
  const RVector inv_l = bias(basis).cwiseInverse();
  RMatrix s = c * inv_l.asDiagonal() * c.transpose();
  return SuperOperator::from_matrix(basis.dim(), (s + s.transpose()) * 0.5);
}

double BornMatrix::column_sum_residual() const {
  return (phi_.colwise().sum().array() - 1.0).abs().maxCoeff();
}

double BornMatrix::weight_fixed_point_residual() const {
  return (phi_ * weights_ - weights_).cwiseAbs().maxCoeff();
}

bool BornMatrix::has_negative_entry(double tol) const { return phi_.minCoeff() < -tol; }

BornMatrix born_matrix(const MeasureBasis& basis) {
  require_positive_weights(basis, "born matrix");
  const RVector l = bias(basis);
  return BornMatrix(l.asDiagonal() * inverse_gram(basis).inverse, l);
}

}  // namespace qb
