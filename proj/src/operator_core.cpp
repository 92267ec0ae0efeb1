#include "quasibasis/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qb {
namespace {

template <typename Matrix>
Matrix symmetrize_or_throw(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + ": matrix is not square");
  }
  const double scale = m.norm();
  const double asym = (m - m.adjoint()).norm();
  if (asym > kHermiticityTol * std::max(scale, 1e-300) && asym > 0.0) {
    std::ostringstream os;
    os << what << ": asymmetry " << asym << " exceeds tolerance relative to norm " << scale;
    throw Error(ErrorKind::NotHermitian, os.str(), asym);
  }
  Matrix out = (m + m.adjoint()) * 0.5;
  return out;
}

double resolve_clip(const Eigen::VectorXd& lambda, std::optional<double> clip) {
  if (clip) return *clip;
  const double scale = lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0;
  return kDefaultClip * scale;
}

Eigen::VectorXd apply_psd(const Eigen::VectorXd& lambda, PsdFunction f, double clip) {
  Eigen::VectorXd out(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double v = lambda[i];
    if (v < -clip) {
      std::ostringstream os;
      os << "matrix function: eigenvalue " << v << " below -clip " << -clip;
      throw Error(ErrorKind::NotPositive, os.str(), v);
    }
    if (v < clip || v <= 0.0) {
      if (f == PsdFunction::InvSqrt) {
        std::ostringstream os;
        os << "inverse square root: eigenvalue " << v << " is zero within clip " << clip;
        throw Error(ErrorKind::Singular, os.str(), v);
      }
      out[i] = 0.0;
      continue;
    }
    out[i] = f == PsdFunction::Sqrt ? std::sqrt(v) : 1.0 / std::sqrt(v);
  }
  return out;
}

template <typename Matrix>
Matrix reassemble(const Matrix& vecs, const Eigen::VectorXd& values) {
  using Scalar = typename Matrix::Scalar;
  Matrix out = vecs * values.cast<Scalar>().asDiagonal() * vecs.adjoint();
  return (out + out.adjoint()) * 0.5;
}

}  // namespace

HermitianOperator HermitianOperator::from_matrix(const CMatrix& m) {
  if (m.rows() < 2) {
    throw Error(ErrorKind::InvalidArgument, "hermitian operator: dimension must be at least 2");
  }
  return HermitianOperator(symmetrize_or_throw(m, "hermitian operator"));
}

HermitianOperator HermitianOperator::identity(int d) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "identity: dimension must be at least 2");
  return HermitianOperator(CMatrix::Identity(d, d));
}

HermitianOperator HermitianOperator::zero(int d) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "zero: dimension must be at least 2");
  return HermitianOperator(CMatrix::Zero(d, d));
}

HermitianOperator HermitianOperator::outer(const CVector& v) {
  if (v.size() < 2) throw Error(ErrorKind::InvalidArgument, "outer: dimension must be at least 2");
  CMatrix m = v * v.adjoint();
  return HermitianOperator((m + m.adjoint()) * 0.5);
}

HermitianOperator HermitianOperator::conjugated(const CMatrix& u) const {
  if (u.rows() != dim() || u.cols() != dim()) {
    throw Error(ErrorKind::DimensionMismatch, "conjugated: unitary has wrong shape");
  }
  CMatrix m = u * m_ * u.adjoint();
  return HermitianOperator((m + m.adjoint()) * 0.5);
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other) {
  if (other.dim() != dim()) throw Error(ErrorKind::DimensionMismatch, "operator+: dimension mismatch");
  m_ += other.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& other) {
  if (other.dim() != dim()) throw Error(ErrorKind::DimensionMismatch, "operator-: dimension mismatch");
  m_ -= other.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  m_ *= s;
  return *this;
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "hs_inner: dimension mismatch");
  // tr(AB) = Σ_jk A_jk B_kj = Σ_jk A_jk conj(B_jk) for Hermitian B.
  return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

double hs_norm_sq(const HermitianOperator& a) { return a.matrix().squaredNorm(); }

double max_abs_diff(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "max_abs_diff: dimension mismatch");
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  const int da = a.dim();
  const int db = b.dim();
  CMatrix m(da * db, da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) m.block(i * db, j * db, db, db) = a(i, j) * b.matrix();
  return HermitianOperator::from_matrix(m);
}

SpectralDecomposition eig_hermitian(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidArgument, "eig_hermitian: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RVector eigenvalues(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double min_eigenvalue(const HermitianOperator& a) { return eigenvalues(a)[0]; }

HermitianOperator mat_func_psd(const HermitianOperator& a, PsdFunction f, std::optional<double> clip) {
  const auto spec = eig_hermitian(a);
  const auto values = apply_psd(spec.eigenvalues, f, resolve_clip(spec.eigenvalues, clip));
  return HermitianOperator::from_matrix(reassemble(spec.eigenvectors, values));
}

RMatrix symmetrized(const RMatrix& a) { return symmetrize_or_throw(a, "symmetric matrix"); }

RMatrix mat_func_psd(const RMatrix& a, PsdFunction f, std::optional<double> clip) {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(symmetrized(a));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidArgument, "mat_func_psd: eigensolver did not converge");
  }
  const auto values = apply_psd(solver.eigenvalues(), f, resolve_clip(solver.eigenvalues(), clip));
  return reassemble<RMatrix>(solver.eigenvectors(), values);
}

HermitianOperator apply_function(const HermitianOperator& a, const std::function<double(double)>& f) {
  const auto spec = eig_hermitian(a);
  RVector values = spec.eigenvalues.unaryExpr(f);
  return HermitianOperator::from_matrix(reassemble(spec.eigenvectors, values));
}

std::vector<HermitianOperator> herm_onb(int d) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "herm_onb: dimension must be at least 2");
  std::vector<HermitianOperator> out;
  out.reserve(static_cast<std::size_t>(d) * d);
  out.push_back(HermitianOperator::identity(d) * (1.0 / std::sqrt(static_cast<double>(d))));
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      CMatrix m = CMatrix::Zero(d, d);
      m(j, k) = r2;
      m(k, j) = r2;
      out.push_back(HermitianOperator::from_matrix(m));
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      CMatrix m = CMatrix::Zero(d, d);
      m(j, k) = Complex(0.0, -r2);
      m(k, j) = Complex(0.0, r2);
      out.push_back(HermitianOperator::from_matrix(m));
    }
  }
  for (int l = 1; l < d; ++l) {
    CMatrix m = CMatrix::Zero(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int t = 0; t < l; ++t) m(t, t) = norm;
    m(l, l) = -l * norm;
    out.push_back(HermitianOperator::from_matrix(m));
  }
  return out;
}

// The coordinate maps use closed forms of hs_inner against herm_onb(d).
RVector op_to_coords(const HermitianOperator& a) {
  const int d = a.dim();
  RVector c(d * d);
  const auto& m = a.matrix();
  const double s2 = std::sqrt(2.0);
  Eigen::Index idx = 0;
  c[idx++] = a.trace() / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) c[idx++] = s2 * m(j, k).real();
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) c[idx++] = -s2 * m(j, k).imag();
  for (int l = 1; l < d; ++l) {
    double acc = 0.0;
    for (int t = 0; t < l; ++t) acc += m(t, t).real();
    acc -= l * m(l, l).real();
    c[idx++] = acc / std::sqrt(static_cast<double>(l) * (l + 1));
  }
  return c;
}

HermitianOperator coords_to_op(const RVector& coords) {
  const auto n = coords.size();
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (static_cast<Eigen::Index>(d) * d != n || d < 2) {
    throw Error(ErrorKind::DimensionMismatch, "coords_to_op: length is not a square d² with d ≥ 2");
  }
  CMatrix m = CMatrix::Zero(d, d);
  const double r2 = 1.0 / std::sqrt(2.0);
  Eigen::Index idx = 0;
  const double c0 = coords[idx++] / std::sqrt(static_cast<double>(d));
  for (int t = 0; t < d; ++t) m(t, t) = c0;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      const double c = coords[idx++] * r2;
      m(j, k) += c;
      m(k, j) += c;
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      const double c = coords[idx++] * r2;
      m(j, k) += Complex(0.0, -c);
      m(k, j) += Complex(0.0, c);
    }
  }
  for (int l = 1; l < d; ++l) {
    const double c = coords[idx++] / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int t = 0; t < l; ++t) m(t, t) += c;
    m(l, l) -= l * c;
  }
  return HermitianOperator::from_matrix(m);
}

SuperOperator SuperOperator::identity(int d) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "superoperator: dimension must be at least 2");
  return SuperOperator(d, RMatrix::Identity(d * d, d * d));
}

SuperOperator SuperOperator::from_matrix(int d, RMatrix m) {
  if (d < 2 || m.rows() != d * d || m.cols() != d * d) {
    throw Error(ErrorKind::DimensionMismatch, "superoperator: matrix must be d²×d²");
  }
  return SuperOperator(d, std::move(m));
}

SuperOperator SuperOperator::from_action(int d, const Action& action) {
  const auto onb = herm_onb(d);
  const int n = d * d;
  RMatrix m(n, n);
  for (int beta = 0; beta < n; ++beta) {
    const CMatrix image = action(onb[beta].matrix());
    if (image.rows() != d || image.cols() != d) {
      throw Error(ErrorKind::DimensionMismatch, "superop_from_action: action changed the dimension");
    }
    m.col(beta) = op_to_coords(HermitianOperator::from_matrix(image));
  }
  return SuperOperator(d, std::move(m));
}

HermitianOperator SuperOperator::apply(const HermitianOperator& x) const {
  if (x.dim() != d_) throw Error(ErrorKind::DimensionMismatch, "superoperator apply: dimension mismatch");
  return coords_to_op(m_ * op_to_coords(x));
}

SuperOperator SuperOperator::compose(const SuperOperator& inner) const {
  if (inner.d_ != d_) throw Error(ErrorKind::DimensionMismatch, "superoperator compose: dimension mismatch");
  return SuperOperator(d_, m_ * inner.m_);
}

bool SuperOperator::is_self_adjoint(double tol) const {
  return (m_ - m_.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m_.cwiseAbs().maxCoeff());
}

RVector SuperOperator::spectrum() const {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(symmetrized(m_), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

SuperOperator SuperOperator::sqrt() const { return SuperOperator(d_, mat_func_psd(m_, PsdFunction::Sqrt)); }

SuperOperator SuperOperator::inv_sqrt() const {
  return SuperOperator(d_, mat_func_psd(m_, PsdFunction::InvSqrt));
}

SuperOperator SuperOperator::inverse() const {
  Eigen::FullPivLU<RMatrix> lu(m_);
  if (!lu.isInvertible()) throw Error(ErrorKind::Singular, "superoperator inverse: map is singular");
  return SuperOperator(d_, lu.inverse());
}

}  // namespace qb
