#include "quasibasis/constructions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/QR>

#include "quasibasis/parallel.hpp"

namespace qb {
namespace {

int mod(int a, int d) { return ((a % d) + d) % d; }

void require_random_dim(int d, const char* what) {
  if (d < 2 || d > 8) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + ": dimension must lie in [2, 8]");
  }
}

HermitianOperator pauli_combination(double c0, double cx, double cy, double cz) {
  CMatrix m(2, 2);
  m(0, 0) = c0 + cz;
  m(1, 1) = c0 - cz;
  m(0, 1) = Complex(cx, -cy);
  m(1, 0) = Complex(cx, cy);
  return HermitianOperator::from_matrix(m);
}

// Conjugates every element by Σ^{-1/2}, Σ = Σ_i A_i, so that the result sums
// to the identity.
std::vector<HermitianOperator> normalize_sum(const std::vector<HermitianOperator>& ops) {
  HermitianOperator total = HermitianOperator::zero(ops.front().dim());
  for (const auto& a : ops) total += a;
  const CMatrix root = mat_func_psd(total, PsdFunction::InvSqrt).matrix();
  std::vector<HermitianOperator> out;
  out.reserve(ops.size());
  for (const auto& a : ops) out.push_back(a.conjugated(root));
  return out;
}

}  // namespace

CMatrix wh_displacement(int d, int k, int l) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "wh_displacement: dimension must be at least 2");
  k = mod(k, d);
  l = mod(l, d);
  // (X^k Z^l)|j⟩ = ω^{l j}|j + k⟩
  CMatrix m = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>((l * j) % d) / d;
    m((j + k) % d, j) = std::polar(1.0, phase);
  }
  return m;
}

Fiducial Fiducial::create(CVector amplitudes) {
  if (amplitudes.size() < 2) throw Error(ErrorKind::InvalidArgument, "fiducial: dimension must be at least 2");
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "fiducial: norm " << norm << " is not 1";
    throw Error(ErrorKind::InvalidArgument, os.str(), norm - 1.0);
  }
  amplitudes /= norm;
  return Fiducial{std::move(amplitudes)};
}

MeasureBasis sic_from_fiducial(const Fiducial& fiducial, double tol) {
  const int d = fiducial.dim();
  const int n = d * d;
  std::vector<HermitianOperator> elements(static_cast<std::size_t>(n));
  parallel_for(elements.size(), [&](std::size_t flat) {
    const auto idx = WHIndex::from_flat(static_cast<int>(flat), d);
    const CVector v = wh_displacement(d, idx.k, idx.l) * fiducial.amplitudes;
    elements[flat] = HermitianOperator::outer(v) * (1.0 / d);
  });
  const RMatrix g = gram(elements);
  const double d2 = static_cast<double>(d) * d;
  double deviation = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double expected = ((i == j ? d : 0) + 1.0) / (d2 * (d + 1));
      deviation = std::max(deviation, std::abs(g(i, j) - expected));
    }
  if (deviation > tol) {
    std::ostringstream os;
    os << "sic_from_fiducial: orbit Gram deviates from the SIC Gram by " << deviation;
    throw Error(ErrorKind::NotSic, os.str(), deviation);
  }
  return MeasureBasis::create(std::move(elements), "wh-sic-d" + std::to_string(d));
}

Fiducial hesse_fiducial() {
  CVector v(3);
  const double s = 1.0 / std::sqrt(2.0);
  v << 0.0, s, -s;
  return Fiducial::create(v);
}

MeasureBasis builtin_sic(int d) {
  if (d == 2) {
    const double s = 1.0 / std::sqrt(3.0);
    const int signs[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    std::vector<HermitianOperator> elements;
    for (const auto& sg : signs) {
      elements.push_back(pauli_combination(0.25, 0.25 * s * sg[0], 0.25 * s * sg[1], 0.25 * s * sg[2]));
    }
    return MeasureBasis::create(std::move(elements), "sic-d2");
  }
  if (d == 3) return sic_from_fiducial(hesse_fiducial()).relabeled("hesse-sic-d3");
  throw Error(ErrorKind::InvalidArgument,
              "builtin_sic: only d=2 and d=3 are built in; supply a fiducial file for other dimensions");
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

std::vector<int> prime_factors(int n) {
  std::vector<int> out;
  for (int p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

MeasureBasis wootters_wigner(int d) {
  if (!is_prime(d)) {
    throw Error(ErrorKind::InvalidArgument,
                "wootters_wigner: d must be 2 or an odd prime (use composite_wootters for products)");
  }
  std::vector<HermitianOperator> elements;
  elements.reserve(static_cast<std::size_t>(d) * d);
  if (d == 2) {
    for (int q = 0; q < 2; ++q)
      for (int p = 0; p < 2; ++p) {
        const double sq = q ? -1.0 : 1.0;
        const double sp = p ? -1.0 : 1.0;
        elements.push_back(pauli_combination(0.25, 0.25 * sp, 0.25 * sq * sp, 0.25 * sq));
      }
    return MeasureBasis::create(std::move(elements), "wootters-d2");
  }
  // Parity phase-point operator A₀|j⟩ = |−j mod d⟩.
  CMatrix parity = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) parity(mod(-j, d), j) = 1.0;
  const auto a0 = HermitianOperator::from_matrix(parity);
  for (int q = 0; q < d; ++q)
    for (int p = 0; p < d; ++p) elements.push_back(a0.conjugated(wh_displacement(d, q, p)) * (1.0 / d));
  return MeasureBasis::create(std::move(elements), "wootters-d" + std::to_string(d));
}

MeasureBasis composite_wootters(std::span<const int> primes) {
  if (primes.empty()) throw Error(ErrorKind::InvalidArgument, "composite_wootters: no factors");
  for (int p : primes) {
    if (!is_prime(p)) {
      throw Error(ErrorKind::InvalidArgument, "composite_wootters: factor " + std::to_string(p) + " is not prime");
    }
  }
  MeasureBasis out = wootters_wigner(primes[0]);
  std::string label = "wootters-" + std::to_string(primes[0]);
  for (std::size_t i = 1; i < primes.size(); ++i) {
    out = tensor_basis(out, wootters_wigner(primes[i]));
    label += "x" + std::to_string(primes[i]);
  }
  return out.relabeled(label);
}

MeasureBasis collinear(const MeasureBasis& basis, double t) {
  if (t == 0.0) throw Error(ErrorKind::InvalidArgument, "collinear: t must be nonzero");
  const int d = basis.dim();
  const auto identity = HermitianOperator::identity(d);
  std::vector<HermitianOperator> elements;
  elements.reserve(basis.size());
  for (const auto& e : basis.elements()) elements.push_back(t * e + ((1.0 - t) * e.trace() / d) * identity);
  std::ostringstream label;
  label << basis.label() << "^t=" << t;
  return MeasureBasis::create(std::move(elements), label.str());
}

TRange mic_t_range(const MeasureBasis& basis) {
  require_positive_weights(basis, "mic_t_range");
  const double d = basis.dim();
  TRange r{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& e : basis.elements()) {
    const RVector ev = eigenvalues(e) / e.trace();
    const double hi = 1.0 - d * ev[ev.size() - 1];
    const double lo = 1.0 - d * ev[0];
    // hi ≤ 0 ≤ lo since the mean eigenvalue of σ_i is 1/d; a zero means σ_i ∝ I
    // and imposes no constraint on that side.
    if (hi < 0.0) r.t_min = std::max(r.t_min, 1.0 / hi);
    if (lo > 0.0) r.t_max = std::min(r.t_max, 1.0 / lo);
  }
  return r;
}

MeasureBasis tensor_basis(const MeasureBasis& a, const MeasureBasis& b) {
  std::vector<HermitianOperator> elements;
  elements.reserve(a.size() * b.size());
  for (const auto& x : a.elements())
    for (const auto& y : b.elements()) elements.push_back(kron(x, y));
  return MeasureBasis::create(std::move(elements), a.label() + "(x)" + b.label());
}

MeasureBasis tensorhedron(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "tensorhedron: n must be at least 1");
  const MeasureBasis sic = builtin_sic(2);
  MeasureBasis out = sic;
  for (int i = 1; i < n; ++i) out = tensor_basis(out, sic);
  return out.relabeled("tensorhedron-" + std::to_string(n));
}

CMatrix random_unitary(int d, Rng& rng) {
  const CMatrix z = rng.complex_gaussian(d, d);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

RMatrix random_orthogonal_fixing_ones(int n, Rng& rng) {
  const RVector u = RVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  RMatrix seed = rng.real_gaussian(n, n);
  seed.col(0) = u;
  Eigen::HouseholderQR<RMatrix> frame_qr(seed);
  const RMatrix frame = frame_qr.householderQ() * RMatrix::Identity(n, n);
  const RMatrix complement = frame.rightCols(n - 1);

  const RMatrix z = rng.real_gaussian(n - 1, n - 1);
  Eigen::HouseholderQR<RMatrix> qr(z);
  RMatrix q = qr.householderQ() * RMatrix::Identity(n - 1, n - 1);
  const RMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n - 1; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;

  return u * u.transpose() + complement * q * complement.transpose();
}

HermitianOperator random_pure_state(int d, Rng& rng) {
  CVector v = rng.complex_gaussian(d, 1);
  v.normalize();
  return HermitianOperator::outer(v);
}

HermitianOperator random_mixed_state(int d, Rng& rng) {
  const CMatrix w = rng.complex_gaussian(d, d);
  CMatrix rho = w * w.adjoint();
  rho /= rho.trace();
  return HermitianOperator::from_matrix(rho);
}

HermitianOperator random_hermitian(int d, Rng& rng) {
  const CMatrix w = rng.complex_gaussian(d, d);
  return HermitianOperator::from_matrix((w + w.adjoint()) * 0.5);
}

MeasureBasis random_mic(int d, std::uint64_t seed) {
  require_random_dim(d, "random_mic");
  constexpr int kAttempts = 16;
  Rng root(seed, 0x6d6963);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng = root.split(static_cast<std::uint64_t>(attempt));
    std::vector<HermitianOperator> ops;
    ops.reserve(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d * d; ++i) {
      const CMatrix w = rng.complex_gaussian(d, d);
      ops.push_back(HermitianOperator::from_matrix(w * w.adjoint()));
    }
    auto elements = normalize_sum(ops);
    if (validate(elements).is_measure_basis) {
      return MeasureBasis::create(std::move(elements), "random-mic-d" + std::to_string(d));
    }
  }
  throw Error(ErrorKind::ConvergenceFailure, "random_mic: no linearly independent draw after retries");
}

MeasureBasis random_unbiased_mic(int d, std::uint64_t seed) {
  require_random_dim(d, "random_unbiased_mic");
  constexpr int kMaxIterations = 1000;
  constexpr double kTarget = 1e-10;
  auto elements = random_mic(d, seed).elements();
  double residual = 0.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    for (auto& a : elements) a *= 1.0 / (d * a.trace());
    elements = normalize_sum(elements);
    residual = 0.0;
    for (const auto& a : elements) residual = std::max(residual, std::abs(a.trace() - 1.0 / d));
    if (residual < kTarget) {
      return MeasureBasis::create(std::move(elements), "random-unbiased-mic-d" + std::to_string(d));
    }
  }
  std::ostringstream os;
  os << "random_unbiased_mic: bias residual " << residual << " after " << kMaxIterations << " iterations";
  throw Error(ErrorKind::ConvergenceFailure, os.str(), residual);
}

MeasureBasis random_unbiased_wigner(int d, std::uint64_t seed) {
  require_random_dim(d, "random_unbiased_wigner");
  const auto factors = prime_factors(d);
  const MeasureBasis start = composite_wootters(factors);
  Rng rng(seed, 0x77676e);
  const RMatrix o = random_orthogonal_fixing_ones(d * d, rng);
  return MeasureBasis::create(combine(o, start.elements()), "random-unbiased-wigner-d" + std::to_string(d));
}

}  // namespace qb
