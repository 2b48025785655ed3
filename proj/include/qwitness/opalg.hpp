#pragma once

// Dense complex operator algebra: the carrier type for every operator in the
// library, Kronecker products, (anti)commutators and a cyclic Jacobi
// eigensolver for Hermitian matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qwitness/error.hpp"

namespace qwitness {

using cplx = std::complex<double>;

namespace detail {
// Plain complex product; std::complex operator* carries Annex G inf/nan
// recovery that dominates the cost of the inner loops below.
inline cplx cmul(cplx a, cplx b) noexcept {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
}  // namespace detail

/// Dense square complex matrix, row-major. Immutable once constructed.
class ComplexMatrix {
 public:
  ComplexMatrix() : dim_(1), data_(1, cplx{0.0, 0.0}) {}

  /// Zero matrix of the given dimension.
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, cplx{0.0, 0.0}) {
    if (dim == 0) throw DimensionError("matrix dimension must be positive");
  }

  ComplexMatrix(std::size_t dim, std::vector<cplx> entries) : dim_(dim), data_(std::move(entries)) {
    if (dim == 0) throw DimensionError("matrix dimension must be positive");
    if (data_.size() != dim * dim)
      throw DimensionError("expected " + std::to_string(dim * dim) + " entries, got " +
                           std::to_string(data_.size()));
    for (const auto& z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("matrix entries must be finite");
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
      : ComplexMatrix(rows.size(), flatten(rows)) {}

  static ComplexMatrix identity(std::size_t dim) {
    std::vector<cplx> d(dim * dim, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < dim; ++i) d[i * dim + i] = 1.0;
    return ComplexMatrix(dim, std::move(d));
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<cplx> d(n * n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = values[i];
    return ComplexMatrix(n, std::move(d));
  }

  std::size_t dim() const noexcept { return dim_; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }
  std::span<const cplx> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const {
    std::vector<cplx> d(data_.size());
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) d[j * dim_ + i] = std::conj(data_[i * dim_ + j]);
    return ComplexMatrix(dim_, std::move(d));
  }

  cplx trace() const noexcept {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
    return t;
  }

  double frobenius_norm() const noexcept {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "operator+");
    std::vector<cplx> d(a.data_.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = a.data_[k] + b.data_[k];
    return ComplexMatrix(a.dim_, std::move(d));
  }

  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "operator-");
    std::vector<cplx> d(a.data_.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = a.data_[k] - b.data_[k];
    return ComplexMatrix(a.dim_, std::move(d));
  }

  friend ComplexMatrix operator-(const ComplexMatrix& a) { return cplx{-1.0, 0.0} * a; }

  friend ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
    std::vector<cplx> d(a.data_.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = s * a.data_[k];
    return ComplexMatrix(a.dim_, std::move(d));
  }
  friend ComplexMatrix operator*(double s, const ComplexMatrix& a) { return cplx{s, 0.0} * a; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "operator*");
    const std::size_t n = a.dim_;
    std::vector<cplx> d(n * n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a.data_[i * n + k];
        if (aik == cplx{0.0, 0.0}) continue;
        const cplx* brow = &b.data_[k * n];
        cplx* drow = &d[i * n];
        for (std::size_t j = 0; j < n; ++j) drow[j] += detail::cmul(aik, brow[j]);
      }
    return ComplexMatrix(n, std::move(d));
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

  static void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.dim_ != b.dim_)
      throw DimensionError(std::string(op) + ": dimension mismatch " + std::to_string(a.dim_) +
                           " vs " + std::to_string(b.dim_));
  }

 private:
  static std::vector<cplx> flatten(std::initializer_list<std::initializer_list<cplx>> rows) {
    std::vector<cplx> d;
    d.reserve(rows.size() * rows.size());
    for (const auto& r : rows) {
      if (r.size() != rows.size()) throw DimensionError("matrix literal must be square");
      d.insert(d.end(), r.begin(), r.end());
    }
    return d;
  }

  std::size_t dim_;
  std::vector<cplx> data_;
};

/// Compensated (Neumaier) entrywise summation of weighted matrices, so that
/// long operator sums do not depend on summation order beyond the last ulp.
class MatrixAccumulator {
 public:
  explicit MatrixAccumulator(std::size_t dim)
      : dim_(dim), sum_(2 * dim * dim, 0.0), comp_(2 * dim * dim, 0.0) {}

  void add(const ComplexMatrix& m, double weight = 1.0) {
    if (m.dim() != dim_) throw DimensionError("MatrixAccumulator: dimension mismatch");
    const auto e = m.entries();
    for (std::size_t k = 0; k < e.size(); ++k) {
      add_scalar(2 * k, weight * e[k].real());
      add_scalar(2 * k + 1, weight * e[k].imag());
    }
  }

  ComplexMatrix result() const {
    std::vector<cplx> d(dim_ * dim_);
    for (std::size_t k = 0; k < d.size(); ++k)
      d[k] = cplx{sum_[2 * k] + comp_[2 * k], sum_[2 * k + 1] + comp_[2 * k + 1]};
    return ComplexMatrix(dim_, std::move(d));
  }

 private:
  void add_scalar(std::size_t k, double x) {
    const double t = sum_[k] + x;
    if (std::abs(sum_[k]) >= std::abs(x))
      comp_[k] += (sum_[k] - t) + x;
    else
      comp_[k] += (x - t) + sum_[k];
    sum_[k] = t;
  }

  std::size_t dim_;
  std::vector<double> sum_;
  std::vector<double> comp_;
};

/// Entry ((i*db + k), (j*db + l)) = a(i,j) * b(k,l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim(), db = b.dim(), n = da * db;
  std::vector<cplx> d(n * n);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const cplx aij = a(i, j);
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) d[(i * db + k) * n + (j * db + l)] = aij * b(k, l);
    }
  return ComplexMatrix(n, std::move(d));
}

inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix::require_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix::require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

inline double frob_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix::require_same_dim(a, b, "frob_distance");
  double s = 0.0;
  const auto ea = a.entries(), eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) s += std::norm(ea[k] - eb[k]);
  return std::sqrt(s);
}

/// ||h - h^dagger||_F
inline double hermiticity_defect(const ComplexMatrix& h) {
  const std::size_t n = h.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += std::norm(h(i, j) - std::conj(h(j, i)));
  return std::sqrt(s);
}

inline constexpr double kHermitianTolerance = 1e-10;  // scaled by dim
inline constexpr std::size_t kMaxEigenDim = 256;

struct EigenOptions {
  bool compute_vectors = true;
  int max_sweeps = 100;
  // Off-diagonal convergence threshold is tol_scale * dim * max(1, ||h||_F).
  double tol_scale = 1e-13;
};

struct EigenResult {
  std::vector<double> values;  // ascending
  double residual = 0.0;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot a(p,q) with a diagonal
/// unitary and then applies the classical real Jacobi rotation, so the pivot
/// is annihilated exactly. When eigenvectors are accumulated the reported
/// residual is max_i ||h v_i - lambda_i v_i||_2, otherwise the off-diagonal
/// Frobenius norm at termination.
inline EigenResult hermitian_eigenvalues(const ComplexMatrix& h, const EigenOptions& opt = {}) {
  const std::size_t n = h.dim();
  if (n > kMaxEigenDim)
    throw DomainError("hermitian_eigenvalues: dimension " + std::to_string(n) + " exceeds " +
                      std::to_string(kMaxEigenDim));
  const double defect = hermiticity_defect(h);
  if (defect > kHermitianTolerance * static_cast<double>(n))
    throw DomainError("hermitian_eigenvalues: matrix is not Hermitian (defect " +
                      std::to_string(defect) + ")");

  std::vector<cplx> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = 0.5 * (h(i, j) + std::conj(h(j, i)));
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = a[i * n + i].real();

  std::vector<cplx> v;
  if (opt.compute_vectors) {
    v.assign(n * n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  }

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a[i * n + j]);
    return std::sqrt(2.0 * s);
  };

  const double threshold =
      opt.tol_scale * static_cast<double>(n) * std::max(1.0, h.frobenius_norm());
  double off = off_norm();
  int sweep = 0;
  for (; off > threshold; ++sweep) {
    if (sweep >= opt.max_sweeps)
      throw ConvergenceError("hermitian_eigenvalues: no convergence after " +
                                 std::to_string(opt.max_sweeps) + " sweeps",
                             off);
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a[p * n + q];
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const cplx phase = apq / r;
        const cplx phase_c = std::conj(phase);
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // A <- A J with J(p,p)=c, J(p,q)=s, J(q,p)=-s e^{-i phi}, J(q,q)=c e^{-i phi}
        const cplx s_phase_c = s * phase_c, c_phase_c = c * phase_c;
        const cplx s_phase = s * phase, c_phase = c * phase;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - detail::cmul(s_phase_c, akq);
          a[k * n + q] = s * akp + detail::cmul(c_phase_c, akq);
        }
        // A <- J^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - detail::cmul(s_phase, aqk);
          a[q * n + k] = s * apk + detail::cmul(c_phase, aqk);
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        a[p * n + p] = a[p * n + p].real();
        a[q * n + q] = a[q * n + q].real();
        if (opt.compute_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const cplx vkp = v[k * n + p], vkq = v[k * n + q];
            v[k * n + p] = c * vkp - detail::cmul(s_phase_c, vkq);
            v[k * n + q] = s * vkp + detail::cmul(c_phase_c, vkq);
          }
        }
      }
    off = off_norm();
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x].real() < a[y * n + y].real();
  });

  EigenResult out;
  out.values.reserve(n);
  for (std::size_t i : order) out.values.push_back(a[i * n + i].real());

  if (!opt.compute_vectors) {
    out.residual = off;
    return out;
  }
  double worst = 0.0;
  for (std::size_t col = 0; col < n; ++col) {
    const double lambda = a[col * n + col].real();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx hv{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k) hv += h(i, k) * v[k * n + col];
      s += std::norm(hv - lambda * v[i * n + col]);
    }
    worst = std::max(worst, std::sqrt(s));
  }
  out.residual = worst;
  return out;
}

inline double min_eigenvalue(const ComplexMatrix& h) {
  return hermitian_eigenvalues(h, {.compute_vectors = false}).values.front();
}

inline double max_eigenvalue(const ComplexMatrix& h) {
  return hermitian_eigenvalues(h, {.compute_vectors = false}).values.back();
}

/// True iff the smallest eigenvalue of h is >= -tol.
inline bool is_psd(const ComplexMatrix& h, double tol) { return min_eigenvalue(h) >= -tol; }

}  // namespace qwitness
