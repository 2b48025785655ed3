#pragma once

// Qubit observables, multi-party tensor assembly, parity projectors and the
// standard states used to probe the witnesses.
//
// Conventions: |0> is the +1 eigenvector of sigma_z and party 0 is the
// leftmost tensor factor.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qwitness/error.hpp"
#include "qwitness/opalg.hpp"

namespace qwitness {

inline const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
  return m;
}
inline const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m{{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}};
  return m;
}
inline const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
  return m;
}

inline constexpr double kUnitNormTolerance = 1e-12;

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  bool is_unit() const { return std::abs(x * x + y * y + z * z - 1.0) <= kUnitNormTolerance; }

  /// Polar angle theta from +z, azimuth phi from +x.
  static BlochVector from_angles(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }

  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

inline void require_unit(const BlochVector& n, const char* where) {
  if (!n.is_unit())
    throw DomainError(std::string(where) + ": Bloch vector is not unit norm (|n| = " +
                      std::to_string(n.norm()) + ")");
}

/// Hermitian involution (spectrum in {-1, +1}).
class DichotomicObservable {
 public:
  explicit DichotomicObservable(ComplexMatrix m) : m_(std::move(m)) {
    const double n = static_cast<double>(m_.dim());
    const double herm = hermiticity_defect(m_);
    if (herm > 1e-12 * n)
      throw DomainError("dichotomic observable must be Hermitian (defect " + std::to_string(herm) +
                        ")");
    const double inv = frob_distance(m_ * m_, ComplexMatrix::identity(m_.dim()));
    if (inv > 1e-11 * n)
      throw DomainError("dichotomic observable must square to identity (defect " +
                        std::to_string(inv) + ")");
  }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }

 private:
  ComplexMatrix m_;
};

/// Two measurement settings (Bloch vectors) per party.
class SettingsTable {
 public:
  using PartySettings = std::array<BlochVector, 2>;

  explicit SettingsTable(std::vector<PartySettings> parties) : parties_(std::move(parties)) {
    if (parties_.size() < 2) throw DomainError("settings table needs at least two parties");
    for (const auto& p : parties_)
      for (const auto& n : p) require_unit(n, "SettingsTable");
  }

  std::size_t n_parties() const noexcept { return parties_.size(); }
  const std::vector<PartySettings>& parties() const noexcept { return parties_; }
  const BlochVector& setting(std::size_t party, int bit) const { return parties_.at(party).at(bit); }

  friend bool operator==(const SettingsTable&, const SettingsTable&) = default;

 private:
  std::vector<PartySettings> parties_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    const double n = static_cast<double>(m_.dim());
    if (hermiticity_defect(m_) > kHermitianTolerance * n)
      throw DomainError("density matrix must be Hermitian");
    const cplx tr = m_.trace();
    if (std::abs(tr - cplx{1.0, 0.0}) > 1e-12)
      throw DomainError("density matrix must have unit trace (got " + std::to_string(tr.real()) +
                        ")");
    const double lo = min_eigenvalue(m_);
    if (lo < -1e-10)
      throw DomainError("density matrix must be positive semidefinite (min eigenvalue " +
                        std::to_string(lo) + ")");
  }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }

 private:
  ComplexMatrix m_;
};

/// A bipartition {0..N-1} = groupA + groupB, both nonempty, indices sorted.
class Grouping {
 public:
  Grouping(std::vector<std::size_t> group_a, std::size_t n_parties) : a_(std::move(group_a)) {
    std::vector<bool> in_a(n_parties, false);
    for (auto p : a_) {
      if (p >= n_parties) throw DomainError("grouping: party index out of range");
      if (in_a[p]) throw DomainError("grouping: duplicate party index");
      in_a[p] = true;
    }
    std::sort(a_.begin(), a_.end());
    for (std::size_t p = 0; p < n_parties; ++p)
      if (!in_a[p]) b_.push_back(p);
    if (a_.empty() || b_.empty()) throw DomainError("grouping: both groups must be nonempty");
  }

  const std::vector<std::size_t>& group_a() const noexcept { return a_; }
  const std::vector<std::size_t>& group_b() const noexcept { return b_; }
  std::size_t n_parties() const noexcept { return a_.size() + b_.size(); }

  friend bool operator==(const Grouping&, const Grouping&) = default;

 private:
  std::vector<std::size_t> a_;
  std::vector<std::size_t> b_;
};

/// n_x sigma_x + n_y sigma_y + n_z sigma_z
inline DichotomicObservable bloch_observable(const BlochVector& n) {
  require_unit(n, "bloch_observable");
  return DichotomicObservable(ComplexMatrix{{n.z, cplx{n.x, -n.y}}, {cplx{n.x, n.y}, -n.z}});
}

/// Tensor product of single-qubit factors, factor 0 leftmost.
inline ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) throw DimensionError("tensor_product: no factors");
  const std::size_t n = factors.size();
  for (const auto& f : factors)
    if (f.dim() != 2) throw DimensionError("tensor_product: factors must be 2x2");
  const std::size_t dim = std::size_t{1} << n;
  std::vector<cplx> d(dim * dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      cplx v{1.0, 0.0};
      for (std::size_t p = 0; p < n && v != cplx{0.0, 0.0}; ++p) {
        const std::size_t shift = n - 1 - p;
        v *= factors[p]((r >> shift) & 1U, (c >> shift) & 1U);
      }
      d[r * dim + c] = v;
    }
  return ComplexMatrix(dim, std::move(d));
}

/// I x ... x o x ... x I with o in slot `party`.
inline DichotomicObservable embed(const DichotomicObservable& o, std::size_t party,
                                  std::size_t n_parties) {
  if (o.dim() != 2) throw DimensionError("embed: observable must be a single-qubit operator");
  if (party >= n_parties)
    throw DomainError("embed: party " + std::to_string(party) + " out of range for " +
                      std::to_string(n_parties) + " parties");
  std::vector<ComplexMatrix> f(n_parties, ComplexMatrix::identity(2));
  f[party] = o.matrix();
  return DichotomicObservable(tensor_product(f));
}

/// Product over `group` of the chosen setting observables, identity elsewhere.
/// `choices` maps each group member to its setting bit and must not mention
/// any other party.
inline DichotomicObservable group_observable(const SettingsTable& settings,
                                             std::span<const std::size_t> group,
                                             const std::map<std::size_t, int>& choices) {
  const std::size_t n = settings.n_parties();
  std::vector<bool> member(n, false);
  for (auto p : group) {
    if (p >= n) throw DomainError("group_observable: party index out of range");
    member[p] = true;
  }
  for (const auto& [p, bit] : choices) {
    if (p >= n || !member[p])
      throw DomainError("group_observable: choice given for non-member party " + std::to_string(p));
    if (bit != 0 && bit != 1) throw DomainError("group_observable: setting bit must be 0 or 1");
  }
  std::vector<ComplexMatrix> f(n, ComplexMatrix::identity(2));
  for (auto p : group) {
    auto it = choices.find(p);
    if (it == choices.end())
      throw DomainError("group_observable: missing choice for party " + std::to_string(p));
    f[p] = bloch_observable(settings.setting(p, it->second)).matrix();
  }
  return DichotomicObservable(tensor_product(f));
}

/// (I + (-1)^s g) / 2, the projector onto outcome parity s of g.
inline ComplexMatrix parity_projector(const DichotomicObservable& g, int s) {
  if (s != 0 && s != 1) throw DomainError("parity_projector: bit must be 0 or 1");
  const double sign = s == 0 ? 1.0 : -1.0;
  return 0.5 * (ComplexMatrix::identity(g.dim()) + sign * g.matrix());
}

/// P(parity 0) - P(parity 1): the correlation operator of a product observable.
inline ComplexMatrix correlation_operator(const DichotomicObservable& g) {
  return parity_projector(g, 0) - parity_projector(g, 1);
}

inline DensityMatrix ghz_state(std::size_t n) {
  if (n < 2) throw DomainError("ghz_state: need at least two qubits");
  if (n > 10) throw DomainError("ghz_state: at most ten qubits supported");
  const std::size_t dim = std::size_t{1} << n;
  std::vector<cplx> d(dim * dim, cplx{0.0, 0.0});
  const std::size_t last = dim - 1;
  d[0] = d[last] = d[last * dim] = d[last * dim + last] = 0.5;
  return DensityMatrix(ComplexMatrix(dim, std::move(d)));
}

inline DensityMatrix maximally_mixed(std::size_t n) {
  if (n < 1) throw DomainError("maximally_mixed: need at least one qubit");
  if (n > 10) throw DomainError("maximally_mixed: at most ten qubits supported");
  const std::size_t dim = std::size_t{1} << n;
  return DensityMatrix((1.0 / static_cast<double>(dim)) * ComplexMatrix::identity(dim));
}

inline DensityMatrix product_state(std::span<const BlochVector> blochs) {
  if (blochs.empty()) throw DomainError("product_state: no qubits");
  std::vector<ComplexMatrix> f;
  f.reserve(blochs.size());
  for (const auto& n : blochs) {
    require_unit(n, "product_state");
    f.push_back(0.5 * (ComplexMatrix::identity(2) + bloch_observable(n).matrix()));
  }
  return DensityMatrix(tensor_product(f));
}

/// v rho + (1 - v) I / dim
inline DensityMatrix noisy_mixture(const DensityMatrix& rho, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("noisy_mixture: visibility must lie in [0, 1]");
  const std::size_t dim = rho.dim();
  return DensityMatrix(v * rho.matrix() +
                       ((1.0 - v) / static_cast<double>(dim)) * ComplexMatrix::identity(dim));
}

/// Re tr(op rho); the imaginary part must vanish for Hermitian op.
inline double expectation(const ComplexMatrix& op, const DensityMatrix& rho) {
  ComplexMatrix::require_same_dim(op, rho.matrix(), "expectation");
  const std::size_t n = op.dim();
  const auto& r = rho.matrix();
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t += op(i, j) * r(j, i);
  if (std::abs(t.imag()) > 1e-10)
    throw DomainError("expectation: trace has imaginary part " + std::to_string(t.imag()) +
                      " (operator not Hermitian?)");
  return t.real();
}

}  // namespace qwitness
