#pragma once

// Dense state-vector engine over the fixed four-register layout
//
//   |s>_n |x>_m |z>_m |anc>_1,   idx = ((s * 2^m + x) * 2^m + z) * 2 + anc
//
// Register 1 (s) is the most significant field; the ancilla is bit 0.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqdlp/numt.hpp"
#include "dqdlp/random.hpp"

namespace dqdlp {

enum class Register : int { Set = 1, Argument = 2, Residue = 3, Ancilla = 4 };

inline Register register_from_int(int value) {
  if (value < 1 || value > 4) throw std::invalid_argument("register must be 1..4");
  return static_cast<Register>(value);
}

struct BasisState {
  UInt s = 0;
  UInt x = 0;
  UInt z = 0;
  unsigned anc = 0;

  bool operator==(const BasisState&) const = default;
};

struct RegisterLayout {
  int set_bits = 0;
  int value_bits = 1;

  int total_qubits() const { return set_bits + 2 * value_bits + 1; }
  UInt dimension() const { return UInt{1} << total_qubits(); }

  /// Bit offset of the register's least significant qubit inside a basis index.
  int offset(Register reg) const {
    switch (reg) {
      case Register::Ancilla: return 0;
      case Register::Residue: return 1;
      case Register::Argument: return 1 + value_bits;
      case Register::Set: return 1 + 2 * value_bits;
    }
    return 0;
  }

  int width(Register reg) const {
    switch (reg) {
      case Register::Ancilla: return 1;
      case Register::Residue:
      case Register::Argument: return value_bits;
      case Register::Set: return set_bits;
    }
    return 0;
  }

  UInt value(UInt index, Register reg) const {
    return (index >> offset(reg)) & ((UInt{1} << width(reg)) - 1);
  }

  UInt index(const BasisState& b) const {
    const UInt m = UInt{1} << value_bits;
    return ((b.s * m + b.x) * m + b.z) * 2 + b.anc;
  }

  BasisState decode(UInt index) const {
    return {value(index, Register::Set), value(index, Register::Argument),
            value(index, Register::Residue), static_cast<unsigned>(index & 1U)};
  }

  bool contains(const BasisState& b) const {
    const UInt m = UInt{1} << value_bits;
    return b.s < (UInt{1} << set_bits) && b.x < m && b.z < m && b.anc < 2;
  }

  /// Desk-scale guard: 2^28 complex doubles is 4 GiB.
  void validate() const {
    if (set_bits < 0 || value_bits < 1) throw std::invalid_argument("invalid register widths");
    if (total_qubits() > 28) throw std::invalid_argument("layout exceeds 28 qubits");
  }

  bool operator==(const RegisterLayout&) const = default;
};

template <typename Real>
class BasicStateVector {
 public:
  using RealScalar = Real;
  using Scalar = std::complex<Real>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit BasicStateVector(const RegisterLayout& layout) : layout_(layout) {
    layout_.validate();
    amps_ = Vector::Zero(static_cast<Eigen::Index>(layout_.dimension()));
  }

  const RegisterLayout& layout() const { return layout_; }
  Vector& amplitudes() { return amps_; }
  const Vector& amplitudes() const { return amps_; }

  Scalar amplitude(const BasisState& b) const {
    return amps_(static_cast<Eigen::Index>(layout_.index(b)));
  }
  Scalar& amplitude(const BasisState& b) {
    return amps_(static_cast<Eigen::Index>(layout_.index(b)));
  }

  Real norm() const { return amps_.norm(); }

 private:
  RegisterLayout layout_;
  Vector amps_;
};

using StateVector = BasicStateVector<double>;

struct MeasurementRecord {
  Register reg = Register::Ancilla;
  UInt outcome = 0;
  double probability = 0.0;
};

/// Outcomes below this probability are never sampled.
inline constexpr double kImpossibleOutcome = 1e-15;

/// |0>^n |0>^m |1> |0>
template <typename Real = double>
BasicStateVector<Real> init_phi0(const RegisterLayout& layout) {
  BasicStateVector<Real> state(layout);
  state.amplitude(BasisState{0, 0, 1, 0}) = 1;
  return state;
}

/// H on every qubit of register 1 or 2 (in-place fast Walsh-Hadamard).
template <typename Real>
void hadamard_all(BasicStateVector<Real>& state, Register reg) {
  if (reg != Register::Set && reg != Register::Argument) {
    throw std::invalid_argument("hadamard_all applies to register 1 or 2");
  }
  const auto& layout = state.layout();
  auto& v = state.amplitudes();
  const Eigen::Index dim = v.size();
  const Real inv_sqrt2 = Real(1) / std::sqrt(Real(2));
  const int first = layout.offset(reg);
  for (int q = first; q < first + layout.width(reg); ++q) {
    const Eigen::Index half = Eigen::Index{1} << q;
    for (Eigen::Index base = 0; base < dim; base += 2 * half) {
      for (Eigen::Index j = base; j < base + half; ++j) {
        const auto lo = v(j);
        const auto hi = v(j + half);
        v(j) = (lo + hi) * inv_sqrt2;
        v(j + half) = (lo - hi) * inv_sqrt2;
      }
    }
  }
}

/// Dense K x K matrix with entries exp(2 pi i j k / K) / sqrt(K); conjugated
/// when inverse. Phases are reduced mod K before scaling.
template <typename Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> dft_matrix(UInt size, bool inverse) {
  using Mat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  const auto k = static_cast<Eigen::Index>(size);
  Mat f(k, k);
  const Real scale = Real(1) / std::sqrt(static_cast<Real>(size));
  const Real sign = inverse ? Real(-1) : Real(1);
  for (Eigen::Index row = 0; row < k; ++row) {
    for (Eigen::Index col = 0; col < k; ++col) {
      const auto phase_num = static_cast<UInt>(row) * static_cast<UInt>(col) % size;
      const Real angle = sign * 2 * std::numbers::pi_v<Real> * static_cast<Real>(phase_num) /
                         static_cast<Real>(size);
      f(row, col) = std::polar(scale, angle);
    }
  }
  return f;
}

/// Exact (inverse) QFT over register 1 or 2: every slice with the other
/// registers fixed is replaced by its discrete Fourier transform.
template <typename Real>
void qft(BasicStateVector<Real>& state, Register reg, bool inverse) {
  if (reg != Register::Set && reg != Register::Argument) {
    throw std::invalid_argument("qft applies to register 1 or 2");
  }
  using Mat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  const auto& layout = state.layout();
  const Eigen::Index size = Eigen::Index{1} << layout.width(reg);
  const Eigen::Index inner = Eigen::Index{1} << layout.offset(reg);
  const Eigen::Index block = inner * size;
  const Mat f = dft_matrix<Real>(static_cast<UInt>(size), inverse);
  auto& v = state.amplitudes();
  // Column-major block: row = lower bits, column = register value.
  // F is symmetric, so B * F applies the transform along each row.
  for (Eigen::Index start = 0; start < v.size(); start += block) {
    Eigen::Map<Mat> slice(v.data() + start, inner, size);
    if (slice.cwiseAbs2().sum() == Real(0)) continue;
    slice = slice * f;
  }
}

template <typename Real>
void qft_register2(BasicStateVector<Real>& state, bool inverse) {
  qft(state, Register::Argument, inverse);
}

/// amps'[map(b)] = amps[b] over the full basis. Throws "not a permutation"
/// when two basis states land on the same image or an image leaves the layout.
template <typename Real, typename Map>
void apply_basis_map(BasicStateVector<Real>& state, Map&& map) {
  const auto& layout = state.layout();
  const UInt dim = layout.dimension();
  typename BasicStateVector<Real>::Vector out =
      BasicStateVector<Real>::Vector::Zero(static_cast<Eigen::Index>(dim));
  std::vector<bool> hit(dim, false);
  const auto& in = state.amplitudes();
  for (UInt i = 0; i < dim; ++i) {
    const BasisState image = map(layout.decode(i));
    if (!layout.contains(image)) throw std::invalid_argument("not a permutation");
    const UInt j = layout.index(image);
    if (hit[j]) throw std::invalid_argument("not a permutation");
    hit[j] = true;
    out(static_cast<Eigen::Index>(j)) = in(static_cast<Eigen::Index>(i));
  }
  state.amplitudes() = std::move(out);
}

/// Sum of |amp|^2 over basis states satisfying the predicate.
template <typename Real, typename Predicate>
Real marginal_probability(const BasicStateVector<Real>& state, Predicate&& predicate) {
  const auto& layout = state.layout();
  const auto& v = state.amplitudes();
  Real total = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::norm(v(i)) == Real(0)) continue;
    if (predicate(layout.decode(static_cast<UInt>(i)))) total += std::norm(v(i));
  }
  return total;
}

/// Marginal distribution of one register's value.
template <typename Real>
std::vector<Real> register_distribution(const BasicStateVector<Real>& state, Register reg) {
  const auto& layout = state.layout();
  std::vector<Real> dist(UInt{1} << layout.width(reg), Real(0));
  const auto& v = state.amplitudes();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    dist[layout.value(static_cast<UInt>(i), reg)] += std::norm(v(i));
  }
  return dist;
}

/// Samples one register, collapses the state in place and renormalizes.
template <typename Real>
MeasurementRecord measure(BasicStateVector<Real>& state, Register reg, Rng& rng) {
  const auto dist = register_distribution(state, reg);
  Real total = 0;
  for (Real p : dist) total += p;
  if (!(total > kImpossibleOutcome)) throw std::domain_error("invalid state");

  const Real u = static_cast<Real>(rng.uniform()) * total;
  UInt outcome = dist.size();
  Real cumulative = 0;
  for (UInt k = 0; k < dist.size(); ++k) {
    if (dist[k] < kImpossibleOutcome) continue;
    outcome = k;
    cumulative += dist[k];
    if (u < cumulative) break;
  }
  const Real probability = dist[outcome] / total;

  const auto& layout = state.layout();
  auto& v = state.amplitudes();
  const Real scale = Real(1) / std::sqrt(dist[outcome]);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (layout.value(static_cast<UInt>(i), reg) == outcome) {
      v(i) *= scale;
    } else {
      v(i) = 0;
    }
  }
  return {reg, outcome, static_cast<double>(probability)};
}

/// Debug dump: one "s,x,z,anc,re,im" row per amplitude above the threshold.
template <typename Real>
void write_csv(const BasicStateVector<Real>& state, std::ostream& out, Real threshold = Real(1e-12)) {
  const auto& layout = state.layout();
  const auto& v = state.amplitudes();
  out << "s,x,z,anc,re,im\n";
  const auto old_precision = out.precision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) <= threshold) continue;
    const auto b = layout.decode(static_cast<UInt>(i));
    out << b.s << ',' << b.x << ',' << b.z << ',' << b.anc << ',' << v(i).real() << ','
        << v(i).imag() << '\n';
  }
  out.precision(old_precision);
}

}  // namespace dqdlp
