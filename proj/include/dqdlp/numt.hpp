#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace dqdlp {

using Int = std::int64_t;
using UInt = std::uint64_t;

/// Raised for arithmetic preconditions that do not hold (non-invertible
/// residues, missing orders, broken solvability promises).
class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (lhs * rhs) mod modulus without 64-bit overflow.
UInt mul_mod(UInt lhs, UInt rhs, UInt modulus);

/// base^exponent mod modulus. Negative exponents go through the modular
/// inverse and throw ArithmeticError("not invertible") when none exists.
UInt mod_pow(UInt base, Int exponent, UInt modulus);

UInt mod_inverse(UInt value, UInt modulus);

/// Smallest r >= 1 with a^r = 1 (mod modulus), found by bounded iteration.
UInt multiplicative_order(UInt a, UInt modulus);

/// ceil(log2(value)) for value >= 1; ceil_log2(1) == 0.
int ceil_log2(UInt value);

/// Canonical representative of value mod modulus in [0, modulus).
inline UInt wrap(Int value, UInt modulus) {
  const Int m = static_cast<Int>(modulus);
  const Int rem = value % m;
  return static_cast<UInt>(rem < 0 ? rem + m : rem);
}

/// A discrete-logarithm instance: find t with generator^t = target (mod modulus).
///
/// `register_bits` is the width m of the argument and residue registers; it
/// must satisfy 2^m >= modulus and m >= ceil(log2 order) + ceil(log2(1/epsilon)).
struct ProblemInstance {
  UInt generator = 0;
  UInt target = 0;
  UInt modulus = 0;
  UInt order = 0;
  int register_bits = 0;
  double epsilon = 0.5;

  /// Builds and validates an instance. The order is computed when absent and
  /// verified against the true multiplicative order when given. The register
  /// width defaults to ceil(log2 r) + ceil(log2(1/epsilon)), raised until it
  /// can hold every residue.
  static ProblemInstance make(UInt generator, UInt target, UInt modulus,
                              std::optional<UInt> order = std::nullopt,
                              std::optional<int> register_bits = std::nullopt,
                              double epsilon = 0.5);

  /// Throws ArithmeticError / std::invalid_argument if any invariant fails.
  void validate() const;

  UInt register_size() const { return UInt{1} << register_bits; }

  bool operator==(const ProblemInstance&) const = default;
};

/// Minimum register width for a given order, modulus and precision.
int default_register_bits(UInt order, UInt modulus, double epsilon);

struct DlpSolution {
  UInt t = 0;
  bool operator==(const DlpSolution&) const = default;
};

/// Scans t = 0..r-1. Throws ArithmeticError("unsolvable instance") when the
/// target is not a power of the generator.
DlpSolution brute_force_dlp(const ProblemInstance& instance);

/// a^{-s x} b^{x} mod N; identically 1 in x exactly when s = t (mod r).
UInt f_hat(Int s, Int x, const ProblemInstance& instance);

/// True when generator^t == target.
bool verifies(const ProblemInstance& instance, UInt t);

}  // namespace dqdlp
