#include "dqdlp/numt.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace dqdlp {

UInt mul_mod(UInt lhs, UInt rhs, UInt modulus) {
  using Wide = unsigned __int128;
  return static_cast<UInt>((static_cast<Wide>(lhs) * rhs) % modulus);
}

UInt mod_inverse(UInt value, UInt modulus) {
  if (modulus == 1) return 0;
  // Extended Euclid on signed 128-bit to keep the Bezout coefficients exact.
  using Wide = __int128;
  Wide old_r = static_cast<Wide>(value % modulus), r = static_cast<Wide>(modulus);
  Wide old_s = 1, s = 0;
  while (r != 0) {
    const Wide q = old_r / r;
    Wide tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw ArithmeticError("not invertible");
  Wide inv = old_s % static_cast<Wide>(modulus);
  if (inv < 0) inv += modulus;
  return static_cast<UInt>(inv);
}

UInt mod_pow(UInt base, Int exponent, UInt modulus) {
  if (modulus == 0) throw std::invalid_argument("modulus must be >= 1");
  if (modulus == 1) return 0;
  base %= modulus;
  // Unsigned negation keeps INT64_MIN well defined.
  UInt e = exponent < 0 ? UInt{0} - static_cast<UInt>(exponent) : static_cast<UInt>(exponent);
  if (exponent < 0) base = mod_inverse(base, modulus);
  UInt result = 1;
  while (e != 0) {
    if (e & 1U) result = mul_mod(result, base, modulus);
    base = mul_mod(base, base, modulus);
    e >>= 1U;
  }
  return result;
}

UInt multiplicative_order(UInt a, UInt modulus) {
  if (modulus < 2) throw std::invalid_argument("modulus must be >= 2");
  if (std::gcd(a % modulus, modulus) != 1) throw ArithmeticError("no order");
  const UInt base = a % modulus;
  UInt value = base;
  for (UInt r = 1; r < modulus; ++r) {
    if (value == 1) return r;
    value = mul_mod(value, base, modulus);
  }
  throw ArithmeticError("no order");
}

int ceil_log2(UInt value) {
  if (value == 0) throw std::invalid_argument("ceil_log2 of zero");
  int bits = 0;
  while ((UInt{1} << bits) < value) ++bits;
  return bits;
}

int default_register_bits(UInt order, UInt modulus, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  // Small slack so that epsilon = 0.5 gives exactly one extra bit.
  const int precision_bits = static_cast<int>(std::ceil(std::log2(1.0 / epsilon) - 1e-12));
  int bits = ceil_log2(order) + precision_bits;
  while ((UInt{1} << bits) < modulus) ++bits;
  return bits;
}

ProblemInstance ProblemInstance::make(UInt generator, UInt target, UInt modulus,
                                      std::optional<UInt> order,
                                      std::optional<int> register_bits, double epsilon) {
  if (modulus < 2) throw std::invalid_argument("modulus must be >= 2");
  ProblemInstance inst;
  inst.generator = generator % modulus;
  inst.target = target % modulus;
  inst.modulus = modulus;
  inst.epsilon = epsilon;
  const UInt true_order = multiplicative_order(inst.generator, modulus);
  if (order && *order != true_order) {
    if (*order == 0 || mod_pow(inst.generator, static_cast<Int>(*order), modulus) != 1) {
      throw ArithmeticError("supplied order does not satisfy a^r = 1 (mod N)");
    }
    throw ArithmeticError("supplied order is not minimal; the multiplicative order is " +
                          std::to_string(true_order));
  }
  inst.order = true_order;
  inst.register_bits = register_bits ? *register_bits
                                     : default_register_bits(true_order, modulus, epsilon);
  inst.validate();
  return inst;
}

void ProblemInstance::validate() const {
  if (modulus < 2) throw std::invalid_argument("modulus must be >= 2");
  if (std::gcd(generator, modulus) != 1) throw ArithmeticError("no order");
  if (order == 0 || mod_pow(generator, static_cast<Int>(order), modulus) != 1) {
    throw ArithmeticError("a^r != 1 (mod N)");
  }
  if (register_bits < 1 || register_bits > 30) {
    throw std::invalid_argument("register width out of range");
  }
  if (register_size() < modulus) {
    throw std::invalid_argument("register width too small to hold residues mod N");
  }
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
  const int precision_bits = static_cast<int>(std::ceil(std::log2(1.0 / epsilon) - 1e-12));
  if (register_bits < ceil_log2(order) + precision_bits) {
    throw std::invalid_argument("register width below ceil(log2 r) + ceil(log2 1/eps)");
  }
  // Solvability promise.
  (void)brute_force_dlp(*this);
}

DlpSolution brute_force_dlp(const ProblemInstance& instance) {
  UInt value = 1 % instance.modulus;
  for (UInt t = 0; t < instance.order; ++t) {
    if (value == instance.target) return {t};
    value = mul_mod(value, instance.generator, instance.modulus);
  }
  throw ArithmeticError("unsolvable instance");
}

UInt f_hat(Int s, Int x, const ProblemInstance& instance) {
  const UInt r = instance.order;
  // a^{-s x} reduced through the order keeps exponents small.
  const UInt sx = mul_mod(wrap(s, r), wrap(x, r), r);
  const UInt left = mod_pow(instance.generator, -static_cast<Int>(sx), instance.modulus);
  const UInt right = mod_pow(instance.target, x, instance.modulus);
  return mul_mod(left, right, instance.modulus);
}

bool verifies(const ProblemInstance& instance, UInt t) {
  return mod_pow(instance.generator, static_cast<Int>(t), instance.modulus) == instance.target;
}

}  // namespace dqdlp
