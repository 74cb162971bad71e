#pragma once

// Independent oracles for tests. Nothing here calls into the library's
// arithmetic; powers and orders are computed by plain repeated multiplication.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "dqdlp/numt.hpp"

namespace testing {

using dqdlp::UInt;

inline UInt naive_pow(UInt base, UInt exp, UInt modulus) {
  UInt acc = 1 % modulus;
  for (UInt i = 0; i < exp; ++i) acc = (acc * (base % modulus)) % modulus;
  return acc;
}

inline UInt naive_order(UInt a, UInt modulus) {
  UInt acc = a % modulus;
  for (UInt k = 1; k <= modulus; ++k) {
    if (acc == 1) return k;
    acc = (acc * a) % modulus;
  }
  throw std::logic_error("no order");
}

inline bool is_prime(UInt v) {
  if (v < 2) return false;
  for (UInt d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

/// Smallest prime P = 1 (mod r) together with an element of order exactly r.
struct OrderWitness {
  UInt modulus = 0;
  UInt generator = 0;
};

inline OrderWitness witness_for_order(UInt r) {
  for (UInt p = r + 1;; p += r) {
    if (!is_prime(p)) continue;
    for (UInt g = 2; g < p; ++g) {
      const UInt h = naive_pow(g, (p - 1) / r, p);
      if (naive_order(h, p) == r) return {p, h};
    }
  }
}

/// a = generator of order r, b = a^t.
inline dqdlp::ProblemInstance instance_with_order(UInt r, UInt t) {
  const auto w = witness_for_order(r);
  return dqdlp::ProblemInstance::make(w.generator, naive_pow(w.generator, t, w.modulus), w.modulus);
}

inline double binomial_sigma(double p, double shots) { return std::sqrt(p * (1.0 - p) / shots); }

}  // namespace testing
