#include "dqdlp/baseline.hpp"

#include <numeric>
#include <stdexcept>
#include <vector>

namespace dqdlp {

RegisterLayout shor_layout(const ProblemInstance& instance) {
  return RegisterLayout{instance.register_bits, instance.register_bits};
}

StateVector shor_prepare(const ProblemInstance& instance, bool with_inverse_qft) {
  const UInt size = instance.register_size();
  std::vector<UInt> a_pow(size), b_pow(size);
  UInt pa = 1 % instance.modulus, pb = pa;
  for (UInt k = 0; k < size; ++k) {
    a_pow[k] = pa;
    b_pow[k] = pb;
    pa = mul_mod(pa, instance.generator, instance.modulus);
    pb = mul_mod(pb, instance.target, instance.modulus);
  }

  StateVector state = init_phi0(shor_layout(instance));
  hadamard_all(state, Register::Set);
  hadamard_all(state, Register::Argument);
  // Both ladders act as the identity on residues >= N so the map stays a
  // permutation of the whole register.
  apply_basis_map(state, [&](const BasisState& b) {
    BasisState out = b;
    if (b.z < instance.modulus) out.z = mul_mod(b.z, a_pow[b.s], instance.modulus);
    return out;
  });
  apply_basis_map(state, [&](const BasisState& b) {
    BasisState out = b;
    if (b.z < instance.modulus) out.z = mul_mod(b.z, b_pow[b.x], instance.modulus);
    return out;
  });
  if (with_inverse_qft) {
    qft(state, Register::Set, /*inverse=*/true);
    qft(state, Register::Argument, /*inverse=*/true);
  }
  return state;
}

namespace {

UInt nearest_multiple(UInt out, UInt order, UInt size) {
  // round(out * r / 2^m) mod r in integers.
  const auto num = static_cast<unsigned __int128>(out) * order;
  return static_cast<UInt>((num + size / 2) / size) % order;
}

}  // namespace

ShorOutcome shor_decode(const ProblemInstance& instance, UInt x_out, UInt y_out) {
  const UInt r = instance.order;
  const UInt size = instance.register_size();
  ShorOutcome out;
  out.x_out = x_out;
  out.y_out = y_out;
  out.l = nearest_multiple(x_out, r, size);
  out.tl = nearest_multiple(y_out, r, size);
  if (r == 1) {
    out.t_candidate = 0;
    return out;
  }
  if (std::gcd(out.l, r) != 1) return out;
  const UInt t = mul_mod(out.tl, mod_inverse(out.l, r), r);
  if (verifies(instance, t)) out.t_candidate = t;
  return out;
}

ShorOutcome shor_dlp_run(const ProblemInstance& instance, const StateVector& prepared, Rng& rng) {
  StateVector state = prepared;
  const auto x = measure(state, Register::Set, rng);
  const auto y = measure(state, Register::Argument, rng);
  return shor_decode(instance, x.outcome, y.outcome);
}

ShorOutcome shor_dlp_run(const ProblemInstance& instance, Rng& rng) {
  return shor_dlp_run(instance, shor_prepare(instance), rng);
}

std::pair<int, int> qubit_report(int m, int n) {
  if (n < 0 || n >= m - 1) throw std::invalid_argument("qubit_report requires 0 <= n < m - 1");
  return {3 * m, 2 * m + n + 1};
}

std::pair<int, int> qubit_report(const ProblemInstance& instance, int n) {
  return qubit_report(instance.register_bits, n);
}

}  // namespace dqdlp
