#include "dqdlp/gates.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <vector>

namespace dqdlp {

namespace {

/// c^k mod N for k in [0, count).
std::shared_ptr<const std::vector<UInt>> power_table(UInt base, UInt count, UInt modulus) {
  auto table = std::make_shared<std::vector<UInt>>(count);
  UInt value = 1 % modulus;
  for (UInt k = 0; k < count; ++k) {
    (*table)[k] = value;
    value = mul_mod(value, base, modulus);
  }
  return table;
}

void require_unit(UInt value, UInt modulus) {
  if (std::gcd(value % modulus, modulus) != 1) throw ArithmeticError("not invertible");
}

}  // namespace

BasisMap compose(BasisMap first, BasisMap second) {
  return [first = std::move(first), second = std::move(second)](const BasisState& b) {
    return second(first(b));
  };
}

BasisMap gate_M(UInt multiplier, const ProblemInstance& instance) {
  const UInt n = instance.modulus;
  require_unit(multiplier, n);
  const UInt c = multiplier % n;
  return [c, n](const BasisState& b) {
    if (b.z >= n) return b;
    BasisState out = b;
    out.z = mul_mod(b.z, c, n);
    return out;
  };
}

BasisMap gate_lambda_power(UInt multiplier, const ProblemInstance& instance, bool dagger) {
  const UInt n = instance.modulus;
  require_unit(multiplier, n);
  const UInt base = dagger ? mod_inverse(multiplier, n) : multiplier % n;
  auto table = power_table(base, instance.register_size(), n);
  return [table, n](const BasisState& b) {
    if (b.z >= n) return b;
    BasisState out = b;
    out.z = mul_mod(b.z, (*table)[b.x], n);
    return out;
  };
}

BasisMap gate_lambda_Mb(const ProblemInstance& instance, bool dagger) {
  return gate_lambda_power(instance.target, instance, dagger);
}

BasisMap gate_xi(BasisMap inner) {
  return [inner = std::move(inner)](const BasisState& b) {
    BasisState out = b;
    for (UInt k = 0; k < b.s; ++k) out = inner(out);
    out.s = b.s;
    return out;
  };
}

BasisMap gate_set_power(UInt tau, int sign, const ProblemInstance& instance) {
  const UInt n = instance.modulus;
  const UInt r = instance.order;
  auto table = power_table(instance.generator, r, n);
  return [table, n, r, tau, sign](const BasisState& b) {
    if (b.z >= n) return b;
    const UInt e = mul_mod((b.s + tau) % r, b.x % r, r);
    const UInt k = sign < 0 ? (r - e) % r : e;
    BasisState out = b;
    out.z = mul_mod(b.z, (*table)[k], n);
    return out;
  };
}

BasisMap gate_gamma(UInt tau, const ProblemInstance& instance, bool dagger) {
  return gate_set_power(tau, dagger ? +1 : -1, instance);
}

BasisMap gate_gamma_composed(UInt tau, const ProblemInstance& instance) {
  const UInt a_tau = mod_pow(instance.generator, static_cast<Int>(tau), instance.modulus);
  BasisMap xi = gate_xi(gate_lambda_power(instance.generator, instance, /*dagger=*/true));
  BasisMap shift = gate_lambda_power(a_tau, instance, /*dagger=*/true);
  return compose(std::move(xi), std::move(shift));
}

BasisMap gate_Ug() {
  return [](const BasisState& b) {
    if (b.x != 0) return b;
    BasisState out = b;
    out.anc = 1U - b.anc;
    return out;
  };
}

EigenVector make_eigenvector(UInt l, const ProblemInstance& instance) {
  const UInt r = instance.order;
  if (l >= r) throw std::invalid_argument("eigenvector index must lie in [0, r)");
  EigenVector psi;
  psi.l = l;
  psi.amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(instance.register_size()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(r));
  UInt z = 1 % instance.modulus;
  for (UInt k = 0; k < r; ++k) {
    const UInt phase = (r - mul_mod(l, k, r)) % r;
    const double angle = 2 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(r);
    psi.amps(static_cast<Eigen::Index>(z)) = std::polar(scale, angle);
    z = mul_mod(z, instance.generator, instance.modulus);
  }
  return psi;
}

}  // namespace dqdlp
