#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "dqdlp/gates.hpp"
#include "support.hpp"

using namespace dqdlp;
using Complex = std::complex<double>;

namespace {

const ProblemInstance& worked() {
  static const auto inst = ProblemInstance::make(3, 12, 71);
  return inst;
}

// Applies a basis map to |s, x> (x) psi_l and returns the psi_l-coefficient
// of the result, i.e. the eigenphase if psi_l is an eigenvector.
Complex eigen_phase(const BasisMap& map, const EigenVector& psi, UInt s, UInt x, const ProblemInstance& inst) {
  const UInt size = inst.register_size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size));
  for (UInt z = 0; z < size; ++z) {
    const Complex a = psi.amps(static_cast<Eigen::Index>(z));
    if (a == Complex(0.0)) continue;
    const auto image = map(BasisState{s, x, z, 0});
    REQUIRE(image.s == s);
    REQUIRE(image.x == x);
    out(static_cast<Eigen::Index>(image.z)) += a;
  }
  const Complex overlap = psi.amps.dot(out);
  CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-10);
  return overlap;
}

Complex omega(Int k, UInt r) {
  const double angle = 2.0 * M_PI * static_cast<double>(wrap(k, r)) / static_cast<double>(r);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

TEST_CASE("gate_M") {
  const auto& inst = worked();
  CHECK(gate_M(3, inst)({0, 0, 1, 0}).z == 3);
  for (UInt z = 0; z < 128; ++z) CHECK(gate_M(1, inst)({0, 0, z, 0}).z == z);
  const auto forward = gate_M(3, inst);
  const auto back = gate_M(mod_pow(3, -1, 71), inst);
  for (UInt z = 0; z < 71; ++z) CHECK(back(forward({0, 0, z, 0})).z == z);
  for (UInt z = 71; z < 128; ++z) CHECK(forward({0, 0, z, 0}).z == z);
  CHECK_THROWS_AS(gate_M(71, inst), ArithmeticError);
}

TEST_CASE("gate_lambda_Mb") {
  const auto& inst = worked();
  const auto lam = gate_lambda_Mb(inst, false);
  const auto inv = gate_lambda_Mb(inst, true);
  for (UInt z = 0; z < 128; ++z) CHECK(lam({0, 0, z, 0}).z == z);
  CHECK(lam({0, 1, 1, 0}).z == 12);
  for (UInt x = 0; x < 128; ++x) {
    for (UInt z = 0; z < 128; z += 5) {
      const BasisState b{0, x, z, 1};
      CHECK(inv(lam(b)) == b);
    }
  }
}

TEST_CASE("gate_gamma") {
  const auto& inst = worked();
  CHECK(gate_gamma(0, inst, false)({1, 1, 1, 0}).z == mod_pow(3, -1, 71));
  for (UInt x = 0; x < 128; ++x) CHECK(gate_gamma(0, inst, false)({0, x, 7, 0}).z == 7);

  // s + tau = t: Gamma after Lambda(M_b) returns register 3 to 1 for every x.
  const auto lam = gate_lambda_Mb(inst, false);
  const auto gam = gate_gamma(20, inst, false);
  for (UInt x = 0; x < 128; ++x) CHECK(gam(lam({3, x, 1, 0})).z == 1);

  const auto inv = gate_gamma(20, inst, true);
  for (UInt s = 0; s < 8; ++s) {
    for (UInt x = 0; x < 128; x += 3) {
      for (UInt z = 0; z < 128; z += 7) CHECK(inv(gam({s, x, z, 0})) == BasisState{s, x, z, 0});
    }
  }
}

TEST_CASE("compositional Gamma equals the direct form on the full basis") {
  const auto& inst = worked();
  for (UInt tau : {UInt{0}, UInt{20}, UInt{34}}) {
    const auto direct = gate_gamma(tau, inst, false);
    const auto composed = gate_gamma_composed(tau, inst);
    long mismatches = 0;
    for (UInt s = 0; s < 8; ++s) {
      for (UInt x = 0; x < 128; ++x) {
        for (UInt z = 0; z < 128; ++z) mismatches += direct({s, x, z, 0}) != composed({s, x, z, 0});
      }
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("compositional Gamma reductions") {
  const auto& inst = worked();
  const auto xi = gate_xi(gate_lambda_power(3, inst, true));
  const auto composed0 = gate_gamma_composed(0, inst);
  const auto shift = gate_lambda_power(mod_pow(3, 20, 71), inst, true);
  const auto composed20 = gate_gamma_composed(20, inst);
  for (UInt x = 0; x < 128; x += 3) {
    for (UInt z = 1; z < 71; z += 4) {
      for (UInt s = 0; s < 8; ++s) CHECK(composed0({s, x, z, 0}) == xi({s, x, z, 0}));
      CHECK(composed20({0, x, z, 0}) == shift({0, x, z, 0}));
    }
  }
}

TEST_CASE("Lambda(M_b) and Gamma commute") {
  const auto& inst = worked();
  const auto lam = gate_lambda_Mb(inst, false);
  const auto gam = gate_gamma(9, inst, false);
  for (UInt s = 0; s < 8; ++s) {
    for (UInt x = 0; x < 128; x += 5) {
      for (UInt z = 0; z < 128; z += 3) CHECK(gam(lam({s, x, z, 0})) == lam(gam({s, x, z, 0})));
    }
  }
}

TEST_CASE("gate_Ug") {
  const auto ug = gate_Ug();
  CHECK(ug({0, 0, 1, 0}) == BasisState{0, 0, 1, 1});
  CHECK(ug({0, 5, 1, 0}) == BasisState{0, 5, 1, 0});
  for (UInt x = 0; x < 16; ++x) {
    for (unsigned anc = 0; anc < 2; ++anc) CHECK(ug(ug({2, x, 3, anc})) == BasisState{2, x, 3, anc});
  }
  // Commutes with a map that fixes the set {x = 0}.
  const auto& inst = worked();
  const auto lam = gate_lambda_Mb(inst, false);
  for (UInt x = 0; x < 128; x += 7) {
    for (unsigned anc = 0; anc < 2; ++anc) CHECK(ug(lam({0, x, 5, anc})) == lam(ug({0, x, 5, anc})));
  }
}

TEST_CASE("every gate is a permutation of the full basis") {
  const auto& inst = worked();
  const RegisterLayout layout{3, 7};
  StateVector s(layout);
  CHECK_NOTHROW(apply_basis_map(s, gate_lambda_Mb(inst, false)));
  CHECK_NOTHROW(apply_basis_map(s, gate_lambda_Mb(inst, true)));
  CHECK_NOTHROW(apply_basis_map(s, gate_gamma(20, inst, false)));
  CHECK_NOTHROW(apply_basis_map(s, gate_gamma(20, inst, true)));
  CHECK_NOTHROW(apply_basis_map(s, gate_gamma_composed(3, inst)));
  CHECK_NOTHROW(apply_basis_map(s, gate_Ug()));
  CHECK_NOTHROW(apply_basis_map(s, gate_M(5, inst)));
}

TEST_CASE("eigenvectors") {
  const auto inst = ProblemInstance::make(2, 13, 17);
  const UInt r = inst.order;
  const auto psi0 = make_eigenvector(0, inst);
  for (UInt k = 0; k < r; ++k) {
    CHECK(std::abs(psi0.amps(static_cast<Eigen::Index>(testing::naive_pow(2, k, 17))) - 1.0 / std::sqrt(8.0)) < 1e-15);
  }
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(inst.register_size()));
  for (UInt l = 0; l < r; ++l) sum += make_eigenvector(l, inst).amps;
  sum /= std::sqrt(static_cast<double>(r));
  Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(sum.size());
  delta(1) = 1.0;
  CHECK((sum - delta).norm() < 1e-12);
  CHECK_THROWS(make_eigenvector(r, inst));
}

TEST_CASE("eigenvectors are orthonormal up to r = 64") {
  for (UInt r : {UInt{2}, UInt{5}, UInt{8}, UInt{12}, UInt{35}, UInt{64}}) {
    const auto inst = testing::instance_with_order(r, 0);
    std::vector<EigenVector> psi;
    for (UInt l = 0; l < r; ++l) psi.push_back(make_eigenvector(l, inst));
    double worst = 0.0;
    for (UInt i = 0; i < r; ++i) {
      for (UInt j = 0; j < r; ++j) {
        const Complex ip = psi[i].amps.dot(psi[j].amps);
        worst = std::max(worst, std::abs(ip - Complex(i == j ? 1.0 : 0.0)));
      }
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("eigenphase identities at r = 8") {
  for (UInt b : {UInt{1}, UInt{13}, UInt{9}}) {
    const auto inst = ProblemInstance::make(2, b, 17);
    const UInt t = brute_force_dlp(inst).t;
    const UInt r = inst.order;
    const auto lam = gate_lambda_Mb(inst, false);
    for (UInt l = 0; l < r; ++l) {
      const auto psi = make_eigenvector(l, inst);
      for (UInt x = 0; x < 32; x += 3) {
        const Complex expect = omega(static_cast<Int>(x * l * t), r);
        CHECK(std::abs(eigen_phase(lam, psi, 0, x, inst) - expect) < 1e-10);
        for (UInt tau = 0; tau < r; tau += 3) {
          const auto gam = gate_gamma(tau, inst, false);
          for (UInt s = 0; s < 2; ++s) {
            const Complex g = omega(-static_cast<Int>((s + tau) * x * l), r);
            CHECK(std::abs(eigen_phase(gam, psi, s, x, inst) - g) < 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("Gamma eigenphase on random draws at r = 35") {
  const auto& inst = worked();
  std::mt19937_64 gen(17);
  for (int i = 0; i < 40; ++i) {
    const UInt l = gen() % 35, x = gen() % 128, s = gen() % 8, tau = gen() % 35;
    const auto psi = make_eigenvector(l, inst);
    const Complex g = omega(-static_cast<Int>((s + tau) * x * l), 35);
    CHECK(std::abs(eigen_phase(gate_gamma(tau, inst, false), psi, s, x, inst) - g) < 1e-10);
  }
}
