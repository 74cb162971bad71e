#pragma once

#include <Eigen/Dense>

#include <functional>

#include "dqdlp/numt.hpp"
#include "dqdlp/qsim.hpp"

namespace dqdlp {

/// A basis permutation over (s, x, z, anc). Every gate below is total on the
/// layout: residues z >= N are left untouched.
using BasisMap = std::function<BasisState(const BasisState&)>;

/// `second` after `first`.
BasisMap compose(BasisMap first, BasisMap second);

/// M_c : z -> z c mod N on register 3.
BasisMap gate_M(UInt multiplier, const ProblemInstance& instance);

/// Lambda(M_c) controlled by register 2: z -> z c^{+-x} mod N.
BasisMap gate_lambda_power(UInt multiplier, const ProblemInstance& instance, bool dagger);

/// Lambda(M_b): z -> z b^{x}; the dagger uses b^{-x}.
BasisMap gate_lambda_Mb(const ProblemInstance& instance, bool dagger);

/// Xi(U): applies `inner` s times, s read from register 1.
BasisMap gate_xi(BasisMap inner);

/// z -> z a^{sign (s + tau) x} mod N.
BasisMap gate_set_power(UInt tau, int sign, const ProblemInstance& instance);

/// Gamma_tau(M_a): z -> z a^{-(s + tau) x}. The dagger flips the sign.
BasisMap gate_gamma(UInt tau, const ProblemInstance& instance, bool dagger);

/// The same map built from smaller gates:
/// (I (x) Lambda(M^dagger_{a^tau})) . Xi(Lambda(M^dagger_a)), giving z a^{-(s+tau)x}.
BasisMap gate_gamma_composed(UInt tau, const ProblemInstance& instance);

/// U_g with g(x) = [x == 0]: flips the ancilla exactly when x = 0.
BasisMap gate_Ug();

/// |psi_l> = r^{-1/2} sum_k omega_r^{-l k} |a^k mod N> over register-3 values.
struct EigenVector {
  UInt l = 0;
  Eigen::VectorXcd amps;
};

/// Test helper; production circuits never build eigenvectors.
EigenVector make_eigenvector(UInt l, const ProblemInstance& instance);

}  // namespace dqdlp
