#pragma once

#include <map>
#include <string>

#include "dqdlp/numt.hpp"

// Closed-form probabilities and bounds for the set-membership circuit.
// Rational expressions are evaluated exactly and converted to double at the
// boundary.

namespace dqdlp::analytics {

/// P(anc = 1) on |phi9> when t is in the set, exact-QFT regime.
/// ((2^n-1)^2 (r-1) + (r+2^n-1)^2 + (2^n-1)(r-1) + (2^n-1)(r-1)^2) / (2^{2n} r^2)
double exact_joint_fourth1_in(int n, UInt r);

/// P(anc = 1, z = 1) when t is in the set, exact-QFT regime.
/// ((r+2^n-1)^2 + (2^n-1)(r-1)^2) / (2^{2n} r^2)
double exact_joint_marker_in(int n, UInt r);

/// exact_joint_marker_in / exact_joint_fourth1_in.
double exact_conditional_in(int n, UInt r);

/// The t-in-set conditional in its printed closed form:
/// (r^2 + (2^n-1)^2 + 2^n (r^2+1)) / ((2^n-1)^2 r + r^2 + (2^n-1) r (r+1)).
/// Documentation only; it disagrees with exact_conditional_in.
double conditional_in_as_printed(int n, UInt r);

/// The same quotient as written on the proof's second line, with (2^n-1)
/// in place of 2^n in the numerator.
double conditional_in_derivation_line(int n, UInt r);

struct NotinProbabilities {
  double p_fourth_1 = 0.0;
  double p_marker_given_fourth_1 = 0.0;
};

/// (1/r, 1/r): the exact-QFT values when t is not in the set.
NotinProbabilities notin_probabilities(UInt r);

/// Exact-QFT (r | 2^m) outcome law for any set, accounting for every
/// eigen-index l with (t - tau - s) l = 0 mod r. With c_s = gcd(t - tau - s, r)
/// (c_s = r when the offset vanishes):
///   P(anc = 1)        = sum_s c_s   / (2^n r)
///   P(anc = 1, z = 1) = sum_s c_s^2 / (2^n r^2)
/// It reduces to exact_joint_* when every non-zero offset is a unit mod r.
struct ExactQftLaw {
  double p_fourth_1 = 0.0;
  double p_joint_marker = 0.0;
  double p_marker_given_fourth_1 = 0.0;
};
ExactQftLaw exact_qft_law(UInt offset, int n, UInt r);

/// True when every non-zero offset (offset - s) mod r, s < 2^n, is coprime to r.
bool offsets_are_units(UInt offset, int n, UInt r);

struct IterationBounds {
  double lower_in = 0.0;          // 1 - (1 - 1/(2 + 2/r))^p
  double lower_in_relaxed = 0.0;  // 1 - 2^{-p} ((r+2)/(r+1))^p
  double miss_notin = 0.0;        // (1 - 1/r)^p
};
IterationBounds iteration_bounds(UInt r, int p);

/// d = 2 (r+1) / (r+2).
double d_factor(UInt r);

/// p + log2 p <= log2 r.
bool theorem_constraint_holds(UInt r, int p);

struct SuccessBound {
  double product_form = 0.0;      // per-set success raised to ceil(log2 r)
  double exponential_form = 0.0;  // exp(-2p / (d^p - 1))
};

/// Exact-QFT success bound. Throws std::domain_error("p too large for r")
/// when p + log2 p > log2 r.
SuccessBound success_bound_exact_qft(UInt r, int p);

/// (1 - (1 - (2^m-1)^2 / 2^{2m+1})^p)^{ceil(log2 r)}, with the same
/// exponential closed form alongside.
SuccessBound success_bound_nonexact_qft(UInt r, int m, int p);

/// Non-exact QFT bounds for one (m, n, r):
///   fourth1_in_upper        1/(2^m 2^n) + 1/2^n + 1/r
///   fourth1_notin_lower     1/r
///   joint_marker_in_lower   (2^m-1)^2 / 2^{2m+n}
///   joint_marker_notin      1 / 2^{2m}
///   conditional_in_lower    (2^m-1)^2 / 2^{2m+1}
///   conditional_notin_upper r / 2^{2m}
std::map<std::string, double> nonexact_bounds(int m, int n, UInt r);

struct BoundReport {
  UInt r = 0;
  int n = 0;
  int m = 0;
  int p = 0;
  double d = 0.0;
  std::map<std::string, double> values;
  std::map<std::string, std::string> errors;
};

/// Every formula above for one parameter set; violated preconditions are
/// recorded per formula instead of thrown.
BoundReport bound_report(UInt r, int n, int m, int p);

}  // namespace dqdlp::analytics
