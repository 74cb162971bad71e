#include "dqdlp/analytics.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dqdlp::analytics {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

BigInt pow2(int e) { return BigInt(1) << e; }

double to_double(const Rational& q) { return q.convert_to<double>(); }

void require_set_smaller_than_order(int n, UInt r) {
  if (n < 0 || n >= 63 || (UInt{1} << n) >= r) throw std::domain_error("requires 2^n < r");
}

Rational joint_fourth1_in(int n, UInt r) {
  require_set_smaller_than_order(n, r);
  const BigInt k = pow2(n), rr = r;
  const BigInt num = (k - 1) * (k - 1) * (rr - 1) + (rr + k - 1) * (rr + k - 1) + (k - 1) * (rr - 1) +
                     (k - 1) * (rr - 1) * (rr - 1);
  return Rational(num, k * k * rr * rr);
}

Rational joint_marker_in(int n, UInt r) {
  require_set_smaller_than_order(n, r);
  const BigInt k = pow2(n), rr = r;
  const BigInt num = (rr + k - 1) * (rr + k - 1) + (k - 1) * (rr - 1) * (rr - 1);
  return Rational(num, k * k * rr * rr);
}

}  // namespace

double exact_joint_fourth1_in(int n, UInt r) { return to_double(joint_fourth1_in(n, r)); }

double exact_joint_marker_in(int n, UInt r) { return to_double(joint_marker_in(n, r)); }

double exact_conditional_in(int n, UInt r) {
  return to_double(joint_marker_in(n, r) / joint_fourth1_in(n, r));
}

double conditional_in_as_printed(int n, UInt r) {
  require_set_smaller_than_order(n, r);
  const BigInt k = pow2(n), rr = r;
  const BigInt num = rr * rr + (k - 1) * (k - 1) + k * (rr * rr + 1);
  const BigInt den = (k - 1) * (k - 1) * rr + rr * rr + (k - 1) * rr * (rr + 1);
  return to_double(Rational(num, den));
}

double conditional_in_derivation_line(int n, UInt r) {
  require_set_smaller_than_order(n, r);
  const BigInt k = pow2(n), rr = r;
  const BigInt num = rr * rr + (k - 1) * (k - 1) + (k - 1) * (rr * rr + 1);
  const BigInt den = (k - 1) * (k - 1) * rr + rr * rr + (k - 1) * rr * (rr + 1);
  return to_double(Rational(num, den));
}

NotinProbabilities notin_probabilities(UInt r) {
  if (r < 2) throw std::domain_error("requires r >= 2");
  const double inv = to_double(Rational(1, BigInt(r)));
  return {inv, inv};
}

ExactQftLaw exact_qft_law(UInt offset, int n, UInt r) {
  require_set_smaller_than_order(n, r);
  BigInt sum = 0, sum_sq = 0;
  for (UInt s = 0; s < (UInt{1} << n); ++s) {
    const UInt d = (offset % r + r - s % r) % r;
    const BigInt c = d == 0 ? r : std::gcd(d, r);
    sum += c;
    sum_sq += c * c;
  }
  const BigInt k = pow2(n), rr = r;
  const Rational fourth(sum, k * rr);
  const Rational joint(sum_sq, k * rr * rr);
  return {to_double(fourth), to_double(joint), to_double(joint / fourth)};
}

bool offsets_are_units(UInt offset, int n, UInt r) {
  for (UInt s = 0; s < (UInt{1} << n); ++s) {
    const UInt d = (offset % r + r - s % r) % r;
    if (d != 0 && std::gcd(d, r) != 1) return false;
  }
  return true;
}

IterationBounds iteration_bounds(UInt r, int p) {
  if (p < 1) throw std::domain_error("requires p >= 1");
  if (r < 1) throw std::domain_error("requires r >= 1");
  const double rd = static_cast<double>(r);
  IterationBounds out;
  out.lower_in = 1.0 - std::pow(1.0 - 1.0 / (2.0 + 2.0 / rd), p);
  out.lower_in_relaxed = 1.0 - std::pow(0.5 * (rd + 2.0) / (rd + 1.0), p);
  out.miss_notin = std::pow(1.0 - 1.0 / rd, p);
  return out;
}

double d_factor(UInt r) {
  const double rd = static_cast<double>(r);
  return 2.0 * (rd + 1.0) / (rd + 2.0);
}

bool theorem_constraint_holds(UInt r, int p) {
  if (p < 1 || r < 1) return false;
  return static_cast<double>(p) + std::log2(static_cast<double>(p)) <=
         std::log2(static_cast<double>(r)) + 1e-12;
}

namespace {

double exponential_form(UInt r, int p) {
  const double d = d_factor(r);
  return std::exp(-2.0 * p / (std::pow(d, p) - 1.0));
}

}  // namespace

SuccessBound success_bound_exact_qft(UInt r, int p) {
  if (p < 1) throw std::domain_error("requires p >= 1");
  if (!theorem_constraint_holds(r, p)) throw std::domain_error("p too large for r");
  const double rd = static_cast<double>(r);
  const double per_set = 1.0 - std::pow(0.5 * (rd + 2.0) / (rd + 1.0), p);
  return {std::pow(per_set, ceil_log2(r)), exponential_form(r, p)};
}

SuccessBound success_bound_nonexact_qft(UInt r, int m, int p) {
  if (p < 1) throw std::domain_error("requires p >= 1");
  if (m < 1) throw std::domain_error("requires m >= 1");
  if (r < 2) throw std::domain_error("requires r >= 2");
  const BigInt big_m = pow2(m);
  const double hit = to_double(Rational((big_m - 1) * (big_m - 1), pow2(2 * m + 1)));
  const double per_set = 1.0 - std::pow(1.0 - hit, p);
  return {std::pow(per_set, ceil_log2(r)), exponential_form(r, p)};
}

std::map<std::string, double> nonexact_bounds(int m, int n, UInt r) {
  require_set_smaller_than_order(n, r);
  if (n >= m - 1) throw std::domain_error("requires n < m - 1");
  const BigInt big_m = pow2(m), k = pow2(n), rr = r;
  std::map<std::string, double> out;
  out["fourth1_in_upper"] =
      to_double(Rational(1, big_m * k) + Rational(1, k) + Rational(1, rr));
  out["fourth1_notin_lower"] = to_double(Rational(1, rr));
  out["joint_marker_in_lower"] = to_double(Rational((big_m - 1) * (big_m - 1), pow2(2 * m + n)));
  out["joint_marker_notin"] = to_double(Rational(1, pow2(2 * m)));
  out["conditional_in_lower"] = to_double(Rational((big_m - 1) * (big_m - 1), pow2(2 * m + 1)));
  out["conditional_notin_upper"] = to_double(Rational(rr, pow2(2 * m)));
  return out;
}

BoundReport bound_report(UInt r, int n, int m, int p) {
  BoundReport report;
  report.r = r;
  report.n = n;
  report.m = m;
  report.p = p;
  report.d = d_factor(r);

  auto attempt = [&](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      report.errors[name] = e.what();
    }
  };

  attempt("exact_joint_fourth1_in", [&] { report.values["exact_joint_fourth1_in"] = exact_joint_fourth1_in(n, r); });
  attempt("exact_joint_marker_in", [&] { report.values["exact_joint_marker_in"] = exact_joint_marker_in(n, r); });
  attempt("exact_conditional_in", [&] { report.values["exact_conditional_in"] = exact_conditional_in(n, r); });
  attempt("conditional_in_as_printed",
          [&] { report.values["conditional_in_as_printed"] = conditional_in_as_printed(n, r); });
  attempt("notin_probabilities", [&] {
    const auto v = notin_probabilities(r);
    report.values["notin_p_fourth_1"] = v.p_fourth_1;
    report.values["notin_p_marker_given_fourth_1"] = v.p_marker_given_fourth_1;
  });
  attempt("iteration_bounds", [&] {
    const auto v = iteration_bounds(r, p);
    report.values["iteration_lower_in"] = v.lower_in;
    report.values["iteration_lower_in_relaxed"] = v.lower_in_relaxed;
    report.values["iteration_miss_notin"] = v.miss_notin;
  });
  attempt("success_bound_exact_qft", [&] {
    const auto v = success_bound_exact_qft(r, p);
    report.values["success_exact_qft_product"] = v.product_form;
    report.values["success_exact_qft_exponential"] = v.exponential_form;
  });
  attempt("success_bound_nonexact_qft", [&] {
    const auto v = success_bound_nonexact_qft(r, m, p);
    report.values["success_nonexact_qft_product"] = v.product_form;
    report.values["success_nonexact_qft_exponential"] = v.exponential_form;
  });
  attempt("nonexact_bounds", [&] {
    for (const auto& [name, value] : nonexact_bounds(m, n, r)) report.values["nonexact_" + name] = value;
  });
  return report;
}

}  // namespace dqdlp::analytics
