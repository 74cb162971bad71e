#include "dqdlp/membership.hpp"

#include <stdexcept>

#include "dqdlp/gates.hpp"

namespace dqdlp {

void validate_set(const SetDescriptor& set, const ProblemInstance& instance) {
  if (set.n < 0) throw std::invalid_argument("set exponent must be >= 0");
  if (set.tau >= instance.order) throw std::invalid_argument("tau must lie in [0, r)");
  if (set.n >= 63 || set.size() >= instance.order) throw std::invalid_argument("set size 2^n must be < r");
  if (set.n >= instance.register_bits - 1) throw std::invalid_argument("set exponent must satisfy n < m - 1");
}

RegisterLayout membership_layout(const ProblemInstance& instance, const SetDescriptor& set) {
  return RegisterLayout{set.n, instance.register_bits};
}

StateVector build_phi9(const ProblemInstance& instance, const SetDescriptor& set,
                       const StepObserver& observer) {
  validate_set(set, instance);
  auto notify = [&](std::string_view step, const StateVector& s) {
    if (observer) observer(step, s);
  };

  StateVector state = init_phi0(membership_layout(instance, set));
  notify("init", state);
  hadamard_all(state, Register::Set);
  hadamard_all(state, Register::Argument);
  notify("hadamard", state);
  apply_basis_map(state, gate_lambda_Mb(instance, false));
  notify("lambda_mb", state);
  apply_basis_map(state, gate_gamma(set.tau, instance, false));
  notify("gamma", state);
  qft_register2(state, /*inverse=*/true);
  notify("inverse_qft", state);
  apply_basis_map(state, gate_Ug());
  notify("u_g", state);
  qft_register2(state, /*inverse=*/false);
  notify("qft", state);
  apply_basis_map(state, gate_gamma(set.tau, instance, true));
  notify("gamma_dagger", state);
  apply_basis_map(state, gate_lambda_Mb(instance, true));
  notify("lambda_mb_dagger", state);
  hadamard_all(state, Register::Set);
  hadamard_all(state, Register::Argument);
  notify("final_hadamard", state);
  return state;
}

ProbabilityProbe probe(const StateVector& phi9) {
  ProbabilityProbe out;
  out.p_fourth_1 = marginal_probability(phi9, [](const BasisState& b) { return b.anc == 1; });
  out.p_joint_marker =
      marginal_probability(phi9, [](const BasisState& b) { return b.anc == 1 && b.z == 1; });
  out.p_third_marker_given_fourth_1 = out.p_fourth_1 > 0 ? out.p_joint_marker / out.p_fourth_1 : 0.0;
  return out;
}

ProbabilityProbe probe(const ProblemInstance& instance, const SetDescriptor& set) {
  return probe(build_phi9(instance, set));
}

std::vector<double> marked_residue_distribution(const StateVector& phi9) {
  const auto& layout = phi9.layout();
  std::vector<double> dist(UInt{1} << layout.value_bits, 0.0);
  const auto& v = phi9.amplitudes();
  double total = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if ((i & 1) == 0) continue;
    const double p = std::norm(v(i));
    dist[layout.value(static_cast<UInt>(i), Register::Residue)] += p;
    total += p;
  }
  if (total > 0) {
    for (double& p : dist) p /= total;
  }
  return dist;
}

int default_max_attempts(const SetDescriptor& set) { return 64 * (1 << set.n); }

TrialOutcome run_trial(const ProblemInstance& instance, const SetDescriptor& set, Rng& rng,
                       int max_attempts) {
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
  const StateVector prepared = build_phi9(instance, set);
  TrialOutcome outcome;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    StateVector state = prepared;
    outcome.postselect_attempts = attempt;
    const auto fourth = measure(state, Register::Ancilla, rng);
    outcome.fourth_bit = static_cast<unsigned>(fourth.outcome);
    if (fourth.outcome == 1) {
      outcome.status = TrialStatus::PostSelected;
      outcome.third_value = measure(state, Register::Residue, rng).outcome;
      return outcome;
    }
  }
  outcome.status = TrialStatus::Inconclusive;
  return outcome;
}

PreparedCircuit::PreparedCircuit(const StateVector& phi9) {
  probe_ = probe(phi9);
  p_anc1_ = probe_.p_fourth_1;
  p_anc0_ = marginal_probability(phi9, [](const BasisState& b) { return b.anc == 0; });
  marked_ = marked_residue_distribution(phi9);
}

PreparedCircuit::PreparedCircuit(const ProblemInstance& instance, const SetDescriptor& set)
    : PreparedCircuit(build_phi9(instance, set)) {}

namespace {

// Mirrors qsim::measure's outcome selection on a two-outcome register.
unsigned sample_ancilla(double p0, double p1, Rng& rng) {
  const double total = p0 + p1;
  const double u = rng.uniform() * total;
  if (p0 >= kImpossibleOutcome && (u < p0 || p1 < kImpossibleOutcome)) return 0;
  return 1;
}

UInt sample_index(const std::vector<double>& dist, Rng& rng) {
  double total = 0.0;
  for (double p : dist) total += p;
  const double u = rng.uniform() * total;
  UInt outcome = dist.size();
  double cumulative = 0.0;
  for (UInt k = 0; k < dist.size(); ++k) {
    if (dist[k] < kImpossibleOutcome) continue;
    outcome = k;
    cumulative += dist[k];
    if (u < cumulative) break;
  }
  return outcome;
}

}  // namespace

TrialOutcome PreparedCircuit::run_trial(Rng& rng, int max_attempts) const {
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
  TrialOutcome outcome;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    outcome.postselect_attempts = attempt;
    outcome.fourth_bit = sample_ancilla(p_anc0_, p_anc1_, rng);
    if (outcome.fourth_bit == 1) {
      outcome.status = TrialStatus::PostSelected;
      outcome.third_value = sample_index(marked_, rng);
      return outcome;
    }
  }
  outcome.status = TrialStatus::Inconclusive;
  return outcome;
}

MembershipResult membership_verdict(const PreparedCircuit& circuit, int p, Rng& rng, int max_attempts) {
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  MembershipResult result;
  bool hit = false;
  for (int i = 0; i < p; ++i) {
    result.trials.push_back(circuit.run_trial(rng, max_attempts));
    const auto& trial = result.trials.back();
    if (trial.status == TrialStatus::Inconclusive) {
      result.verdict = Verdict::Inconclusive;
      return result;
    }
    hit = hit || trial.marker_hit();
  }
  result.verdict = hit ? Verdict::True : Verdict::False;
  return result;
}

MembershipResult membership_verdict(const ProblemInstance& instance, const SetDescriptor& set, int p,
                                    Rng& rng, int max_attempts) {
  return membership_verdict(PreparedCircuit(instance, set), p, rng, max_attempts);
}

SimulatedBackend::SimulatedBackend(ProblemInstance instance, std::optional<int> max_attempts)
    : instance_(std::move(instance)), max_attempts_(max_attempts) {}

std::shared_ptr<const PreparedCircuit> SimulatedBackend::prepared(const SetDescriptor& set) {
  std::shared_ptr<Entry> entry;
  {
    std::lock_guard lock(mutex_);
    auto& slot = cache_[{set.tau, set.n}];
    if (!slot) slot = std::make_shared<Entry>();
    entry = slot;
  }
  std::call_once(entry->once, [&] { entry->circuit = std::make_shared<PreparedCircuit>(instance_, set); });
  return entry->circuit;
}

MembershipResult SimulatedBackend::query(const SetDescriptor& set, int p, std::uint64_t seed) {
  Rng rng(seed);
  const int attempts = max_attempts_.value_or(default_max_attempts(set));
  return membership_verdict(*prepared(set), p, rng, attempts);
}

MembershipResult TruthfulOracle::query(const SetDescriptor& set, int p, std::uint64_t /*seed*/) {
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  MembershipResult result;
  result.verdict = set.contains(t_, order_) ? Verdict::True : Verdict::False;
  return result;
}

}  // namespace dqdlp
