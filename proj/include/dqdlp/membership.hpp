#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "dqdlp/numt.hpp"
#include "dqdlp/qsim.hpp"
#include "dqdlp/random.hpp"

namespace dqdlp {

/// S_{n,tau} = { tau + s mod r : s = 0 .. 2^n - 1 }.
struct SetDescriptor {
  UInt tau = 0;
  int n = 0;

  UInt size() const { return UInt{1} << n; }
  bool contains(UInt t, UInt order) const { return (t % order + order - tau % order) % order < size(); }

  bool operator==(const SetDescriptor&) const = default;
  auto operator<=>(const SetDescriptor&) const = default;
};

/// Throws std::invalid_argument unless tau < r, 2^n < r and n < m - 1.
void validate_set(const SetDescriptor& set, const ProblemInstance& instance);

RegisterLayout membership_layout(const ProblemInstance& instance, const SetDescriptor& set);

/// Called after every circuit step with a short step name.
using StepObserver = std::function<void(std::string_view, const StateVector&)>;

/// The pre-measurement state of the set-membership circuit: init, H on
/// registers 1 and 2, Lambda(M_b), Gamma_tau, QFT^dagger, U_g, QFT,
/// Gamma_tau^dagger, Lambda(M_b)^dagger, H on registers 1 and 2.
StateVector build_phi9(const ProblemInstance& instance, const SetDescriptor& set,
                       const StepObserver& observer = {});

struct ProbabilityProbe {
  double p_fourth_1 = 0.0;
  double p_third_marker_given_fourth_1 = 0.0;
  double p_joint_marker = 0.0;
};

ProbabilityProbe probe(const StateVector& phi9);
ProbabilityProbe probe(const ProblemInstance& instance, const SetDescriptor& set);

/// P(z | anc = 1) for every register-3 value.
std::vector<double> marked_residue_distribution(const StateVector& phi9);

enum class TrialStatus { PostSelected, Inconclusive };

struct TrialOutcome {
  TrialStatus status = TrialStatus::Inconclusive;
  unsigned fourth_bit = 0;
  std::optional<UInt> third_value;
  int postselect_attempts = 0;

  /// The marker is the residue 1, i.e. |0^{m-1}1>.
  bool marker_hit() const { return third_value && *third_value == 1; }

  bool operator==(const TrialOutcome&) const = default;
};

/// Default post-selection budget, 64 * 2^n preparations per trial.
int default_max_attempts(const SetDescriptor& set);

/// Prepares |phi9> per attempt, measures register 4 and, on 1, register 3.
TrialOutcome run_trial(const ProblemInstance& instance, const SetDescriptor& set, Rng& rng,
                       int max_attempts);

/// The exact outcome law of one prepared |phi9>: measuring register 4 then
/// register 3. Sampling from it consumes the generator exactly like
/// qsim::measure on a fresh copy of the state, so it is a drop-in for
/// repeated preparation.
class PreparedCircuit {
 public:
  explicit PreparedCircuit(const StateVector& phi9);
  PreparedCircuit(const ProblemInstance& instance, const SetDescriptor& set);

  TrialOutcome run_trial(Rng& rng, int max_attempts) const;

  const ProbabilityProbe& probabilities() const { return probe_; }
  const std::vector<double>& marked_residues() const { return marked_; }

 private:
  double p_anc0_ = 0.0;
  double p_anc1_ = 0.0;
  ProbabilityProbe probe_;
  std::vector<double> marked_;
};

enum class Verdict { False, True, Inconclusive };

struct MembershipResult {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<TrialOutcome> trials;

  bool operator==(const MembershipResult&) const = default;
};

/// Collects p post-selected trials; True iff one of them hits the marker.
/// Stops at the first inconclusive trial and reports Inconclusive.
MembershipResult membership_verdict(const PreparedCircuit& circuit, int p, Rng& rng, int max_attempts);
MembershipResult membership_verdict(const ProblemInstance& instance, const SetDescriptor& set, int p,
                                    Rng& rng, int max_attempts);

/// Anything that can answer "is t in S_{n,tau}?" from a seed. Implementations
/// must be safe to call concurrently.
class MembershipBackend {
 public:
  virtual ~MembershipBackend() = default;
  virtual MembershipResult query(const SetDescriptor& set, int p, std::uint64_t seed) = 0;
};

/// Runs the simulated circuit; prepared states are cached per set.
class SimulatedBackend final : public MembershipBackend {
 public:
  explicit SimulatedBackend(ProblemInstance instance, std::optional<int> max_attempts = std::nullopt);

  MembershipResult query(const SetDescriptor& set, int p, std::uint64_t seed) override;

  std::shared_ptr<const PreparedCircuit> prepared(const SetDescriptor& set);
  const ProblemInstance& instance() const { return instance_; }

 private:
  struct Entry {
    std::once_flag once;
    std::shared_ptr<const PreparedCircuit> circuit;
  };

  ProblemInstance instance_;
  std::optional<int> max_attempts_;
  std::mutex mutex_;
  std::map<std::pair<UInt, int>, std::shared_ptr<Entry>> cache_;
};

/// Answers from the known solution; no sampling noise.
class TruthfulOracle final : public MembershipBackend {
 public:
  TruthfulOracle(UInt t, UInt order) : t_(t), order_(order) {}
  MembershipResult query(const SetDescriptor& set, int p, std::uint64_t seed) override;

 private:
  UInt t_;
  UInt order_;
};

}  // namespace dqdlp
