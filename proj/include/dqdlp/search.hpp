#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqdlp/cluster.hpp"
#include "dqdlp/membership.hpp"
#include "dqdlp/numt.hpp"

namespace dqdlp {

struct SearchConfig {
  int n0 = 3;
  int p = 2;
  double epsilon = 0.5;
  int max_restarts = 0;
  std::uint64_t seed = 0;
  /// Reject p + log2 p > log2 r instead of only warning about it.
  bool enforce_constraint = false;
};

/// Throws std::invalid_argument for a config that cannot drive the walk on
/// this instance. Returns warnings for soft violations.
std::vector<std::string> validate_config(const SearchConfig& config, const ProblemInstance& instance);

struct SearchStep {
  SetDescriptor set;
  Verdict verdict = Verdict::Inconclusive;
  int worker = 0;
  std::vector<TrialOutcome> trials;
  int restart = 0;
  std::uint64_t seed = 0;

  bool operator==(const SearchStep&) const = default;
};

enum class SearchEventKind {
  Backtrack,                // a level advanced a full period with no True
  RestartAfterWrap,         // the top level advanced a full period with no True
  RestartAfterVerification  // a singleton said True but a^tau != b
};

/// Recovery actions outside the plain shrink-or-slide rule. `before_step` is
/// the index of the step the walk resumes with.
struct SearchEvent {
  SearchEventKind kind = SearchEventKind::Backtrack;
  std::size_t before_step = 0;
  SetDescriptor resume;

  bool operator==(const SearchEvent&) const = default;
};

struct SearchTrace {
  std::vector<SearchStep> steps;
  /// Parallel batches can run sets the walk never reaches; they land here.
  std::vector<SearchStep> unused;
  std::vector<SearchEvent> events;
  std::optional<DlpSolution> result;
  std::string failure;
  int restarts_used = 0;
  long total_postselect_attempts = 0;
  cluster::CommsLedger ledger;
  std::vector<std::string> warnings;

  bool success() const { return result.has_value(); }
};

/// True -> (tau, n-1); False or inconclusive -> (tau + 2^n mod r, n).
SetDescriptor next_set(const SetDescriptor& set, Verdict verdict, UInt order);

/// Checks every consecutive pair of steps against next_set, except where an
/// event says the walk resumed elsewhere. The first step of each restart must
/// be (0, n0).
bool follows_transition_rule(const SearchTrace& trace, UInt order, int n0);

/// Serial walk: one query per dispatch, all on worker 0.
SearchTrace solve(const ProblemInstance& instance, const SearchConfig& config, MembershipBackend& backend);

/// Walk driven through a coordinator. In parallel mode the top level is
/// scanned as one batch and the walk then reads those verdicts in tau order;
/// the lowest confirmed tau is descended first.
SearchTrace solve(const ProblemInstance& instance, const SearchConfig& config, cluster::Coordinator& coordinator);

struct QueryPlan {
  UInt order = 0;
  int n0 = 0;
  std::vector<SetDescriptor> level0;

  /// Queries needed under a truthful oracle: one top-level scan plus at most
  /// two per lower level.
  std::size_t truthful_query_bound() const { return level0.size() + 2 * static_cast<std::size_t>(n0); }

  /// Wall-clock rounds for the top-level scan on K workers.
  std::size_t parallel_depth(int workers) const;
};

/// Partition of [0, r) into ceil(r / 2^n0) sets of size 2^n0; the last one
/// wraps mod r.
QueryPlan plan_queries(UInt order, int n0);

}  // namespace dqdlp
