#include "dqdlp/search.hpp"

#include <algorithm>
#include <stdexcept>

#include "dqdlp/analytics.hpp"

namespace dqdlp {

std::vector<std::string> validate_config(const SearchConfig& config, const ProblemInstance& instance) {
  if (config.p < 1) throw std::invalid_argument("p must be >= 1");
  if (config.n0 < 0) throw std::invalid_argument("n0 must be >= 0");
  if (config.max_restarts < 0) throw std::invalid_argument("max_restarts must be >= 0");
  validate_set(SetDescriptor{0, config.n0}, instance);

  std::vector<std::string> warnings;
  if (!analytics::theorem_constraint_holds(instance.order, config.p)) {
    if (config.enforce_constraint) throw std::invalid_argument("p + log2 p exceeds log2 r");
    warnings.emplace_back("p + log2 p exceeds log2 r; the success bound does not apply");
  }
  return warnings;
}

SetDescriptor next_set(const SetDescriptor& set, Verdict verdict, UInt order) {
  if (verdict == Verdict::True) return SetDescriptor{set.tau, set.n - 1};
  return SetDescriptor{(set.tau + set.size()) % order, set.n};
}

bool follows_transition_rule(const SearchTrace& trace, UInt order, int n0) {
  if (trace.steps.empty()) return true;
  const SetDescriptor start{0, n0};
  if (trace.steps.front().set != start) return false;

  auto event_at = [&](std::size_t index) -> const SearchEvent* {
    for (const auto& e : trace.events) {
      if (e.before_step == index) return &e;
    }
    return nullptr;
  };

  for (std::size_t i = 1; i < trace.steps.size(); ++i) {
    const auto& prev = trace.steps[i - 1];
    const auto& cur = trace.steps[i];
    if (cur.set.tau >= order) return false;
    if (const auto* e = event_at(i)) {
      if (cur.set != e->resume) return false;
      if (e->kind != SearchEventKind::Backtrack && cur.set != start) return false;
      continue;
    }
    if (prev.verdict == Verdict::True && prev.set.n == 0) return false;
    if (cur.set != next_set(prev.set, prev.verdict, order)) return false;
  }
  return true;
}

namespace {

struct Level {
  SetDescriptor set;
  UInt advance = 0;
};

class Walker {
 public:
  Walker(const ProblemInstance& instance, const SearchConfig& config, cluster::Coordinator& coordinator)
      : instance_(instance), config_(config), coordinator_(coordinator) {}

  SearchTrace run() {
    trace_.warnings = validate_config(config_, instance_);
    const auto ledger_before = coordinator_.ledger();
    const SetDescriptor start{0, config_.n0};

    for (int restart = 0;; ++restart) {
      trace_.restarts_used = restart;
      begin_attempt(restart);
      const auto outcome = walk_once();
      flush_unused();
      if (outcome == Outcome::Solved) break;

      if (restart >= config_.max_restarts) {
        trace_.failure = outcome == Outcome::Wrapped ? "top level wrapped without a confirmed set"
                                                     : "singleton confirmed but failed verification";
        break;
      }
      const auto kind = outcome == Outcome::Wrapped ? SearchEventKind::RestartAfterWrap
                                                    : SearchEventKind::RestartAfterVerification;
      trace_.events.push_back({kind, trace_.steps.size(), start});
    }

    const auto& after = coordinator_.ledger();
    trace_.ledger.messages = after.messages - ledger_before.messages;
    trace_.ledger.total_bits = after.total_bits - ledger_before.total_bits;
    trace_.ledger.per_query_bits = after.per_query_bits;
    return std::move(trace_);
  }

 private:
  enum class Outcome { Solved, Wrapped, Unverified };

  void begin_attempt(int restart) {
    restart_ = restart;
    query_index_ = 0;
    batch_.clear();
    consumed_.clear();
  }

  Outcome walk_once() {
    const UInt r = instance_.order;
    std::vector<Level> stack{{SetDescriptor{0, config_.n0}, 0}};

    while (true) {
      const SetDescriptor set = stack.back().set;
      const Verdict verdict = query(set);

      if (verdict == Verdict::True) {
        if (set.n == 0) {
          if (verifies(instance_, set.tau)) {
            trace_.result = DlpSolution{set.tau};
            return Outcome::Solved;
          }
          return Outcome::Unverified;
        }
        stack.push_back({SetDescriptor{set.tau, set.n - 1}, 0});
        continue;
      }

      // Slide; a level that has covered a full period hands control back to
      // its parent, which slides past the set it had confirmed.
      bool backtracked = false;
      while (true) {
        Level& level = stack.back();
        level.advance += level.set.size();
        level.set.tau = (level.set.tau + level.set.size()) % r;
        if (level.advance < r) break;
        if (stack.size() == 1) return Outcome::Wrapped;
        stack.pop_back();
        backtracked = true;
      }
      if (backtracked) {
        trace_.events.push_back({SearchEventKind::Backtrack, trace_.steps.size(), stack.back().set});
      }
    }
  }

  Verdict query(const SetDescriptor& set) {
    const bool batched = coordinator_.pool().mode == cluster::Mode::Parallel && set.n == config_.n0;
    if (!batched) {
      const cluster::Job job{set, config_.p, derive_seed(config_.seed, {static_cast<UInt>(restart_), query_index_++})};
      auto results = coordinator_.dispatch(std::span<const cluster::Job>(&job, 1));
      return record(set, job.seed, results.front(), true);
    }

    if (batch_.empty()) dispatch_top_level();
    for (std::size_t j = 0; j < batch_jobs_.size(); ++j) {
      if (batch_jobs_[j].set == set) {
        consumed_[j] = true;
        return record(set, batch_jobs_[j].seed, batch_[j], false);
      }
    }
    throw std::logic_error("top-level set missing from the batch");
  }

  void dispatch_top_level() {
    const auto plan = plan_queries(instance_.order, config_.n0);
    batch_jobs_.clear();
    for (const auto& set : plan.level0) {
      batch_jobs_.push_back({set, config_.p, derive_seed(config_.seed, {static_cast<UInt>(restart_), query_index_++})});
    }
    batch_ = coordinator_.dispatch(batch_jobs_);
    consumed_.assign(batch_.size(), false);
    for (const auto& jr : batch_) trace_.total_postselect_attempts += attempts(jr.result);
  }

  Verdict record(const SetDescriptor& set, std::uint64_t seed, const cluster::JobResult& jr, bool count) {
    if (count) trace_.total_postselect_attempts += attempts(jr.result);
    trace_.steps.push_back({set, jr.result.verdict, jr.worker, jr.result.trials, restart_, seed});
    return jr.result.verdict;
  }

  void flush_unused() {
    for (std::size_t j = 0; j < batch_.size(); ++j) {
      if (consumed_[j]) continue;
      const auto& jr = batch_[j];
      trace_.unused.push_back(
          {batch_jobs_[j].set, jr.result.verdict, jr.worker, jr.result.trials, restart_, batch_jobs_[j].seed});
    }
    batch_.clear();
    consumed_.clear();
  }

  static long attempts(const MembershipResult& result) {
    long total = 0;
    for (const auto& t : result.trials) total += t.postselect_attempts;
    return total;
  }

  const ProblemInstance& instance_;
  const SearchConfig& config_;
  cluster::Coordinator& coordinator_;
  SearchTrace trace_;
  int restart_ = 0;
  std::uint64_t query_index_ = 0;
  std::vector<cluster::Job> batch_jobs_;
  std::vector<cluster::JobResult> batch_;
  std::vector<bool> consumed_;
};

}  // namespace

SearchTrace solve(const ProblemInstance& instance, const SearchConfig& config, MembershipBackend& backend) {
  cluster::Coordinator coordinator(cluster::WorkerPool{1, config.seed, cluster::Mode::Serial}, backend,
                                   instance.order);
  return solve(instance, config, coordinator);
}

SearchTrace solve(const ProblemInstance& instance, const SearchConfig& config, cluster::Coordinator& coordinator) {
  return Walker(instance, config, coordinator).run();
}

std::size_t QueryPlan::parallel_depth(int workers) const {
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
  const auto k = static_cast<std::size_t>(workers);
  return (level0.size() + k - 1) / k;
}

QueryPlan plan_queries(UInt order, int n0) {
  if (n0 < 0 || n0 >= 63 || (UInt{1} << n0) >= order) throw std::invalid_argument("plan requires 2^n0 < r");
  QueryPlan plan;
  plan.order = order;
  plan.n0 = n0;
  const UInt size = UInt{1} << n0;
  for (UInt tau = 0; tau < order; tau += size) plan.level0.push_back(SetDescriptor{tau, n0});
  return plan;
}

}  // namespace dqdlp
