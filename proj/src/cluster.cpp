#include "dqdlp/cluster.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <thread>

namespace dqdlp::cluster {

int query_payload_bits(UInt order) {
  const int tau_bits = ceil_log2(order);
  const int n_bits = tau_bits <= 1 ? 0 : ceil_log2(static_cast<UInt>(tau_bits));
  return tau_bits + n_bits;
}

ClassicalMessage make_query(const SetDescriptor& set, UInt order) {
  ClassicalMessage msg;
  msg.kind = MessageKind::Query;
  msg.tau = set.tau;
  msg.n = set.n;
  msg.bits_on_wire = static_cast<std::uint32_t>(query_payload_bits(order));
  return msg;
}

ClassicalMessage make_verdict(const SetDescriptor& set, Verdict verdict) {
  ClassicalMessage msg;
  msg.kind = verdict == Verdict::Inconclusive ? MessageKind::Inconclusive : MessageKind::Verdict;
  msg.tau = set.tau;
  msg.n = set.n;
  msg.verdict_bit = verdict == Verdict::True ? 1 : 0;
  msg.bits_on_wire = kVerdictBits;
  return msg;
}

void CommsLedger::record(const ClassicalMessage& query, const ClassicalMessage& verdict) {
  messages += 2;
  total_bits += query.bits_on_wire + verdict.bits_on_wire;
  per_query_bits = std::max(per_query_bits, static_cast<int>(query.bits_on_wire + verdict.bits_on_wire));
}

int ledger_bound_bits(UInt order) {
  // ceil(log2 log2 r) == ceil(log2 ceil(log2 r)); zero when log2 r <= 1.
  const int log_r = ceil_log2(order);
  const int loglog_r = log_r <= 1 ? 0 : ceil_log2(static_cast<UInt>(log_r));
  return log_r + loglog_r + kVerdictBits + kFramingAllowanceBits;
}

bool ledger_check(const CommsLedger& ledger, UInt order) {
  if (ledger.messages % 2 != 0) return false;
  const std::uint64_t exchanges = ledger.messages / 2;
  if (ledger.total_bits > exchanges * static_cast<std::uint64_t>(std::max(ledger.per_query_bits, 0))) {
    return false;
  }
  return ledger.per_query_bits <= ledger_bound_bits(order);
}

std::vector<JobResult> dispatch(const WorkerPool& pool, std::span<const Job> jobs,
                                MembershipBackend& backend, UInt order, CommsLedger& ledger) {
  if (jobs.empty()) throw std::invalid_argument("dispatch needs at least one job");
  if (pool.workers < 1) throw std::invalid_argument("worker count must be >= 1");

  std::vector<JobResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());

  auto run_lane = [&](int worker, std::size_t first, std::size_t stride) {
    for (std::size_t j = first; j < jobs.size(); j += stride) {
      try {
        results[j].result = backend.query(jobs[j].set, jobs[j].p, jobs[j].seed);
        results[j].worker = worker;
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };

  const int lanes = pool.mode == Mode::Serial ? 1 : std::min<int>(pool.workers, static_cast<int>(jobs.size()));
  if (lanes == 1) {
    run_lane(0, 0, 1);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(static_cast<std::size_t>(lanes));
    for (int w = 0; w < lanes; ++w) {
      threads.emplace_back(run_lane, w, static_cast<std::size_t>(w), static_cast<std::size_t>(lanes));
    }
  }

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (errors[j]) std::rethrow_exception(errors[j]);
    results[j].query = make_query(jobs[j].set, order);
    results[j].verdict = make_verdict(jobs[j].set, results[j].result.verdict);
    ledger.record(results[j].query, results[j].verdict);
  }
  return results;
}

}  // namespace dqdlp::cluster
