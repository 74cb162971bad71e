#pragma once

#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "dqdlp/membership.hpp"
#include "dqdlp/numt.hpp"

namespace dqdlp::cluster {

enum class Mode { Serial, Parallel };

/// K in-process workers. Job streams come from (seed_base, job index), so a
/// job's verdict does not depend on which worker ran it.
struct WorkerPool {
  int workers = 1;
  std::uint64_t seed_base = 0;
  Mode mode = Mode::Serial;

  std::uint64_t job_seed(std::uint64_t job_index) const { return derive_seed(seed_base, {job_index}); }
};

enum class MessageKind : std::uint8_t { Query, Verdict, Inconclusive };

/// The only thing that crosses a worker boundary. Integers only.
struct ClassicalMessage {
  MessageKind kind = MessageKind::Query;
  std::uint64_t tau = 0;
  std::int32_t n = 0;
  std::uint8_t verdict_bit = 0;
  std::uint32_t bits_on_wire = 0;

  bool operator==(const ClassicalMessage&) const = default;
};

static_assert(std::is_trivially_copyable_v<ClassicalMessage>);

/// Bits to name a set: ceil(log2 r) for tau plus ceil(log2 ceil(log2 r)) for n.
int query_payload_bits(UInt order);

inline constexpr int kVerdictBits = 1;

/// Allowance for message framing on top of the counted payload.
inline constexpr int kFramingAllowanceBits = 8;

ClassicalMessage make_query(const SetDescriptor& set, UInt order);
ClassicalMessage make_verdict(const SetDescriptor& set, Verdict verdict);

struct CommsLedger {
  std::uint64_t messages = 0;
  std::uint64_t total_bits = 0;
  int per_query_bits = 0;

  /// Adds one query/verdict exchange.
  void record(const ClassicalMessage& query, const ClassicalMessage& verdict);
};

/// ceil(log2 r) + ceil(log2 log2 r) + 1 + framing allowance.
int ledger_bound_bits(UInt order);

bool ledger_check(const CommsLedger& ledger, UInt order);

struct Job {
  SetDescriptor set;
  int p = 1;
  std::uint64_t seed = 0;
};

struct JobResult {
  MembershipResult result;
  int worker = 0;
  ClassicalMessage query;
  ClassicalMessage verdict;
};

/// Runs every job on some worker and returns results in submission order.
/// Job j runs on worker j mod K in parallel mode and on worker 0 in serial
/// mode. The ledger is written only by the calling thread.
std::vector<JobResult> dispatch(const WorkerPool& pool, std::span<const Job> jobs,
                                MembershipBackend& backend, UInt order, CommsLedger& ledger);

/// Owns the ledger for a sequence of dispatches against one backend.
class Coordinator {
 public:
  Coordinator(WorkerPool pool, MembershipBackend& backend, UInt order)
      : pool_(pool), backend_(&backend), order_(order) {}

  std::vector<JobResult> dispatch(std::span<const Job> jobs) {
    return cluster::dispatch(pool_, jobs, *backend_, order_, ledger_);
  }

  const WorkerPool& pool() const { return pool_; }
  const CommsLedger& ledger() const { return ledger_; }
  UInt order() const { return order_; }

 private:
  WorkerPool pool_;
  MembershipBackend* backend_;
  UInt order_;
  CommsLedger ledger_;
};

}  // namespace dqdlp::cluster
