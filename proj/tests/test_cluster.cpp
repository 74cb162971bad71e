#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <stdexcept>
#include <type_traits>

#include "dqdlp/cluster.hpp"
#include "dqdlp/search.hpp"

using namespace dqdlp;
using namespace dqdlp::cluster;

namespace {

template <typename T>
constexpr bool integral_like = std::is_integral_v<T> || std::is_enum_v<T>;

// Every field of a message is an integer or an integer-backed enum.
constexpr bool message_is_integers_only() {
  using M = ClassicalMessage;
  M msg{};
  auto [kind, tau, n, verdict_bit, bits] = msg;
  return integral_like<decltype(kind)> && integral_like<decltype(tau)> && integral_like<decltype(n)> &&
         integral_like<decltype(verdict_bit)> && integral_like<decltype(bits)>;
}
static_assert(message_is_integers_only());
static_assert(sizeof(ClassicalMessage) <= 32);

const ProblemInstance& worked() {
  static const auto inst = ProblemInstance::make(3, 12, 71);
  return inst;
}

std::vector<Job> level0_jobs(std::uint64_t seed) {
  std::vector<Job> jobs;
  const auto plan = plan_queries(35, 3);
  for (std::size_t j = 0; j < plan.level0.size(); ++j) jobs.push_back({plan.level0[j], 2, derive_seed(seed, {j})});
  return jobs;
}

class Throwing final : public MembershipBackend {
 public:
  MembershipResult query(const SetDescriptor& set, int, std::uint64_t) override {
    if (set.tau == 16) throw std::runtime_error("boom");
    return {};
  }
};

}  // namespace

TEST_CASE("bit accounting") {
  CHECK(query_payload_bits(35) == 9);
  CHECK(query_payload_bits(35) + kVerdictBits == 10);
  CHECK(ledger_bound_bits(35) == 18);
  CHECK(ledger_bound_bits(2) == 10);
  CHECK(ledger_bound_bits(4096) == 12 + 4 + 1 + 8);

  const auto q = make_query({20, 3}, 35);
  CHECK(q.kind == MessageKind::Query);
  CHECK(q.bits_on_wire == 9);
  const auto v = make_verdict({20, 3}, Verdict::True);
  CHECK(v.kind == MessageKind::Verdict);
  CHECK(v.verdict_bit == 1);
  CHECK(v.bits_on_wire == 1);
  CHECK(make_verdict({20, 3}, Verdict::Inconclusive).kind == MessageKind::Inconclusive);
}

TEST_CASE("ledger_check") {
  CommsLedger ledger;
  ledger.record(make_query({0, 0}, 2), make_verdict({0, 0}, Verdict::False));
  CHECK(ledger_check(ledger, 2));

  CommsLedger padded;
  auto q = make_query({0, 3}, 35);
  q.bits_on_wire = 64;
  padded.record(q, make_verdict({0, 3}, Verdict::False));
  CHECK_FALSE(ledger_check(padded, 35));

  CommsLedger inconsistent;
  inconsistent.messages = 2;
  inconsistent.total_bits = 500;
  inconsistent.per_query_bits = 10;
  CHECK_FALSE(ledger_check(inconsistent, 35));
  inconsistent.messages = 3;
  CHECK_FALSE(ledger_check(inconsistent, 35));
}

TEST_CASE("five top-level jobs exchange ten messages") {
  SimulatedBackend backend(worked());
  Coordinator coord({1, 0, Mode::Serial}, backend, 35);
  const auto jobs = level0_jobs(1);
  const auto results = coord.dispatch(jobs);
  CHECK(results.size() == 5);
  CHECK(coord.ledger().messages == 10);
  CHECK(coord.ledger().per_query_bits == 10);
  CHECK(coord.ledger().total_bits == 50);
  CHECK(ledger_check(coord.ledger(), 35));
  for (std::size_t j = 0; j < results.size(); ++j) {
    CHECK(results[j].query.tau == jobs[j].set.tau);
    CHECK(results[j].verdict.tau == jobs[j].set.tau);
    CHECK(results[j].worker == 0);
  }
}

TEST_CASE("results do not depend on the worker count") {
  SimulatedBackend backend(worked());
  auto jobs = level0_jobs(9);
  for (const auto& j : level0_jobs(10)) jobs.push_back(j);
  CommsLedger l1, l4;
  const auto serial = dispatch({1, 0, Mode::Serial}, jobs, backend, 35, l1);
  const auto parallel = dispatch({4, 0, Mode::Parallel}, jobs, backend, 35, l4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    CHECK(serial[j].result == parallel[j].result);
    CHECK(serial[j].query == parallel[j].query);
    CHECK(serial[j].verdict == parallel[j].verdict);
    CHECK(parallel[j].worker == static_cast<int>(j % 4));
  }
  CHECK(l1.messages == l4.messages);
  CHECK(l1.total_bits == l4.total_bits);
}

TEST_CASE("serial mode keeps everything on worker 0") {
  SimulatedBackend backend(worked());
  CommsLedger ledger;
  for (const auto& r : dispatch({4, 0, Mode::Serial}, level0_jobs(2), backend, 35, ledger)) CHECK(r.worker == 0);
}

TEST_CASE("dispatch errors") {
  SimulatedBackend backend(worked());
  CommsLedger ledger;
  CHECK_THROWS(dispatch({1, 0, Mode::Serial}, std::vector<Job>{}, backend, 35, ledger));
  CHECK_THROWS(dispatch({0, 0, Mode::Parallel}, level0_jobs(1), backend, 35, ledger));
  Throwing bad;
  CHECK_THROWS_WITH(dispatch({3, 0, Mode::Parallel}, level0_jobs(1), bad, 35, ledger), "boom");
}

TEST_CASE("parallel solve traces match across worker counts") {
  SimulatedBackend backend(worked());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SearchConfig cfg;
    cfg.seed = seed;
    Coordinator one({1, seed, Mode::Parallel}, backend, 35);
    Coordinator four({4, seed, Mode::Parallel}, backend, 35);
    const auto a = solve(worked(), cfg, one);
    const auto b = solve(worked(), cfg, four);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
      CHECK(a.steps[i].set == b.steps[i].set);
      CHECK(a.steps[i].verdict == b.steps[i].verdict);
      CHECK(a.steps[i].trials == b.steps[i].trials);
    }
    CHECK(a.result == b.result);
    CHECK(a.events == b.events);
    CHECK(a.ledger.messages == b.ledger.messages);
    CHECK(ledger_check(b.ledger, 35));
  }
}

TEST_CASE("wall-clock speedup (informational)") {
  // Needs real cores; only reported.
  SimulatedBackend backend(worked());
  std::vector<Job> jobs;
  for (std::uint64_t j = 0; j < 16; ++j) jobs.push_back({SetDescriptor{(j % 5) * 8, 3}, 400, j});
  for (const auto& j : jobs) backend.prepared(j.set);
  auto time = [&](const WorkerPool& pool) {
    CommsLedger ledger;
    const auto start = std::chrono::steady_clock::now();
    dispatch(pool, jobs, backend, 35, ledger);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const double t1 = time({1, 0, Mode::Serial});
  const double t4 = time({4, 0, Mode::Parallel});
  MESSAGE("K=1 " << t1 << " s, K=4 " << t4 << " s, ratio " << t4 / t1);
  CHECK(t4 > 0.0);
}
