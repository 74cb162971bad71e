#include "dqdlp/serialize.hpp"

namespace dqdlp {

using nlohmann::json;

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(SearchEventKind kind) {
  switch (kind) {
    case SearchEventKind::Backtrack: return "backtrack";
    case SearchEventKind::RestartAfterWrap: return "restart_after_wrap";
    case SearchEventKind::RestartAfterVerification: return "restart_after_verification";
  }
  return "unknown";
}

json to_json(const ProblemInstance& instance) {
  return {{"a", instance.generator}, {"b", instance.target}, {"N", instance.modulus},
          {"r", instance.order},     {"m", instance.register_bits}, {"epsilon", instance.epsilon}};
}

json to_json(const SetDescriptor& set) { return {{"tau", set.tau}, {"n", set.n}}; }

json to_json(const TrialOutcome& trial) {
  json j{{"status", trial.status == TrialStatus::PostSelected ? "post_selected" : "inconclusive"},
         {"fourth", trial.fourth_bit},
         {"attempts", trial.postselect_attempts},
         {"marker_hit", trial.marker_hit()}};
  j["third"] = trial.third_value ? json(*trial.third_value) : json(nullptr);
  return j;
}

json to_json(const ProbabilityProbe& probe) {
  return {{"p_fourth_1", probe.p_fourth_1},
          {"p_third_marker_given_fourth_1", probe.p_third_marker_given_fourth_1},
          {"p_joint_marker", probe.p_joint_marker}};
}

json to_json(const SearchStep& step) {
  json trials = json::array();
  for (const auto& t : step.trials) trials.push_back(to_json(t));
  return {{"tau", step.set.tau},       {"n", step.set.n},         {"verdict", to_string(step.verdict)},
          {"worker", step.worker},     {"restart", step.restart}, {"seed", step.seed},
          {"trials", std::move(trials)}};
}

json to_json(const SearchTrace& trace, UInt order) {
  json steps = json::array(), unused = json::array(), events = json::array();
  for (const auto& s : trace.steps) steps.push_back(to_json(s));
  for (const auto& s : trace.unused) unused.push_back(to_json(s));
  for (const auto& e : trace.events) {
    events.push_back({{"kind", to_string(e.kind)}, {"before_step", e.before_step}, {"resume", to_json(e.resume)}});
  }
  json j{{"steps", std::move(steps)},
         {"unused", std::move(unused)},
         {"events", std::move(events)},
         {"restarts", trace.restarts_used},
         {"attempts", trace.total_postselect_attempts},
         {"ledger", to_json(trace.ledger, order)},
         {"warnings", trace.warnings}};
  j["result"] = trace.result ? json{{"t", trace.result->t}} : json(nullptr);
  if (!trace.success()) j["failure"] = trace.failure;
  return j;
}

json to_json(const cluster::CommsLedger& ledger, UInt order) {
  return {{"messages", ledger.messages},
          {"total_bits", ledger.total_bits},
          {"per_query_bits", ledger.per_query_bits},
          {"bound", cluster::ledger_bound_bits(order)},
          {"pass", cluster::ledger_check(ledger, order)}};
}

json to_json(const analytics::BoundReport& report) {
  return {{"r", report.r}, {"n", report.n},           {"m", report.m},
          {"p", report.p}, {"d", report.d},           {"values", report.values},
          {"errors", report.errors}};
}

json to_json(const ShorOutcome& outcome) {
  json j{{"x_out", outcome.x_out}, {"y_out", outcome.y_out}, {"l", outcome.l}, {"tl", outcome.tl}};
  j["t_candidate"] = outcome.t_candidate ? json(*outcome.t_candidate) : json(nullptr);
  return j;
}

json trial_line(const SetDescriptor& set, int index, const TrialOutcome& trial) {
  json j{{"tau", set.tau}, {"n", set.n}, {"attempt", index}, {"fourth", trial.fourth_bit},
         {"marker_hit", trial.marker_hit()}};
  j["third"] = trial.third_value ? json(*trial.third_value) : json(nullptr);
  return j;
}

}  // namespace dqdlp
