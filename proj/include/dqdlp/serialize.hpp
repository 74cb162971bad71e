#pragma once

#include <string>

#include <json.hpp>

#include "dqdlp/analytics.hpp"
#include "dqdlp/baseline.hpp"
#include "dqdlp/cluster.hpp"
#include "dqdlp/membership.hpp"
#include "dqdlp/search.hpp"

namespace dqdlp {

/// Top-level "schema" value of every document the CLI prints.
inline constexpr const char* kSchema = "dqdlp/1";

std::string to_string(Verdict verdict);
std::string to_string(SearchEventKind kind);

nlohmann::json to_json(const ProblemInstance& instance);
nlohmann::json to_json(const SetDescriptor& set);
nlohmann::json to_json(const TrialOutcome& trial);
nlohmann::json to_json(const ProbabilityProbe& probe);
nlohmann::json to_json(const SearchStep& step);

/// {steps, unused, events, result, failure, restarts, attempts, ledger, warnings}
nlohmann::json to_json(const SearchTrace& trace, UInt order);

/// {messages, total_bits, per_query_bits, bound, pass}
nlohmann::json to_json(const cluster::CommsLedger& ledger, UInt order);

nlohmann::json to_json(const analytics::BoundReport& report);
nlohmann::json to_json(const ShorOutcome& outcome);

/// One line per trial: {tau, n, attempt, fourth, third, marker_hit}.
nlohmann::json trial_line(const SetDescriptor& set, int index, const TrialOutcome& trial);

}  // namespace dqdlp
