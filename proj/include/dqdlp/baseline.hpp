#pragma once

#include <optional>
#include <utility>

#include "dqdlp/numt.hpp"
#include "dqdlp/qsim.hpp"
#include "dqdlp/random.hpp"

namespace dqdlp {

struct ShorOutcome {
  UInt x_out = 0;
  UInt y_out = 0;
  /// round(x_out r / 2^m) mod r and round(y_out r / 2^m) mod r.
  UInt l = 0;
  UInt tl = 0;
  /// Present only when gcd(l, r) = 1 and the candidate verifies.
  std::optional<UInt> t_candidate;
};

/// Registers 1 and 2 both m qubits wide, register 3 holding a^x b^y. The
/// ancilla qubit of the layout stays |0> and is not part of the algorithm.
RegisterLayout shor_layout(const ProblemInstance& instance);

/// H on registers 1 and 2, then z <- z a^x and z <- z b^y. With
/// `with_inverse_qft`, QFT^dagger on registers 1 and 2 as well.
StateVector shor_prepare(const ProblemInstance& instance, bool with_inverse_qft = true);

/// Decodes one (x_out, y_out) pair under known r.
ShorOutcome shor_decode(const ProblemInstance& instance, UInt x_out, UInt y_out);

/// One full run: prepare, measure registers 1 and 2, decode.
ShorOutcome shor_dlp_run(const ProblemInstance& instance, Rng& rng);

/// Same as shor_dlp_run on an already prepared state (copied per call).
ShorOutcome shor_dlp_run(const ProblemInstance& instance, const StateVector& prepared, Rng& rng);

/// (3m, 2m + n + 1). Throws std::invalid_argument unless 0 <= n < m - 1.
std::pair<int, int> qubit_report(int m, int n);
std::pair<int, int> qubit_report(const ProblemInstance& instance, int n);

}  // namespace dqdlp
