#pragma once

// Continued fractions, the best-approximation inequality and growth
// diagnostics for the denominators q_n.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace calabi {

struct ContinuedFraction {
  /// Exact partial quotients and convergents while they fit in 64 bits.
  std::vector<std::int64_t> a, p, q;
  /// log a_n and log q_n for every computed n, including terms past overflow.
  std::vector<double> log_a, log_q;
  /// The expansion of a rational ended exactly.
  bool terminated = false;
  /// Integer convergents stopped at the overflow guard.
  bool overflowed = false;
  /// Expansion of a float was cut at the precision horizon.
  bool depth_unreliable = false;
  std::vector<std::string> warnings;

  std::size_t depth() const { return log_q.size(); }
  std::size_t exact_terms() const { return q.size(); }
  /// q_n as a double (from log q_n when the integer overflowed).
  double q_value(std::size_t n) const;
  /// Value of the finite fraction [a_0; a_1, ..., a_n].
  double convergent(std::size_t n) const;
};

/// Floor/reciprocal recursion. Stops (flagged) once 64 eps q_n^2 >= 1 or when the
/// remainder vanishes at working precision.
ContinuedFraction continued_fraction(double alpha, int depth);

/// Convergents of a given quotient sequence a_0, a_1, ... (a_i >= 1 for i >= 1).
ContinuedFraction from_quotients(std::span<const std::int64_t> a);

/// Synthetic sequence a_0 = 0, a_{n+1} = 2^{q_n}. The exact quotient is
/// capped at 2^62; log a_{n+1} = q_n log 2 is kept exactly.
ContinuedFraction synthetic_doubly_exponential(int depth);

struct BestApproxEntry {
  std::size_t n = 0;
  bool holds = false;
  /// False when the check is vacuous (no q_{n+1}) or beyond reliable precision.
  bool reliable = false;
};

/// 1/(q_n (q_n + q_{n+1})) <= (-1)^n (alpha - p_n/q_n) <= 1/(q_n q_{n+1}).
std::vector<BestApproxEntry> best_approx_check(const ContinuedFraction& cf, double alpha);

struct Classification {
  /// log(q_{n+1}) / q_n and the running sums of that sequence.
  std::vector<double> ratios;
  std::vector<double> running_sum;
  std::vector<std::string> labels;
  std::string caveat;
};

/// Heuristic growth labels from finite data; never a claim about limits.
Classification classify(const ContinuedFraction& cf);

}  // namespace calabi
