#pragma once

#include <cstdint>
#include <optional>

#include "ria/dof_catalog.hpp"
#include "ria/rational.hpp"

namespace ria {

/// One parameter triple of the two-phase scheme: b symbols per user sent over
/// W1 sensing slots plus W2 alignment slots.
struct SchemeParams {
  std::int64_t symbols = 0;   // b
  std::int64_t w1 = 0;        // sensing-phase slots
  std::int64_t w2 = 0;        // alignment-phase slots

  std::int64_t total_slots() const { return w1 + w2; }
  Rational dof() const { return Rational(symbols, total_slots()); }

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

/// Per-constraint verdicts of the feasibility system.
struct ConstraintReport {
  bool c16_u_filter = false;      // b <= min(M W1, N W1 - 1)
  bool c17_intersection = false;  // 2 min(N W1 - b, b) - b >= 1
  bool c18_rank = false;          // 5 b <= 3 N W1
  bool c19_space = false;         // b <= N W2

  bool feasible() const {
    return c16_u_filter && c17_intersection && c18_rank && c19_space;
  }
};

ConstraintReport check_constraints(std::int64_t b, std::int64_t w1, std::int64_t w2,
                                   const AntennaConfig& cfg);

/// Smallest W2 satisfying the space constraint: ceil(b / N).
std::int64_t w2_star(std::int64_t b, int n);

/// Smallest W1 for which the sensing-phase constraints hold at w2_star(b, N);
/// empty if none exists within the search bound (does not happen for b >= 1).
std::optional<std::int64_t> w1_star(std::int64_t b, const AntennaConfig& cfg);

/// Closed-form optimum for antenna ratios in (1/2, 31/32]. Throws
/// std::domain_error naming the applicable region otherwise.
SchemeParams closed_form(const AntennaConfig& cfg);

struct SearchBounds {
  std::int64_t w1_max = 0;
  std::int64_t w2_max = 0;
};

/// Bounds that contain both closed-form solutions with margin.
SearchBounds default_bounds(const AntennaConfig& cfg);

/// Exhaustive maximization of b / (W1 + W2) over feasible integer triples,
/// W1 <= w1_max, W2 <= w2_max. Ties resolved toward smaller W, then smaller b,
/// then smaller W1, so the result is deterministic and independent of how the
/// search range is partitioned. Empty when no feasible triple exists in range.
std::optional<SchemeParams> brute_force(const AntennaConfig& cfg,
                                        const SearchBounds& bounds);

/// Single-threaded reference enumeration; must agree with brute_force exactly.
std::optional<SchemeParams> brute_force_serial(const AntennaConfig& cfg,
                                               const SearchBounds& bounds);

}  // namespace ria
