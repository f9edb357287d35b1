#include "ria/optimizer.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace ria {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// Strictly-better-candidate order: larger dof, then smaller W, smaller b,
// smaller W1.
bool better(const SchemeParams& a, const SchemeParams& b) {
  const Rational da = a.dof();
  const Rational db = b.dof();
  if (da != db) return db < da;
  if (a.total_slots() != b.total_slots()) return a.total_slots() < b.total_slots();
  if (a.symbols != b.symbols) return a.symbols < b.symbols;
  return a.w1 < b.w1;
}

// Best feasible triple with W1 fixed; used by both enumeration drivers.
std::optional<SchemeParams> best_at_w1(std::int64_t w1, const AntennaConfig& cfg,
                                       std::int64_t w2_max) {
  const std::int64_t m = cfg.tx_antennas;
  const std::int64_t n = cfg.rx_antennas;
  const std::int64_t b_max = std::min(m * w1, n * w1 - 1);
  std::optional<SchemeParams> best;
  for (std::int64_t b = 1; b <= b_max; ++b) {
    for (std::int64_t w2 = 1; w2 <= w2_max; ++w2) {
      if (!check_constraints(b, w1, w2, cfg).feasible()) continue;
      SchemeParams candidate{b, w1, w2};
      if (!best || better(candidate, *best)) best = candidate;
      break;  // constraints only relax as W2 grows; larger W2 can't beat this dof
    }
  }
  return best;
}

}  // namespace

ConstraintReport check_constraints(std::int64_t b, std::int64_t w1, std::int64_t w2,
                                   const AntennaConfig& cfg) {
  if (b < 1 || w1 < 1 || w2 < 1)
    throw std::invalid_argument("check_constraints: b, W1, W2 must be >= 1");
  const std::int64_t m = cfg.tx_antennas;
  const std::int64_t n = cfg.rx_antennas;
  ConstraintReport report;
  report.c16_u_filter = b <= std::min(m * w1, n * w1 - 1);
  report.c17_intersection = 2 * std::min(n * w1 - b, b) - b >= 1;
  report.c18_rank = 5 * b <= 3 * n * w1;
  report.c19_space = b <= n * w2;
  return report;
}

std::int64_t w2_star(std::int64_t b, int n) {
  if (b < 1 || n < 1) throw std::invalid_argument("w2_star: b and N must be >= 1");
  return ceil_div(b, n);
}

std::optional<std::int64_t> w1_star(std::int64_t b, const AntennaConfig& cfg) {
  if (b < 1) throw std::invalid_argument("w1_star: b must be >= 1");
  const std::int64_t m = cfg.tx_antennas;
  const std::int64_t n = cfg.rx_antennas;
  // Ceiling of max(b/M, (b+1)/N, (3b+1)/(2N), (5/3)(b/N)); all four lower
  // bounds are monotone in W1, so this candidate is the minimum when valid.
  std::int64_t candidate = std::max({ceil_div(b, m), ceil_div(b + 1, n),
                                     ceil_div(3 * b + 1, 2 * n),
                                     ceil_div(5 * b, 3 * n)});
  const std::int64_t w2 = w2_star(b, cfg.rx_antennas);
  const std::int64_t bound = candidate + 4 * b + 4;
  for (std::int64_t w1 = candidate; w1 <= bound; ++w1) {
    const ConstraintReport r = check_constraints(b, w1, w2, cfg);
    if (r.c16_u_filter && r.c17_intersection && r.c18_rank) return w1;
  }
  return std::nullopt;
}

SchemeParams closed_form(const AntennaConfig& cfg) {
  const Rational rho = cfg.rho();
  if (!(Rational(1, 2) < rho && rho <= Rational(31, 32))) {
    throw std::domain_error(
        "closed_form: rho = " + rho.str() + " lies in region " +
        region_label(classify(cfg)) +
        "; the closed form covers only B1/B2 (1/2 < rho <= 31/32)");
  }
  const std::int64_t m = cfg.tx_antennas;
  const std::int64_t n = cfg.rx_antennas;
  if (rho <= Rational(3, 5)) return SchemeParams{m * n, n, m};
  return SchemeParams{3 * n, 5, 3};
}

SearchBounds default_bounds(const AntennaConfig& cfg) {
  return SearchBounds{3 * static_cast<std::int64_t>(cfg.rx_antennas) + 5,
                      3 * static_cast<std::int64_t>(cfg.tx_antennas) + 5};
}

std::optional<SchemeParams> brute_force_serial(const AntennaConfig& cfg,
                                               const SearchBounds& bounds) {
  if (bounds.w1_max < 1 || bounds.w2_max < 1)
    throw std::invalid_argument("brute_force: search bounds must be >= 1");
  std::optional<SchemeParams> best;
  for (std::int64_t w1 = 1; w1 <= bounds.w1_max; ++w1) {
    const auto candidate = best_at_w1(w1, cfg, bounds.w2_max);
    if (candidate && (!best || better(*candidate, *best))) best = candidate;
  }
  return best;
}

std::optional<SchemeParams> brute_force(const AntennaConfig& cfg,
                                        const SearchBounds& bounds) {
  if (bounds.w1_max < 1 || bounds.w2_max < 1)
    throw std::invalid_argument("brute_force: search bounds must be >= 1");
  const int count = static_cast<int>(bounds.w1_max);
  std::vector<std::optional<SchemeParams>> per_w1(count);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    per_w1[i] = best_at_w1(i + 1, cfg, bounds.w2_max);
  }
  // Deterministic combine: the total order on candidates makes the result
  // independent of how W1 values were distributed across threads.
  std::optional<SchemeParams> best;
  for (const auto& candidate : per_w1) {
    if (candidate && (!best || better(*candidate, *best))) best = candidate;
  }
  return best;
}

}  // namespace ria
