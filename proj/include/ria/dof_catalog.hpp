#pragma once

#include <array>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ria/rational.hpp"

namespace ria {

/// Antenna counts of the symmetric 3-user channel: M transmit, N receive.
struct AntennaConfig {
  int tx_antennas;  // M
  int rx_antennas;  // N

  AntennaConfig(int m, int n) : tx_antennas(m), rx_antennas(n) {
    if (m < 1 || n < 1)
      throw std::invalid_argument("AntennaConfig: antenna counts must be >= 1");
  }

  /// rho = M/N in lowest terms.
  Rational rho() const { return Rational(tx_antennas, rx_antennas); }
};

/// The eight antenna-ratio regions; their intervals tile [0, inf).
enum class Region { A1, A2, B1, B2, C, D1, D2, E };

inline constexpr std::array<Region, 8> kAllRegions = {
    Region::A1, Region::A2, Region::B1, Region::B2,
    Region::C,  Region::D1, Region::D2, Region::E};

struct RegionCase {
  Region region;
  Rational lo;
  bool lo_closed;
  std::optional<Rational> hi;  // empty for the unbounded last region
  bool hi_closed;
};

const char* region_label(Region r);
RegionCase region_info(Region r);

/// Region whose rho-interval contains the given ratio (rho >= 0).
Region classify_rho(const Rational& rho);
Region classify(const AntennaConfig& cfg);

/// The five transmission strategies whose best value forms the inner bound.
enum class Strategy {
  ZfReceiver,     // receive zero-forcing, CSIR only
  RiaTwoPhase,    // two-phase retrospective alignment
  ScaledSiso,     // SISO three-phase scheme on min(M,N) antennas
  TwoUserTdma,    // two active users per period, 2-user scheme inside
  KUserTwoPhase,  // K-user two-phase scheme, needs rho >= 3
};

inline constexpr std::array<Strategy, 5> kAllStrategies = {
    Strategy::ZfReceiver, Strategy::RiaTwoPhase, Strategy::ScaledSiso,
    Strategy::TwoUserTdma, Strategy::KUserTwoPhase};

const char* strategy_label(Strategy s);

/// DoF per user, both raw and normalized by N, with the achieving strategy.
struct DofValue {
  Rational value;       // d
  Rational normalized;  // d / N
  std::string strategy;
};

/// Best achievable DoF per user for the configuration (exact rational).
DofValue inner_bound(const AntennaConfig& cfg);

/// One strategy's achievable DoF; empty when inapplicable for this config.
std::optional<DofValue> strategy_dof(const AntennaConfig& cfg, Strategy s);

/// Normalized inner bound d/N as a function of rho alone.
Rational inner_normalized(const Rational& rho);

/// Normalized value of one strategy as a function of rho; empty if inapplicable.
std::optional<Rational> strategy_normalized(const Rational& rho, Strategy s);

/// Piecewise outer bound on d/N. All pieces are exact rationals; the segment
/// on (4/5, 6/5) is a straight line through its endpoints and is reported as
/// interpolated in sweep output.
Rational outer_bound_normalized(const Rational& rho);
bool outer_bound_interpolated(const Rational& rho);

/// One evaluated point of the region sweep.
struct SweepRow {
  Rational rho;
  Rational inner;  // normalized
  Rational outer;  // normalized
  bool outer_interpolated;
  Region region;
  std::array<std::optional<Rational>, 5> strategies;  // by kAllStrategies order
};

/// Rational grid of `steps` points on [lo, hi], augmented with the region
/// breakpoints that fall inside the interval, sorted and deduplicated.
std::vector<SweepRow> sweep_rho(const Rational& lo, const Rational& hi, int steps);
std::vector<SweepRow> sweep_configs(const std::vector<AntennaConfig>& configs);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows);

/// Fixed 12-significant-digit decimal used at every text/CSV boundary.
std::string format_decimal(double v);

}  // namespace ria
