#include "ria/dof_catalog.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace ria {

namespace {

const Rational kThird{1, 3};
const Rational kHalf{1, 2};
const Rational kThreeFifths{3, 5};
const Rational kB2End{31, 32};
const Rational kCEnd{18, 13};

Rational min_rat(const Rational& a, const Rational& b) { return Rational::min(a, b); }

}  // namespace

const char* region_label(Region r) {
  switch (r) {
    case Region::A1: return "A1";
    case Region::A2: return "A2";
    case Region::B1: return "B1";
    case Region::B2: return "B2";
    case Region::C: return "C";
    case Region::D1: return "D1";
    case Region::D2: return "D2";
    case Region::E: return "E";
  }
  return "?";
}

RegionCase region_info(Region r) {
  switch (r) {
    case Region::A1: return {r, Rational(0), true, kThird, false};
    case Region::A2: return {r, kThird, true, kHalf, true};
    case Region::B1: return {r, kHalf, false, kThreeFifths, true};
    case Region::B2: return {r, kThreeFifths, false, kB2End, true};
    case Region::C: return {r, kB2End, false, kCEnd, false};
    case Region::D1: return {r, kCEnd, true, Rational(2), false};
    case Region::D2: return {r, Rational(2), true, Rational(3), false};
    case Region::E: return {r, Rational(3), true, std::nullopt, false};
  }
  throw std::logic_error("region_info: bad region");
}

Region classify_rho(const Rational& rho) {
  if (rho < Rational(0)) throw std::invalid_argument("classify_rho: rho must be >= 0");
  if (rho < kThird) return Region::A1;
  if (rho <= kHalf) return Region::A2;
  if (rho <= kThreeFifths) return Region::B1;
  if (rho <= kB2End) return Region::B2;
  if (rho < kCEnd) return Region::C;
  if (rho < Rational(2)) return Region::D1;
  if (rho < Rational(3)) return Region::D2;
  return Region::E;
}

Region classify(const AntennaConfig& cfg) { return classify_rho(cfg.rho()); }

const char* strategy_label(Strategy s) {
  switch (s) {
    case Strategy::ZfReceiver: return "zf";
    case Strategy::RiaTwoPhase: return "ria";
    case Strategy::ScaledSiso: return "scaled_siso";
    case Strategy::TwoUserTdma: return "two_user_tdma";
    case Strategy::KUserTwoPhase: return "kuser_two_phase";
  }
  return "?";
}

DofValue inner_bound(const AntennaConfig& cfg) {
  const Rational m{cfg.tx_antennas};
  const Rational n{cfg.rx_antennas};
  Rational value;
  Strategy via;
  switch (classify(cfg)) {
    case Region::A1:
      value = m;
      via = Strategy::ZfReceiver;
      break;
    case Region::A2:
      value = n / 3;
      via = Strategy::ZfReceiver;
      break;
    case Region::B1:
      value = m * n / (m + n);
      via = Strategy::RiaTwoPhase;
      break;
    case Region::B2:
      value = Rational(3, 8) * n;
      via = Strategy::RiaTwoPhase;
      break;
    case Region::C:
      value = Rational(12, 31) * min_rat(m, n);
      via = Strategy::ScaledSiso;
      break;
    case Region::D1:
      value = Rational(2, 3) * m * n / (m + n);
      via = Strategy::TwoUserTdma;
      break;
    case Region::D2:
      value = Rational(4, 9) * n;
      via = Strategy::TwoUserTdma;
      break;
    case Region::E:
      value = n / 2;
      via = Strategy::KUserTwoPhase;
      break;
  }
  return DofValue{value, value / n, strategy_label(via)};
}

std::optional<Rational> strategy_normalized(const Rational& rho, Strategy s) {
  switch (s) {
    case Strategy::ZfReceiver:
      return min_rat(rho, kThird);
    case Strategy::RiaTwoPhase:
      return rho <= kThreeFifths ? rho / (rho + 1) : Rational(3, 8);
    case Strategy::ScaledSiso:
      return Rational(12, 31) * min_rat(rho, Rational(1));
    case Strategy::TwoUserTdma:
      return rho < Rational(2) ? Rational(2, 3) * rho / (rho + 1) : Rational(4, 9);
    case Strategy::KUserTwoPhase:
      if (rho < Rational(3)) return std::nullopt;
      return kHalf;
  }
  return std::nullopt;
}

std::optional<DofValue> strategy_dof(const AntennaConfig& cfg, Strategy s) {
  const auto normalized = strategy_normalized(cfg.rho(), s);
  if (!normalized) return std::nullopt;
  const Rational value = *normalized * cfg.rx_antennas;
  return DofValue{value, *normalized, strategy_label(s)};
}

Rational inner_normalized(const Rational& rho) {
  switch (classify_rho(rho)) {
    case Region::A1: return rho;
    case Region::A2: return kThird;
    case Region::B1: return rho / (rho + 1);
    case Region::B2: return Rational(3, 8);
    case Region::C: return Rational(12, 31) * min_rat(rho, Rational(1));
    case Region::D1: return Rational(2, 3) * rho / (rho + 1);
    case Region::D2: return Rational(4, 9);
    case Region::E: return kHalf;
  }
  throw std::logic_error("inner_normalized: bad region");
}

bool outer_bound_interpolated(const Rational& rho) {
  return rho > Rational(4, 5) && rho < Rational(6, 5);
}

Rational outer_bound_normalized(const Rational& rho) {
  if (rho < Rational(0))
    throw std::invalid_argument("outer_bound_normalized: rho must be >= 0");
  if (rho <= kThird) return rho;
  if (rho <= kHalf) return kThird;
  if (rho <= kThreeFifths) return Rational(2, 3) * rho;
  if (rho <= Rational(2, 3)) return Rational(2, 5);
  if (rho <= Rational(5, 7)) return Rational(3, 5) * rho;
  if (rho <= Rational(3, 4)) return Rational(3, 7);
  if (rho <= Rational(7, 9)) return Rational(4, 7) * rho;
  if (rho <= Rational(4, 5)) return Rational(4, 9);
  // Straight line through (4/5, 4/9) and (6/5, 6/11): (25 rho + 24) / 99.
  if (rho < Rational(6, 5)) return (Rational(25) * rho + 24) / 99;
  return Rational(6, 11);
}

namespace {

SweepRow make_row(const Rational& rho) {
  SweepRow row;
  row.rho = rho;
  row.inner = inner_normalized(rho);
  row.outer = outer_bound_normalized(rho);
  row.outer_interpolated = outer_bound_interpolated(rho);
  row.region = classify_rho(rho);
  for (std::size_t k = 0; k < kAllStrategies.size(); ++k)
    row.strategies[k] = strategy_normalized(rho, kAllStrategies[k]);
  return row;
}

}  // namespace

std::vector<SweepRow> sweep_rho(const Rational& lo, const Rational& hi, int steps) {
  if (!(lo < hi)) throw std::invalid_argument("sweep_rho: need rho_min < rho_max");
  if (lo < Rational(0)) throw std::invalid_argument("sweep_rho: rho must be >= 0");
  if (steps < 2) throw std::invalid_argument("sweep_rho: need at least 2 steps");

  std::vector<Rational> grid;
  grid.reserve(static_cast<std::size_t>(steps) + 8);
  for (int k = 0; k < steps; ++k) {
    // lo + k (hi - lo) / (steps - 1), exactly.
    grid.push_back((lo * (steps - 1 - k) + hi * k) / (steps - 1));
  }
  // Region breakpoints are always present so no kink is missed by the grid.
  for (const Rational& bp : {kThird, kHalf, kThreeFifths, kB2End, kCEnd,
                             Rational(2), Rational(3)}) {
    if (lo <= bp && bp <= hi) grid.push_back(bp);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const Rational& rho : grid) rows.push_back(make_row(rho));
  return rows;
}

std::vector<SweepRow> sweep_configs(const std::vector<AntennaConfig>& configs) {
  std::vector<SweepRow> rows;
  rows.reserve(configs.size());
  for (const AntennaConfig& cfg : configs) rows.push_back(make_row(cfg.rho()));
  std::sort(rows.begin(), rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.rho < b.rho; });
  return rows;
}

std::string format_decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "rho_num,rho_den,rho,inner,outer,region";
  for (Strategy s : kAllStrategies) out << ',' << strategy_label(s);
  out << ",outer_interpolated\n";
  for (const SweepRow& row : rows) {
    out << row.rho.num() << ',' << row.rho.den() << ','
        << format_decimal(row.rho.to_double()) << ','
        << format_decimal(row.inner.to_double()) << ','
        << format_decimal(row.outer.to_double()) << ',' << region_label(row.region);
    for (const auto& s : row.strategies) {
      out << ',';
      if (s) out << format_decimal(s->to_double());
    }
    out << ',' << (row.outer_interpolated ? 1 : 0) << '\n';
  }
  return out.str();
}

namespace {

nlohmann::json rational_json(const Rational& r) {
  return {{"num", r.num()}, {"den", r.den()}, {"value", r.to_double()}};
}

}  // namespace

nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = {{"schema", 1}, {"command", "regions"}};
  nlohmann::json jrows = nlohmann::json::array();
  for (const SweepRow& row : rows) {
    nlohmann::json jr = {
        {"rho", rational_json(row.rho)},
        {"inner", rational_json(row.inner)},
        {"outer", rational_json(row.outer)},
        {"outer_interpolated", row.outer_interpolated},
        {"region", region_label(row.region)},
    };
    nlohmann::json strategies;
    for (std::size_t k = 0; k < kAllStrategies.size(); ++k) {
      const char* name = strategy_label(kAllStrategies[k]);
      strategies[name] =
          row.strategies[k] ? rational_json(*row.strategies[k]) : nlohmann::json();
    }
    jr["strategies"] = strategies;
    jrows.push_back(std::move(jr));
  }
  out["rows"] = std::move(jrows);
  return out;
}

}  // namespace ria
