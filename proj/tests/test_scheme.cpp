#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ria/scheme.hpp"

using ria::AntennaConfig;
using ria::ComplexMatrix;
using ria::Rng;
using ria::SchemeParams;
using ria::Subspace;

namespace {

const AntennaConfig kCfg35(3, 5);
const SchemeParams kParams35{15, 5, 3};
const AntennaConfig kCfg59(5, 9);
const SchemeParams kParams59{45, 9, 5};

}  // namespace

TEST_CASE("draw_channels: shapes, determinism, slot freshness") {
  const Rng rng(9);
  const auto ch = ria::draw_channels(kCfg35, kParams35, rng);
  CHECK(ch.slots.size() == 72);  // 3 x 3 x 8
  for (const auto& h : ch.slots) {
    CHECK(h.rows() == 5);
    CHECK(h.cols() == 3);
  }

  const auto again = ria::draw_channels(kCfg35, kParams35, Rng(9));
  for (std::size_t k = 0; k < ch.slots.size(); ++k) CHECK(ch.slots[k] == again.slots[k]);

  CHECK(ch.channel(0, 0, 0) != ch.channel(0, 0, 1));
  CHECK(ch.channel(0, 1, 0) != ch.channel(1, 0, 0));
  CHECK(ch.channel(2, 2, 7) != ch.channel(2, 2, 6));
}

TEST_CASE("build_phase1: full column rank stacks, infeasible b rejected") {
  const auto p35 = ria::build_phase1(kCfg35, kParams35, Rng(1));
  for (const auto& v : p35.stacked) {
    CHECK(v.rows() == 15);
    CHECK(v.cols() == 15);
    CHECK(ria::rank(v) == 15);
  }

  const auto p59 = ria::build_phase1(kCfg59, kParams59, Rng(2));
  CHECK(p59.stacked[0].rows() == 45);
  CHECK(ria::rank(p59.stacked[0]) == 45);

  CHECK_THROWS_AS(ria::build_phase1(AntennaConfig(1, 2), SchemeParams{2, 1, 1}, Rng(3)),
                  std::invalid_argument);
}

TEST_CASE("receiver_reports: filter shapes, residuals, subspace dims") {
  const Rng rng(11);
  const auto ch = ria::draw_channels(kCfg35, kParams35, rng);
  const auto p1 = ria::build_phase1(kCfg35, kParams35, rng);
  const auto reports = ria::receiver_reports(ch, p1, 1e-10);

  for (int rx = 0; rx < 3; ++rx) {
    for (int tx = 0; tx < 3; ++tx) {
      if (tx == rx) continue;
      const auto& tap = reports[rx].tap(tx);
      CHECK(tap.u_filter.rows() == 10);  // N W1 - b
      CHECK(tap.u_filter.cols() == 25);
      CHECK(tap.t_matrix.rows() == 10);
      CHECK(tap.t_matrix.cols() == 15);
      CHECK(tap.s.dim() == 10);  // min(N W1 - b, b)

      // The filter annihilates the other interferer's sensing-phase signal.
      const int other = 3 - rx - tx;
      const ComplexMatrix sensed_other =
          ria::phase_product(ch, rx, other, 1, p1.stacked[other]);
      CHECK((tap.u_filter * sensed_other).norm() <= 1e-10 * sensed_other.norm());

      // Stored T equals the recomputed product.
      const ComplexMatrix sensed = ria::phase_product(ch, rx, tx, 1, p1.stacked[tx]);
      CHECK((tap.t_matrix - tap.u_filter * sensed).norm() <=
            1e-12 * tap.t_matrix.norm());
    }
  }

  // A configuration with more receive dimensions: dim = 81 - 45 = 36.
  const Rng rng59(12);
  const auto ch59 = ria::draw_channels(kCfg59, kParams59, rng59);
  const auto p59 = ria::build_phase1(kCfg59, kParams59, rng59);
  const auto rep59 = ria::receiver_reports(ch59, p59, 1e-10);
  CHECK(rep59[0].tap(1).s.dim() == 36);

  CHECK_THROWS_AS(ria::receiver_reports(ch, ria::build_phase1(kCfg35, {15, 3, 5}, rng),
                                        1e-10),
                  std::invalid_argument);  // b >= N W1 leaves no annihilator
}

TEST_CASE("transmitter_intersection: generic dimension law") {
  const Rng rng(13);
  const auto ch = ria::draw_channels(kCfg35, kParams35, rng);
  const auto p1 = ria::build_phase1(kCfg35, kParams35, rng);
  const auto reports = ria::receiver_reports(ch, p1, 1e-8);
  for (int tx = 0; tx < 3; ++tx) {
    const Subspace s = ria::transmitter_intersection(reports, tx, 1e-8);
    CHECK(s.dim() == 5);  // 2 min(N W1 - b, b) - b = 2*10 - 15
    CHECK(s.ambient_dim == 15);
  }

  const Rng rng59(14);
  const auto ch59 = ria::draw_channels(kCfg59, kParams59, rng59);
  const auto p59 = ria::build_phase1(kCfg59, kParams59, rng59);
  const auto rep59 = ria::receiver_reports(ch59, p59, 1e-8);
  CHECK(ria::transmitter_intersection(rep59, 0, 1e-8).dim() == 27);  // 2*36 - 45
}

TEST_CASE("transmitter_intersection: equal sensed subspaces come back unchanged") {
  Rng rng(15);
  const Subspace s = ria::row_space(ria::random_gaussian(4, 9, rng));
  std::array<ria::ReceiverReport, 3> synthetic{};
  synthetic[1].taps[0].s = s;  // receivers 1 and 2 both sensed the same span
  synthetic[2].taps[0].s = s;
  const Subspace meet = ria::transmitter_intersection(synthetic, 0, 1e-8);
  CHECK(meet.dim() == s.dim());
  CHECK(ria::contains(s, meet.basis, 1e-8));
  CHECK(ria::contains(meet, s.basis, 1e-8));
}

TEST_CASE("build_phase2: cyclic fill keeps every slot active") {
  Rng rng(17);
  const Subspace s = ria::row_space(ria::random_gaussian(5, 15, rng));  // dim 5

  const auto design = ria::build_phase2(s, kCfg35, kParams35, 1.0);
  CHECK(design.row_allocation == std::vector<int>{3, 3, 3});
  CHECK(design.per_slot.size() == 3);
  for (const auto& slot : design.per_slot) {
    CHECK(slot.rows() == 3);
    CHECK(slot.cols() == 15);
    CHECK(slot.norm() > 0.0);  // no silent slots
    CHECK(ria::contains(s, slot, 1e-10));
  }
  // Repeats add no rank: the stack spans exactly dim(S_i).
  CHECK(ria::rank(design.stacked()) == 5);

  // dim(S_i) above the slot budget: first M W2 rows go out, none repeated.
  const Subspace wide = ria::row_space(ria::random_gaussian(27, 45, rng));
  const auto truncated = ria::build_phase2(wide, kCfg59, kParams59, 1.0);
  CHECK(truncated.row_allocation == std::vector<int>{5, 5, 5, 5, 5});
  CHECK(truncated.rows_used() == 25);
  CHECK(ria::rank(truncated.stacked()) == 25);
  for (int slot = 0; slot < 5; ++slot)
    CHECK(truncated.per_slot[slot] == wide.basis.middleRows(5 * slot, 5));

  // dim(S_i) below M: the same rows repeat inside each slot's budget.
  const Subspace narrow = ria::row_space(ria::random_gaussian(2, 15, rng));
  const auto repeated = ria::build_phase2(narrow, kCfg35, kParams35, 1.0);
  CHECK(repeated.row_allocation == std::vector<int>{2, 2, 2});
  CHECK(ria::rank(repeated.stacked()) == 2);

  CHECK_THROWS_AS(ria::build_phase2(Subspace{15, ComplexMatrix(0, 15), 1e-9}, kCfg35,
                                    kParams35, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(ria::build_phase2(s, kCfg35, SchemeParams{15, 5, 0}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("assemble_and_verify: rank accounting and the zero-forcing contract") {
  const Rng rng(19);
  const ria::TrialOptions options;
  const auto result = ria::run_single_trial(kCfg35, kParams35, rng, options);
  REQUIRE_FALSE(result.degenerate);
  CHECK(result.pass);
  CHECK(result.s_dims == std::array<int, 3>{5, 5, 5});
  CHECK(result.max_alignment_residual <= 1e-8);
  for (const auto& r : result.receivers) {
    CHECK(r.dims.nw == 40);
    CHECK(r.interference_rank == 25);  // min(2b, N W1)
    CHECK(r.interference_rank == r.interference_rank_expected);
    CHECK(r.phase1_interference_rank == 25);
    CHECK(r.alignment_ok);
    CHECK(r.zf_complement_dim == 15);
    CHECK(r.zf_desired_rank == 15);
    CHECK(r.zf_leakage <= 1e-8);
    CHECK(r.decodable);
    // Every transmitter's alignment-phase block carries dim(S_i) dimensions.
    CHECK(r.phase2_block_ranks == std::array<int, 3>{5, 5, 5});
  }
}

TEST_CASE("misaligned control: interference collapse fails and decoding breaks") {
  const Rng rng(23);
  ria::TrialOptions control;
  control.misaligned_control = true;
  const auto result = ria::run_single_trial(kCfg35, kParams35, rng, control);
  REQUIRE_FALSE(result.degenerate);
  CHECK_FALSE(result.pass);
  for (const auto& r : result.receivers) {
    CHECK(r.interference_rank > r.dims.nw1);  // alignment is what caps it at N W1
    CHECK_FALSE(r.alignment_ok);
    CHECK(r.zf_complement_dim < r.symbols);
    CHECK_FALSE(r.decodable);
  }
  CHECK(result.max_alignment_residual > 1e-3);
}

TEST_CASE("run_trials: determinism, aggregates, reference agreement") {
  const auto agg = ria::run_trials(kCfg35, kParams35, 20, 42);
  CHECK(agg.pass_count == 20);
  CHECK(agg.fail_count == 0);
  CHECK(agg.degenerate_count == 0);
  CHECK(agg.trials.size() == 20);

  const auto again = ria::run_trials(kCfg35, kParams35, 20, 42);
  CHECK(ria::trials_to_json_lines(agg) == ria::trials_to_json_lines(again));

  const auto serial = ria::run_trials_serial(kCfg35, kParams35, 20, 42);
  CHECK(ria::trials_to_json_lines(agg) == ria::trials_to_json_lines(serial));

  CHECK_THROWS_AS(ria::run_trials(kCfg35, kParams35, 0, 42), std::invalid_argument);
}

TEST_CASE("run_trials: (2,3) parameters decode in every trial") {
  const auto agg = ria::run_trials(AntennaConfig(2, 3), SchemeParams{9, 5, 3}, 20, 7);
  CHECK(agg.pass_count == 20);
  for (const auto& t : agg.trials) {
    CHECK(t.s_dims == std::array<int, 3>{3, 3, 3});
    CHECK(t.receivers[0].interference_rank == 15);
  }
}

TEST_CASE("property: report verdicts stay mutually consistent") {
  // Over aligned runs and the misaligned control alike: a decodable receiver
  // always has collapsed interference, which in turn stays within N W1.
  for (const bool misaligned : {false, true}) {
    ria::TrialOptions options;
    options.misaligned_control = misaligned;
    const auto agg = ria::run_trials(kCfg35, kParams35, 10, 31, options);
    for (const auto& t : agg.trials) {
      if (t.degenerate) continue;
      for (const auto& r : t.receivers) {
        if (r.decodable) CHECK(r.alignment_ok);
        if (r.alignment_ok) CHECK(r.interference_rank <= r.dims.nw1);
        CHECK(t.pass == (t.receivers[0].decodable && t.receivers[1].decodable &&
                         t.receivers[2].decodable));
      }
    }
  }
}

TEST_CASE("trial JSON lines carry per-receiver measurements") {
  const auto agg = ria::run_trials(kCfg35, kParams35, 2, 5);
  const std::string lines = ria::trials_to_json_lines(agg);
  CHECK(std::count(lines.begin(), lines.end(), '\n') == 3);  // 2 trials + summary
  const auto first = nlohmann::json::parse(lines.substr(0, lines.find('\n')));
  CHECK(first.at("trial") == 0);
  CHECK(first.at("receivers").size() == 3);
  CHECK(first.at("receivers")[0].at("interference_rank") == 25);
  const auto summary = nlohmann::json::parse(lines.substr(lines.rfind('\n', lines.size() - 2) + 1));
  CHECK(summary.at("pass_count") == 2);
  CHECK(summary.at("schema") == 1);
}

TEST_CASE("estimate_dof_slope: validates inputs and tracks b/W") {
  CHECK_THROWS_AS(ria::estimate_dof_slope(kCfg35, kParams35, 40.0, 40.0, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(ria::estimate_dof_slope(kCfg35, kParams35, 20.0, 60.0, 10, 1),
                  std::invalid_argument);

  const auto est = ria::estimate_dof_slope(kCfg35, kParams35, 40.0, 60.0, 40, 3);
  CHECK(est.d_hat == doctest::Approx(1.875));
  CHECK(est.trials_used == 40);
  CHECK(std::abs(est.slope - est.d_hat) / est.d_hat <= 0.10);

  // Negative control: the collapsed zero-forcer caps the slope well below.
  ria::TrialOptions control;
  control.misaligned_control = true;
  const auto bad = ria::estimate_dof_slope(kCfg35, kParams35, 40.0, 60.0, 10, 3, control);
  CHECK(bad.slope < 0.8 * est.d_hat);
}
