#include "ria/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <sstream>

namespace ria {

namespace {

enum class StreamRole : std::uint64_t {
  Channel = 1,
  Phase1 = 2,
  Phase2Control = 3,
};

std::uint64_t stream_key(StreamRole role, std::uint64_t index) {
  return (static_cast<std::uint64_t>(role) << 48) | index;
}

void check_params(const SchemeParams& params) {
  if (params.symbols < 1 || params.w1 < 1 || params.w2 < 1)
    throw std::invalid_argument("scheme: b, W1, W2 must be >= 1");
}

int other_interferer(int rx, int tx) {
  // The third index besides rx and tx.
  return 3 - rx - tx;
}

// Largest relative residual of the rows of `vectors` against subspace `s`.
double max_containment_residual(const Subspace& s, const ComplexMatrix& vectors) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
    const auto v = vectors.row(r);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    const ComplexMatrix projected = (v * s.basis.adjoint()) * s.basis;
    worst = std::max(worst, (v - projected).norm() / norm);
  }
  return worst;
}

}  // namespace

int Phase2Design::rows_used() const {
  int total = 0;
  for (int r : row_allocation) total += r;
  return total;
}

ComplexMatrix Phase2Design::stacked() const {
  if (per_slot.empty()) return ComplexMatrix(0, t_basis.cols());
  const Eigen::Index m = per_slot.front().rows();
  ComplexMatrix out(m * static_cast<Eigen::Index>(per_slot.size()), t_basis.cols());
  for (std::size_t s = 0; s < per_slot.size(); ++s)
    out.middleRows(static_cast<Eigen::Index>(s) * m, m) = per_slot[s];
  return out;
}

ChannelSet draw_channels(const AntennaConfig& cfg, const SchemeParams& params,
                         const Rng& rng) {
  check_params(params);
  const std::int64_t w = params.total_slots();
  ChannelSet ch{cfg, params, {}};
  ch.slots.reserve(static_cast<std::size_t>(9 * w));
  for (int rx = 0; rx < 3; ++rx) {
    for (int tx = 0; tx < 3; ++tx) {
      for (std::int64_t slot = 0; slot < w; ++slot) {
        Rng sub = rng.split(stream_key(
            StreamRole::Channel, static_cast<std::uint64_t>((rx * 3 + tx) * w + slot)));
        ch.slots.push_back(random_gaussian(cfg.rx_antennas, cfg.tx_antennas, sub));
      }
    }
  }
  return ch;
}

Phase1Design build_phase1(const AntennaConfig& cfg, const SchemeParams& params,
                          const Rng& rng) {
  check_params(params);
  const std::int64_t m_w1 = static_cast<std::int64_t>(cfg.tx_antennas) * params.w1;
  if (params.symbols > m_w1)
    throw std::invalid_argument("build_phase1: b = " + std::to_string(params.symbols) +
                                " exceeds M W1 = " + std::to_string(m_w1));
  Phase1Design design;
  design.symbols = params.symbols;
  for (int tx = 0; tx < 3; ++tx) {
    Rng sub = rng.split(stream_key(StreamRole::Phase1, static_cast<std::uint64_t>(tx)));
    design.stacked[static_cast<std::size_t>(tx)] =
        random_gaussian(m_w1, params.symbols, sub);
    if (rank(design.stacked[static_cast<std::size_t>(tx)]) != params.symbols)
      throw DegenerateDrawError("build_phase1: stacked precoder lost full column rank");
  }
  return design;
}

ComplexMatrix phase_product(const ChannelSet& ch, int rx, int tx, int phase,
                            const ComplexMatrix& stacked_precoder) {
  const int m = ch.cfg.tx_antennas;
  const int n = ch.cfg.rx_antennas;
  const std::int64_t slots = phase == 1 ? ch.params.w1 : ch.params.w2;
  const std::int64_t offset = phase == 1 ? 0 : ch.params.w1;
  const std::int64_t cols = stacked_precoder.cols();
  if (stacked_precoder.rows() != m * slots)
    throw std::invalid_argument("phase_product: precoder stack height mismatch");
  ComplexMatrix out(n * slots, cols);
  for (std::int64_t s = 0; s < slots; ++s) {
    out.middleRows(n * s, n) = ch.channel(rx, tx, static_cast<int>(offset + s)) *
                               stacked_precoder.middleRows(m * s, m);
  }
  return out;
}

std::array<ReceiverReport, 3> receiver_reports(const ChannelSet& ch,
                                               const Phase1Design& p1, double tol) {
  const std::int64_t b = p1.symbols;
  const std::int64_t nw1 = static_cast<std::int64_t>(ch.cfg.rx_antennas) * ch.params.w1;
  if (b >= nw1)
    throw std::invalid_argument("receiver_reports: b >= N W1 leaves no annihilator");

  std::array<ReceiverReport, 3> reports;
  for (int rx = 0; rx < 3; ++rx) {
    ReceiverReport& report = reports[static_cast<std::size_t>(rx)];
    report.receiver = rx;

    std::array<ComplexMatrix, 3> sensed;  // H^{(1)} V^{(1)} per interferer
    for (int tx = 0; tx < 3; ++tx) {
      if (tx == rx) continue;
      sensed[static_cast<std::size_t>(tx)] =
          phase_product(ch, rx, tx, 1, p1.stacked[static_cast<std::size_t>(tx)]);
    }

    for (int tx = 0; tx < 3; ++tx) {
      if (tx == rx) continue;
      const int other = other_interferer(rx, tx);
      const ComplexMatrix& keep = sensed[static_cast<std::size_t>(tx)];
      const ComplexMatrix& annihilate = sensed[static_cast<std::size_t>(other)];

      auto [r, u] = rank_and_left_null(annihilate, kDefaultRankTol);
      if (r != b)
        throw DegenerateDrawError("receiver_reports: sensed interference rank " +
                                  std::to_string(r) + " != b");
      const double residual = (u * annihilate).norm() / annihilate.norm();
      if (residual > tol)
        throw NumericsError("receiver_reports: annihilator residual " +
                            std::to_string(residual));

      InterferenceTap& tap = report.taps[static_cast<std::size_t>(tx)];
      tap.u_filter = u;
      tap.t_matrix = u * keep;
      tap.s = row_space(tap.t_matrix, kDefaultRankTol);
      if (tap.s.dim() != std::min(nw1 - b, b))
        throw DegenerateDrawError("receiver_reports: interference subspace dim " +
                                  std::to_string(tap.s.dim()) + " not generic");
    }
  }
  return reports;
}

Subspace transmitter_intersection(const std::array<ReceiverReport, 3>& reports,
                                  int tx, double tol) {
  const int rx_a = (tx + 1) % 3;
  const int rx_b = (tx + 2) % 3;
  Subspace sa = reports[static_cast<std::size_t>(rx_a)].tap(tx).s;
  Subspace sb = reports[static_cast<std::size_t>(rx_b)].tap(tx).s;
  sa.tol = std::max(sa.tol, tol);
  Subspace s = intersect(sa, sb);
  if (s.dim() == 0)
    throw InfeasibleError("transmitter_intersection: empty intersection; "
                          "the intersection constraint is violated");
  return s;
}

Phase2Design build_phase2(const Subspace& s_i, const AntennaConfig& cfg,
                          const SchemeParams& params, double sigma) {
  if (params.w2 < 1) throw std::invalid_argument("build_phase2: W2 must be >= 1");
  if (s_i.dim() < 1)
    throw std::invalid_argument("build_phase2: intersection subspace is empty");

  const int m = cfg.tx_antennas;
  const int dim = static_cast<int>(s_i.dim());
  const Eigen::Index b = s_i.ambient_dim;

  // Every slot carries rows of T_i, cycling through the basis: a slot left
  // silent by all transmitters would zero out N receive dimensions at every
  // receiver and sink the space accounting behind b <= N W2. When
  // dim(S_i) <= M this is the single precoder reused over all W2 slots; when
  // dim(S_i) >= M W2 it truncates to the first M W2 rows, none repeated.
  Phase2Design design;
  design.t_basis = s_i.basis;
  design.sigma = sigma;
  design.row_allocation.resize(static_cast<std::size_t>(params.w2));
  design.per_slot.resize(static_cast<std::size_t>(params.w2));
  int cursor = 0;
  for (std::int64_t s = 0; s < params.w2; ++s) {
    const int take = std::min(m, dim);
    design.row_allocation[static_cast<std::size_t>(s)] = take;
    ComplexMatrix slot = ComplexMatrix::Zero(m, b);
    for (int k = 0; k < take; ++k)
      slot.row(k) = sigma * s_i.basis.row((cursor + k) % dim);
    cursor = (cursor + take) % dim;
    design.per_slot[static_cast<std::size_t>(s)] = std::move(slot);
  }
  return design;
}

namespace {

// Stack of phase-2 per-slot products H^{(2,s)} V^{(2,s)} for one (rx, tx).
ComplexMatrix phase2_product(const ChannelSet& ch, int rx, int tx,
                             const Phase2Design& design) {
  const int n = ch.cfg.rx_antennas;
  const std::int64_t w2 = ch.params.w2;
  const Eigen::Index b = design.t_basis.cols();
  ComplexMatrix out(n * w2, b);
  for (std::int64_t s = 0; s < w2; ++s) {
    out.middleRows(n * s, n) = ch.channel(rx, tx, static_cast<int>(ch.params.w1 + s)) *
                               design.per_slot[static_cast<std::size_t>(s)];
  }
  return out;
}

}  // namespace

std::array<ReceiverVerification, 3> verify_receivers(
    const ChannelSet& ch, const Phase1Design& p1,
    const std::array<Phase2Design, 3>& p2, const std::array<ReceiverReport, 3>& reports,
    const SchemeParams& params, double tol) {
  const std::int64_t b = params.symbols;
  const int n = ch.cfg.rx_antennas;
  const std::int64_t nw1 = static_cast<std::int64_t>(n) * params.w1;
  const std::int64_t nw2 = static_cast<std::int64_t>(n) * params.w2;
  const std::int64_t nw = nw1 + nw2;

  std::array<ReceiverVerification, 3> out;
  for (int rx = 0; rx < 3; ++rx) {
    FeasibilityReport report;
    report.receiver = rx;
    report.symbols = b;
    report.dims = {nw, nw1, nw2};
    report.interference_rank_expected = static_cast<int>(std::min(2 * b, nw1));

    // Received full-length signal blocks, desired and interfering.
    std::array<ComplexMatrix, 3> received;  // NW x b per transmitter
    for (int tx = 0; tx < 3; ++tx) {
      ComplexMatrix full(nw, b);
      full.topRows(nw1) =
          phase_product(ch, rx, tx, 1, p1.stacked[static_cast<std::size_t>(tx)]);
      full.bottomRows(nw2) = phase2_product(ch, rx, tx, p2[static_cast<std::size_t>(tx)]);
      report.phase2_block_ranks[static_cast<std::size_t>(tx)] =
          rank(full.bottomRows(nw2));
      received[static_cast<std::size_t>(tx)] = std::move(full);
    }

    const int tx_a = (rx + 1) % 3;
    const int tx_b = (rx + 2) % 3;
    ComplexMatrix interference(nw, 2 * b);
    interference.leftCols(b) = received[static_cast<std::size_t>(tx_a)];
    interference.rightCols(b) = received[static_cast<std::size_t>(tx_b)];

    report.phase1_interference_rank = rank(interference.topRows(nw1));
    auto [full_rank, complement] = rank_and_left_null(interference, kDefaultRankTol);
    report.interference_rank = full_rank;
    report.alignment_ok = full_rank == report.phase1_interference_rank;
    report.zf_complement_dim = static_cast<int>(nw - full_rank);

    // Alignment of each phase-2 slot against the sensed subspaces.
    double worst = 0.0;
    for (int tx : {tx_a, tx_b}) {
      const Subspace& sensed = reports[static_cast<std::size_t>(rx)].tap(tx).s;
      for (std::int64_t s = 0; s < params.w2; ++s) {
        const ComplexMatrix rows_sent =
            ch.channel(rx, tx, static_cast<int>(params.w1 + s)) *
            p2[static_cast<std::size_t>(tx)].per_slot[static_cast<std::size_t>(s)];
        worst = std::max(worst, max_containment_residual(sensed, rows_sent));
      }
    }
    report.max_alignment_residual = worst;

    // Receive directions: the top left singular directions of the
    // complement-projected desired matrix, for the largest retained gains.
    // When the complement is smaller than b this is a decoding failure, but
    // the truncated zero-forcer is still reported for inspection.
    const ComplexMatrix& desired = received[static_cast<std::size_t>(rx)];
    const std::int64_t zf_rows = std::min<std::int64_t>(report.zf_complement_dim, b);
    ComplexMatrix zf_output;
    if (zf_rows > 0) {
      const ComplexMatrix projected = complement * desired;
      Eigen::BDCSVD<ComplexMatrix> svd(projected, Eigen::ComputeThinU);
      const ComplexMatrix zf = svd.matrixU().leftCols(zf_rows).adjoint() * complement;
      zf_output = zf * desired;
      report.zf_desired_rank = rank(zf_output);
      report.zf_leakage = (zf * interference).norm() / interference.norm();
    } else {
      report.zf_desired_rank = 0;
      report.zf_leakage = 1.0;
    }
    report.decodable = report.zf_complement_dim >= b && report.zf_desired_rank == b &&
                       report.zf_leakage <= tol;

    out[static_cast<std::size_t>(rx)] = ReceiverVerification{std::move(report),
                                                             std::move(zf_output)};
  }
  return out;
}

std::array<FeasibilityReport, 3> assemble_and_verify(
    const ChannelSet& ch, const Phase1Design& p1,
    const std::array<Phase2Design, 3>& p2, const std::array<ReceiverReport, 3>& reports,
    const SchemeParams& params, double tol) {
  auto verified = verify_receivers(ch, p1, p2, reports, params, tol);
  return {verified[0].report, verified[1].report, verified[2].report};
}

namespace {

struct TrialBuild {
  ChannelSet channels;
  Phase1Design phase1;
  std::array<ReceiverReport, 3> reports;
  std::array<Subspace, 3> intersections;
  std::array<Phase2Design, 3> phase2;
};

// Shared construction path for the verification trials and the slope
// estimator; `phase1_scale`/`sigma` select the power convention.
TrialBuild build_trial(const AntennaConfig& cfg, const SchemeParams& params,
                       const Rng& rng, const TrialOptions& options,
                       bool normalize_power) {
  TrialBuild built{draw_channels(cfg, params, rng),
                   build_phase1(cfg, params, rng),
                   {},
                   {},
                   {}};
  if (normalize_power) {
    for (auto& stacked : built.phase1.stacked) {
      stacked *= std::sqrt(static_cast<double>(params.w1)) / stacked.norm();
    }
  }
  built.reports = receiver_reports(built.channels, built.phase1, options.tol);
  for (int tx = 0; tx < 3; ++tx) {
    built.intersections[static_cast<std::size_t>(tx)] =
        transmitter_intersection(built.reports, tx, options.tol);
    const Subspace& s = built.intersections[static_cast<std::size_t>(tx)];
    double sigma = 1.0;
    if (normalize_power) {
      // Each slot sends take orthonormal rows scaled by sigma, so per-slot
      // power is sigma^2 * take; pin it to 1.
      const auto take = std::min<Eigen::Index>(cfg.tx_antennas, s.dim());
      sigma = 1.0 / std::sqrt(static_cast<double>(take));
    }
    Phase2Design design = build_phase2(s, cfg, params, sigma);
    if (options.misaligned_control) {
      // Negative control: same slot shapes, rows not confined to S_i.
      for (std::size_t slot = 0; slot < design.per_slot.size(); ++slot) {
        Rng sub = rng.split(stream_key(
            StreamRole::Phase2Control,
            static_cast<std::uint64_t>(tx) * static_cast<std::uint64_t>(params.w2) +
                slot));
        design.per_slot[slot] = random_gaussian(cfg.tx_antennas, params.symbols, sub);
      }
    }
    built.phase2[static_cast<std::size_t>(tx)] = std::move(design);
  }
  return built;
}

}  // namespace

TrialResult run_single_trial(const AntennaConfig& cfg, const SchemeParams& params,
                             const Rng& trial_rng, const TrialOptions& options) {
  const std::int64_t nw1 = static_cast<std::int64_t>(cfg.rx_antennas) * params.w1;
  TrialResult result;
  result.s_dim_expected = static_cast<int>(
      2 * std::min(nw1 - params.symbols, params.symbols) - params.symbols);
  try {
    TrialBuild built = build_trial(cfg, params, trial_rng, options, false);
    for (int tx = 0; tx < 3; ++tx) {
      const auto dim = built.intersections[static_cast<std::size_t>(tx)].dim();
      result.s_dims[static_cast<std::size_t>(tx)] = static_cast<int>(dim);
      if (dim != result.s_dim_expected)
        throw DegenerateDrawError("intersection dim " + std::to_string(dim) +
                                  " != expected " +
                                  std::to_string(result.s_dim_expected));
    }
    result.receivers = assemble_and_verify(built.channels, built.phase1, built.phase2,
                                           built.reports, params, options.tol);
    result.pass = true;
    for (const FeasibilityReport& r : result.receivers) {
      result.max_alignment_residual =
          std::max(result.max_alignment_residual, r.max_alignment_residual);
      result.pass = result.pass && r.decodable;
    }
  } catch (const DegenerateDrawError& e) {
    result.degenerate = true;
    result.degenerate_reason = e.what();
  } catch (const NumericsError& e) {
    result.degenerate = true;
    result.degenerate_reason = e.what();
  }
  return result;
}

namespace {

TrialAggregate aggregate_results(std::vector<TrialResult>&& trials) {
  TrialAggregate agg;
  for (const TrialResult& t : trials) {
    if (t.degenerate)
      ++agg.degenerate_count;
    else if (t.pass)
      ++agg.pass_count;
    else
      ++agg.fail_count;
  }
  agg.trials = std::move(trials);
  return agg;
}

}  // namespace

TrialAggregate run_trials_serial(const AntennaConfig& cfg, const SchemeParams& params,
                                 int n_trials, std::uint64_t seed,
                                 const TrialOptions& options) {
  if (n_trials < 1) throw std::invalid_argument("run_trials: need n_trials >= 1");
  check_params(params);
  const Rng root(seed);
  std::vector<TrialResult> trials(static_cast<std::size_t>(n_trials));
  for (int t = 0; t < n_trials; ++t) {
    trials[static_cast<std::size_t>(t)] =
        run_single_trial(cfg, params, root.split(static_cast<std::uint64_t>(t)), options);
    trials[static_cast<std::size_t>(t)].trial = t;
  }
  return aggregate_results(std::move(trials));
}

TrialAggregate run_trials(const AntennaConfig& cfg, const SchemeParams& params,
                          int n_trials, std::uint64_t seed,
                          const TrialOptions& options) {
  if (n_trials < 1) throw std::invalid_argument("run_trials: need n_trials >= 1");
  check_params(params);
  const Rng root(seed);
  std::vector<TrialResult> trials(static_cast<std::size_t>(n_trials));
  std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < n_trials; ++t) {
    try {
      trials[static_cast<std::size_t>(t)] = run_single_trial(
          cfg, params, root.split(static_cast<std::uint64_t>(t)), options);
      trials[static_cast<std::size_t>(t)].trial = t;
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return aggregate_results(std::move(trials));
}

namespace {

// log2 det(I + scale * G G^H) through a Cholesky factorization; safe from
// overflow at high SNR where the determinant itself would not fit a double.
double log2det_identity_plus_gram(const ComplexMatrix& g, double scale) {
  const Eigen::Index n = g.rows();
  ComplexMatrix m = ComplexMatrix::Identity(n, n) + scale * (g * g.adjoint());
  Eigen::LLT<ComplexMatrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericsError("log2det: Cholesky factorization failed");
  double log2det = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    log2det += 2.0 * std::log2(llt.matrixL()(k, k).real());
  return log2det;
}

}  // namespace

SlopeEstimate estimate_dof_slope(const AntennaConfig& cfg, const SchemeParams& params,
                                 double snr_db_lo, double snr_db_hi, int n_trials,
                                 std::uint64_t seed, const TrialOptions& options) {
  if (snr_db_lo == snr_db_hi)
    throw std::invalid_argument("estimate_dof_slope: SNR points must be distinct");
  if (snr_db_lo > snr_db_hi) std::swap(snr_db_lo, snr_db_hi);
  if (snr_db_lo < 30.0)
    throw std::invalid_argument("estimate_dof_slope: SNR points must be >= 30 dB");
  if (n_trials < 1) throw std::invalid_argument("estimate_dof_slope: need trials >= 1");
  check_params(params);

  const double snr_lo = std::pow(10.0, snr_db_lo / 10.0);
  const double snr_hi = std::pow(10.0, snr_db_hi / 10.0);
  const double b = static_cast<double>(params.symbols);
  const double w = static_cast<double>(params.total_slots());

  const Rng root(seed);
  std::vector<double> rates_lo(static_cast<std::size_t>(n_trials), 0.0);
  std::vector<double> rates_hi(static_cast<std::size_t>(n_trials), 0.0);
  std::vector<unsigned char> used(static_cast<std::size_t>(n_trials), 0);
  std::exception_ptr first_error;

#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < n_trials; ++t) {
    try {
      const Rng trial_rng = root.split(static_cast<std::uint64_t>(t));
      std::optional<TrialBuild> built;
      try {
        built = build_trial(cfg, params, trial_rng, options, true);
      } catch (const DegenerateDrawError&) {
        continue;
      } catch (const NumericsError&) {
        continue;
      }
      const auto verified = verify_receivers(built->channels, built->phase1,
                                             built->phase2, built->reports, params,
                                             options.tol);
      double sum_lo = 0.0;
      double sum_hi = 0.0;
      bool usable = true;
      for (const ReceiverVerification& v : verified) {
        // Non-decodable instances are excluded, except under the misaligned
        // control where the collapsed rate is exactly what is being measured.
        if (v.zf_output.rows() == 0 ||
            (!v.report.decodable && !options.misaligned_control)) {
          usable = false;
          break;
        }
        sum_lo += log2det_identity_plus_gram(v.zf_output, snr_lo / b) / w;
        sum_hi += log2det_identity_plus_gram(v.zf_output, snr_hi / b) / w;
      }
      if (!usable) continue;  // excluded, counted below
      rates_lo[static_cast<std::size_t>(t)] = sum_lo / 3.0;
      rates_hi[static_cast<std::size_t>(t)] = sum_hi / 3.0;
      used[static_cast<std::size_t>(t)] = 1;
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  SlopeEstimate est;
  est.d_hat = b / w;
  for (int t = 0; t < n_trials; ++t) {
    if (!used[static_cast<std::size_t>(t)]) {
      ++est.excluded;
      continue;
    }
    ++est.trials_used;
    est.rate_lo += rates_lo[static_cast<std::size_t>(t)];
    est.rate_hi += rates_hi[static_cast<std::size_t>(t)];
  }
  if (est.trials_used == 0)
    throw NumericsError("estimate_dof_slope: no decodable trials to average");
  est.rate_lo /= est.trials_used;
  est.rate_hi /= est.trials_used;
  est.slope = (est.rate_hi - est.rate_lo) / (std::log2(snr_hi) - std::log2(snr_lo));
  return est;
}

nlohmann::json trial_to_json(const TrialResult& result) {
  nlohmann::json j = {
      {"trial", result.trial},
      {"degenerate", result.degenerate},
  };
  if (result.degenerate) {
    j["reason"] = result.degenerate_reason;
    return j;
  }
  j["s_dims"] = result.s_dims;
  j["s_dim_expected"] = result.s_dim_expected;
  j["max_alignment_residual"] = result.max_alignment_residual;
  j["pass"] = result.pass;
  nlohmann::json receivers = nlohmann::json::array();
  for (const FeasibilityReport& r : result.receivers) {
    receivers.push_back({
        {"receiver", r.receiver},
        {"b", r.symbols},
        {"interference_rank", r.interference_rank},
        {"interference_rank_expected", r.interference_rank_expected},
        {"phase1_interference_rank", r.phase1_interference_rank},
        {"phase2_block_ranks", r.phase2_block_ranks},
        {"zf_complement_dim", r.zf_complement_dim},
        {"zf_desired_rank", r.zf_desired_rank},
        {"zf_leakage", r.zf_leakage},
        {"max_alignment_residual", r.max_alignment_residual},
        {"alignment_ok", r.alignment_ok},
        {"decodable", r.decodable},
        {"dims", {{"nw", r.dims.nw}, {"nw1", r.dims.nw1}, {"nw2", r.dims.nw2}}},
    });
  }
  j["receivers"] = std::move(receivers);
  return j;
}

nlohmann::json aggregate_to_json(const TrialAggregate& aggregate) {
  return {
      {"schema", 1},
      {"summary", true},
      {"trials", aggregate.trials.size()},
      {"pass_count", aggregate.pass_count},
      {"fail_count", aggregate.fail_count},
      {"degenerate_count", aggregate.degenerate_count},
  };
}

std::string trials_to_json_lines(const TrialAggregate& aggregate) {
  std::ostringstream out;
  for (const TrialResult& t : aggregate.trials) out << trial_to_json(t).dump() << '\n';
  out << aggregate_to_json(aggregate).dump() << '\n';
  return out.str();
}

}  // namespace ria
