#pragma once

#include <array>
#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "ria/dof_catalog.hpp"
#include "ria/linalg.hpp"
#include "ria/optimizer.hpp"
#include "ria/rng.hpp"

namespace ria {

/// Looser residual tolerance for end-to-end checks; rank decisions stay on
/// the linalg default cut.
inline constexpr double kDefaultSchemeTol = 1e-8;

/// A random instance failed the rank a generic draw attains almost surely.
/// Trials hitting this are discarded and counted, never retried.
struct DegenerateDrawError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scheme parameters violate a feasibility constraint (empty intersection).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All per-slot channel matrices of one realization: 3 x 3 x (W1 + W2)
/// matrices of shape N x M, slot-fresh i.i.d. entries.
struct ChannelSet {
  AntennaConfig cfg;
  SchemeParams params;
  std::vector<ComplexMatrix> slots;  // [(rx * 3 + tx) * W + slot]

  const ComplexMatrix& channel(int rx, int tx, int slot) const {
    return slots[static_cast<std::size_t>((rx * 3 + tx) * params.total_slots() + slot)];
  }
};

/// Predefined sensing-phase precoders, identical in every user's knowledge:
/// per transmitter one (M W1) x b stack of per-slot M x b blocks, rank b.
struct Phase1Design {
  std::int64_t symbols = 0;  // b
  std::array<ComplexMatrix, 3> stacked;
};

/// What receiver j measures about interferer i during the sensing phase.
struct InterferenceTap {
  ComplexMatrix u_filter;  // (N W1 - b) x (N W1)
  ComplexMatrix t_matrix;  // (N W1 - b) x b
  Subspace s;              // row space of t_matrix, subspace of C^b
};

struct ReceiverReport {
  int receiver = 0;
  std::array<InterferenceTap, 3> taps;  // taps[receiver] stays empty

  const InterferenceTap& tap(int tx) const { return taps[static_cast<std::size_t>(tx)]; }
};

/// Alignment-phase precoders of one transmitter: every slot carries
/// min(M, dim(S_i)) rows of sigma * T_i, cycling through the basis rows so no
/// slot stays silent. Reduces to the single reused precoder when
/// dim(S_i) <= M and to plain truncation when dim(S_i) >= M W2.
struct Phase2Design {
  ComplexMatrix t_basis;                // dim(S_i) x b, orthonormal rows
  std::vector<int> row_allocation;      // nonzero rows sent per slot
  std::vector<ComplexMatrix> per_slot;  // W2 matrices, M x b
  double sigma = 1.0;

  int rows_used() const;          // total rows sent, counting repeats
  ComplexMatrix stacked() const;  // (M W2) x b
};

/// Per-receiver rank/dimension measurements and decodability verdicts.
struct FeasibilityReport {
  int receiver = 0;
  std::int64_t symbols = 0;                 // b
  int interference_rank = 0;
  int interference_rank_expected = 0;       // min(2b, N W1)
  int phase1_interference_rank = 0;
  std::array<int, 3> phase2_block_ranks{};  // rank of H^{(2)} V^{(2)} per transmitter
  int zf_complement_dim = 0;
  int zf_desired_rank = 0;
  double zf_leakage = 0.0;                  // ||Z I||_F / ||I||_F
  double max_alignment_residual = 0.0;      // phase-2 rows vs the sensed subspaces
  bool alignment_ok = false;                // full interference rank collapsed to phase-1 rank
  bool decodable = false;                   // rank(Z D) == b and leakage within tol
  struct Dims {
    std::int64_t nw = 0, nw1 = 0, nw2 = 0;
  } dims;
};

struct TrialOptions {
  double tol = kDefaultSchemeTol;
  bool misaligned_control = false;  // replace phase-2 precoders with random ones
};

struct TrialResult {
  int trial = 0;
  bool degenerate = false;
  std::string degenerate_reason;
  std::array<int, 3> s_dims{};  // measured dim(S_i) per transmitter
  int s_dim_expected = 0;       // 2 min(N W1 - b, b) - b
  double max_alignment_residual = 0.0;
  std::array<FeasibilityReport, 3> receivers{};
  bool pass = false;  // non-degenerate and every receiver decodable
};

struct TrialAggregate {
  int pass_count = 0;
  int fail_count = 0;
  int degenerate_count = 0;
  std::vector<TrialResult> trials;
};

// -- construction steps -------------------------------------------------

ChannelSet draw_channels(const AntennaConfig& cfg, const SchemeParams& params,
                         const Rng& rng);

Phase1Design build_phase1(const AntennaConfig& cfg, const SchemeParams& params,
                          const Rng& rng);

/// Stack over phase-p slots of H^{(p,s)} times the matching M-row block of the
/// stacked precoder; equals the block-diagonal channel applied to the stack.
ComplexMatrix phase_product(const ChannelSet& ch, int rx, int tx, int phase,
                            const ComplexMatrix& stacked_precoder);

std::array<ReceiverReport, 3> receiver_reports(const ChannelSet& ch,
                                               const Phase1Design& p1, double tol);

/// S_i: intersection of the two subspaces transmitter i's sensing-phase signal
/// spans at its non-intended receivers. InfeasibleError when empty.
Subspace transmitter_intersection(const std::array<ReceiverReport, 3>& reports,
                                  int tx, double tol);

Phase2Design build_phase2(const Subspace& s_i, const AntennaConfig& cfg,
                          const SchemeParams& params, double sigma);

/// Full-length verification per receiver plus the zero-forced desired-signal
/// matrix Z_j H_{j,j} V_j needed by the rate estimator (b x b when ZF rows
/// exist, empty otherwise).
struct ReceiverVerification {
  FeasibilityReport report;
  ComplexMatrix zf_output;
};

std::array<ReceiverVerification, 3> verify_receivers(
    const ChannelSet& ch, const Phase1Design& p1,
    const std::array<Phase2Design, 3>& p2, const std::array<ReceiverReport, 3>& reports,
    const SchemeParams& params, double tol);

std::array<FeasibilityReport, 3> assemble_and_verify(
    const ChannelSet& ch, const Phase1Design& p1,
    const std::array<Phase2Design, 3>& p2, const std::array<ReceiverReport, 3>& reports,
    const SchemeParams& params, double tol);

// -- trial drivers -------------------------------------------------------

TrialResult run_single_trial(const AntennaConfig& cfg, const SchemeParams& params,
                             const Rng& trial_rng, const TrialOptions& options);

/// OpenMP-parallel Monte Carlo driver. Trials are keyed by per-trial
/// substreams, so the aggregate is identical to the serial reference for any
/// thread count.
TrialAggregate run_trials(const AntennaConfig& cfg, const SchemeParams& params,
                          int n_trials, std::uint64_t seed,
                          const TrialOptions& options = {});

/// Single-threaded reference implementation kept for testing.
TrialAggregate run_trials_serial(const AntennaConfig& cfg, const SchemeParams& params,
                                 int n_trials, std::uint64_t seed,
                                 const TrialOptions& options = {});

// -- finite-SNR sanity check ----------------------------------------------

struct SlopeEstimate {
  double slope = 0.0;
  double d_hat = 0.0;    // b / W
  double rate_lo = 0.0;  // bits per slot at the lower SNR point
  double rate_hi = 0.0;
  int trials_used = 0;
  int excluded = 0;  // non-decodable instances skipped
};

/// Rate-vs-log-SNR slope between two SNR points (dB, both >= 30, distinct),
/// with per-slot average transmit power normalized to 1 on both phases.
SlopeEstimate estimate_dof_slope(const AntennaConfig& cfg, const SchemeParams& params,
                                 double snr_db_lo, double snr_db_hi, int n_trials,
                                 std::uint64_t seed, const TrialOptions& options = {});

// -- reporting --------------------------------------------------------------

nlohmann::json trial_to_json(const TrialResult& result);
nlohmann::json aggregate_to_json(const TrialAggregate& aggregate);

/// JSON-lines dump: one object per trial, aggregate summary object last.
std::string trials_to_json_lines(const TrialAggregate& aggregate);

}  // namespace ria
