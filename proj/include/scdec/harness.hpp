#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scdec/annealer.hpp"
#include "scdec/hamiltonian.hpp"
#include "scdec/lattice.hpp"
#include "scdec/mwpm.hpp"
#include "scdec/noise.hpp"

namespace scdec {

enum class DecoderKind : uint8_t { da, da_y_coupled, mwpm };

const char* decoder_name(DecoderKind k);

struct DecoderSpec {
    DecoderKind kind = DecoderKind::da;
    HoboParams params;        // J, h; y_coupling is consulted for da_y_coupled
    AnnealerConfig anneal;    // seed field is overridden per trial
    SectorSet sectors = SectorSet::both;
    int mwpm_component_cap = 24;
};

// One decoded shot. A trial is replayable in isolation from its seed: the
// sampler and the per-sector annealer streams all derive from it.
struct TrialRecord {
    uint64_t seed = 0;
    bool feasible = false;
    bool z_failure = false;
    bool x_failure = false;
    bool capacity_error = false;  // MWPM component exceeded the size cap
    int actual_y = 0;    // (qubit, layer) events whose new error is Y
    int detected_y = 0;  // (qubit, layer) detected in both sectors
    int64_t iterations_to_best = 0;
    int defect_count = 0;
    DecoderKind decoder = DecoderKind::da;
};

// sample -> extract -> decode -> fold events to the final layer -> score.
// Infeasible decodes are counted as failures in both decoded sectors;
// capacity errors are flagged and the trial is not scored.
TrialRecord run_trial(const CodeLayout& layout, const NoiseSpec& noise,
                      const DecoderSpec& decoder, uint64_t seed);

// Runs `trials` independent trials with seeds derive_seed(point_seed, index),
// optionally across `jobs` threads. Results are identical for any thread
// count.
std::vector<TrialRecord> run_trials(const CodeLayout& layout, const NoiseSpec& noise,
                                    const DecoderSpec& decoder, uint64_t point_seed,
                                    int trials, int jobs = 1);

struct RateEstimate {
    int trials_total = 0;
    int trials_counted = 0;   // excludes capacity-error trials
    int capacity_errors = 0;
    double p_l_z = 0, se_z = 0;
    double p_l_x = 0, se_x = 0;
    double p_l = 0, se = 0;  // combined: z_failure or x_failure
    double feasible_rate = 0;
    double mean_iterations = 0;
};

// P_L = failures / trials with binomial standard error
// sqrt(P_L (1 - P_L) / trials), per sector and combined.
RateEstimate logical_error_rate(std::span<const TrialRecord> records);

// Mean of detected/actual Y counts over trials that contain at least one
// actual Y error. Throws std::domain_error when no trial qualifies.
double y_detection_rate(std::span<const TrialRecord> records);

int effective_distance(int d);  // floor((d+1)/2)

struct ThresholdPoint {
    int d = 0;
    double p = 0, p_l = 0, se = 0;
};

struct FitResult {
    double c1 = 0, c2 = 0, p_th = 0;
    double residual_norm = 0;
};

// Fits P_L = c1 (p / p_th)^(c2 d_e) by derivative-free minimization of the
// 1/SE^2-weighted squared residuals in log space (points with P_L = 0 are
// excluded; SE = 0 points get unit weight). Needs at least two distinct d and
// two distinct p among the fitted points.
FitResult fit_threshold(std::span<const ThresholdPoint> points);

struct ScalingPoint {
    double n_d = 0;
    double mean_iterations = 0;
};

struct ScalingFit {
    double exponent = 0;   // least-squares slope of log(iterations) vs log(N_d)
    double intercept = 0;
    double residual_norm = 0;      // power-law model
    double exp_residual_norm = 0;  // log-linear (exponential) model, for comparison
};

// Ordinary least squares on the log-log points; needs >= 3 points with
// positive coordinates (the caller selects the linear region).
ScalingFit fit_scaling(std::span<const ScalingPoint> points);

}  // namespace scdec
