#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctm/detector.hpp"

namespace ctm {

enum class ScenarioKind { null_iid, immediate_shift, delayed_shift, gradual, ar1 };

const char* scenario_kind_name(ScenarioKind k);
std::optional<ScenarioKind> parse_scenario_kind(const std::string& name);

// Synthetic score-stream scenario. The null distribution is N(0,1) throughout.
struct Scenario {
    ScenarioKind kind = ScenarioKind::null_iid;
    std::uint64_t horizon = 1000;  // stream length T
    double d = 0.0;                // mean shift (immediate_shift, delayed_shift)
    std::uint64_t t0 = 1;          // first shifted step (delayed_shift), 1-based
    double lambda = 0.0;           // drift slope (gradual): X_t ~ N(lambda*t, 1)
    double a = 0.7;                // AR(1) coefficient, |a| < 1
    double sigma2 = 1.0;           // AR(1) innovation variance

    void validate() const;

    static Scenario null_iid_of(std::uint64_t T);
    static Scenario immediate(double d, std::uint64_t T);
    static Scenario delayed(std::uint64_t t0, double d, std::uint64_t T);
    static Scenario gradual_of(double lambda, std::uint64_t T);
    static Scenario ar1_of(double a, double sigma2, std::uint64_t T);
};

// Deterministic given the seed. AR(1) starts from its stationary law.
std::vector<double> generate_stream(const Scenario& sc, std::uint64_t seed);

struct TrialResult {
    std::optional<std::uint64_t> tau;  // first step with wealth >= 1/alpha
    std::uint64_t horizon = 0;
    std::vector<double> wealth_path;   // empty unless paths are recorded
    std::vector<double> pvalue_path;
    std::vector<double> eta_path;      // unclipped learner eta in force at each step
    double regret_vs_oracle = std::numeric_limits<double>::quiet_NaN();
};

struct TrialOptions {
    std::uint64_t n_ref = 1000;
    bool record_paths = true;
    bool compute_regret = true;
    // Paired runs share the reference set and stream across variants for a
    // given trial seed; each variant still draws its own randomization.
    bool paired = true;
};

// One detector run: fresh reference set and stream drawn from `seed`, stepped
// to the horizon. Regret is measured against the best fixed eta on a grid of
// step 1e-3 over [-1/2, 1/2].
TrialResult run_trial(const Scenario& sc, const DetectorConfig& cfg,
                      const TrialOptions& opts, std::uint64_t seed);

// Trial batch, trial i seeded with base_seed + i. The parallel runner spreads
// trials over OpenMP threads; results are indexed by trial and bitwise equal
// to the serial reference run.
std::vector<TrialResult> run_trials(const Scenario& sc, const DetectorConfig& cfg,
                                    const TrialOptions& opts, std::uint64_t base_seed,
                                    std::size_t trials);
std::vector<TrialResult> run_trials_serial(const Scenario& sc, const DetectorConfig& cfg,
                                           const TrialOptions& opts,
                                           std::uint64_t base_seed, std::size_t trials);

struct PowerCurve {
    std::vector<std::uint64_t> times;  // 1..T
    std::vector<double> power;         // fraction of trials with tau <= t
};

PowerCurve aggregate_power(const std::vector<TrialResult>& trials);

// Median over pairs of (tau_a or cap) / (tau_b or cap). With a = standard and
// b = conditional, values above 1 mean the conditional test detects faster.
double rejection_time_ratio(const std::vector<TrialResult>& trials_a,
                            const std::vector<TrialResult>& trials_b,
                            std::uint64_t horizon_cap);

struct StoppingSummary {
    double median_tau;      // unrejected trials count as the horizon cap
    double mean_tau;
    double rejection_rate;
};

StoppingSummary summarize_stopping(const std::vector<TrialResult>& trials,
                                   std::uint64_t cap);

struct SignalDiagnostic {
    double delta_k;    // |mean_phat - 0.5| - sqrt(1 + k^2) * eps_bar
    double mean_phat;
    double eps_bar;
};

// Plug-in effective signal strength of alternative samples against a reference.
SignalDiagnostic estimate_signal(const ReferenceSet& ref,
                                 const std::vector<double>& alt_samples, double k);

// Cumulative ONS regret of the played eta sequence versus the best fixed eta
// on a grid over [-1/2, 1/2], under the negative-log-bet loss. Test oracle for
// the regret bound; not part of the detector's runtime path.
double ons_regret_vs_grid(std::span<const double> p_hats, std::span<const double> etas,
                          double eps, const BetContext& ctx, double grid_step = 1e-3);

double median(std::vector<double> values);

}  // namespace ctm
