#include "ctm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctm {

const char* scenario_kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::null_iid: return "null";
        case ScenarioKind::immediate_shift: return "immediate_shift";
        case ScenarioKind::delayed_shift: return "delayed_shift";
        case ScenarioKind::gradual: return "gradual";
        case ScenarioKind::ar1: return "ar1";
    }
    return "?";
}

std::optional<ScenarioKind> parse_scenario_kind(const std::string& name) {
    if (name == "null") return ScenarioKind::null_iid;
    if (name == "immediate_shift") return ScenarioKind::immediate_shift;
    if (name == "delayed_shift") return ScenarioKind::delayed_shift;
    if (name == "gradual") return ScenarioKind::gradual;
    if (name == "ar1") return ScenarioKind::ar1;
    return std::nullopt;
}

void Scenario::validate() const {
    if (horizon < 1) throw std::invalid_argument("Scenario: horizon must be >= 1");
    if (kind == ScenarioKind::delayed_shift && t0 < 1)
        throw std::invalid_argument("Scenario: t0 must be >= 1");
    if (kind == ScenarioKind::ar1) {
        if (!(sigma2 > 0.0)) throw std::invalid_argument("Scenario: sigma2 must be > 0");
        if (!(std::abs(a) < 1.0))
            throw std::invalid_argument("Scenario: |a| < 1 required for a stationary AR(1)");
    }
}

Scenario Scenario::null_iid_of(std::uint64_t T) {
    Scenario s;
    s.kind = ScenarioKind::null_iid;
    s.horizon = T;
    return s;
}

Scenario Scenario::immediate(double d, std::uint64_t T) {
    Scenario s;
    s.kind = ScenarioKind::immediate_shift;
    s.d = d;
    s.horizon = T;
    return s;
}

Scenario Scenario::delayed(std::uint64_t t0, double d, std::uint64_t T) {
    Scenario s;
    s.kind = ScenarioKind::delayed_shift;
    s.t0 = t0;
    s.d = d;
    s.horizon = T;
    return s;
}

Scenario Scenario::gradual_of(double lambda, std::uint64_t T) {
    Scenario s;
    s.kind = ScenarioKind::gradual;
    s.lambda = lambda;
    s.horizon = T;
    return s;
}

Scenario Scenario::ar1_of(double a, double sigma2, std::uint64_t T) {
    Scenario s;
    s.kind = ScenarioKind::ar1;
    s.a = a;
    s.sigma2 = sigma2;
    s.horizon = T;
    return s;
}

std::vector<double> generate_stream(const Scenario& sc, std::uint64_t seed) {
    sc.validate();
    Rng rng(seed);
    std::vector<double> xs(sc.horizon);
    switch (sc.kind) {
        case ScenarioKind::null_iid:
            for (auto& x : xs) x = rng.gaussian();
            break;
        case ScenarioKind::immediate_shift:
            for (auto& x : xs) x = sc.d + rng.gaussian();
            break;
        case ScenarioKind::delayed_shift:
            for (std::uint64_t t = 1; t <= sc.horizon; ++t)
                xs[t - 1] = (t < sc.t0 ? 0.0 : sc.d) + rng.gaussian();
            break;
        case ScenarioKind::gradual:
            for (std::uint64_t t = 1; t <= sc.horizon; ++t)
                xs[t - 1] = sc.lambda * static_cast<double>(t) + rng.gaussian();
            break;
        case ScenarioKind::ar1: {
            const double sigma = std::sqrt(sc.sigma2);
            double x = rng.gaussian(0.0, sigma / std::sqrt(1.0 - sc.a * sc.a));
            for (std::uint64_t t = 0; t < sc.horizon; ++t) {
                xs[t] = x;
                x = sc.a * x + sigma * rng.gaussian();
            }
            break;
        }
    }
    return xs;
}

namespace {

// Sub-stream salts within one trial seed.
constexpr std::uint64_t kRefSalt = 1;
constexpr std::uint64_t kStreamSalt = 2;
constexpr std::uint64_t kDetectorSalt = 3;

std::uint64_t detector_seed(std::uint64_t trial_seed, Variant v) {
    return derive_seed(trial_seed, kDetectorSalt + static_cast<std::uint64_t>(v));
}

std::uint64_t unpaired_offset(Variant v) {
    return derive_seed(0xa17e12bd5u, static_cast<std::uint64_t>(v));
}

}  // namespace

TrialResult run_trial(const Scenario& sc, const DetectorConfig& cfg,
                      const TrialOptions& opts, std::uint64_t seed) {
    if (opts.n_ref < 1) throw std::invalid_argument("run_trial: n_ref must be >= 1");
    const std::uint64_t trial_seed =
        opts.paired ? seed : seed + unpaired_offset(cfg.variant);

    Rng ref_rng(derive_seed(trial_seed, kRefSalt));
    std::vector<double> ref(opts.n_ref);
    for (auto& r : ref) r = ref_rng.gaussian();

    const auto stream = generate_stream(sc, derive_seed(trial_seed, kStreamSalt));

    Detector det(ref, cfg, detector_seed(trial_seed, cfg.variant));

    TrialResult res;
    res.horizon = sc.horizon;
    const bool need_paths = opts.record_paths || opts.compute_regret;
    if (need_paths) {
        res.wealth_path.reserve(stream.size());
        res.pvalue_path.reserve(stream.size());
        res.eta_path.reserve(stream.size());
    }
    for (double x : stream) {
        const double eta_learner = det.ons().eta;
        const StepOutcome out = det.step(x);
        if (need_paths) {
            res.wealth_path.push_back(out.wealth);
            res.pvalue_path.push_back(out.p_value);
            res.eta_path.push_back(eta_learner);
        }
    }
    res.tau = det.rejected_at();
    if (opts.compute_regret) {
        res.regret_vs_oracle = ons_regret_vs_grid(res.pvalue_path, res.eta_path,
                                                  det.band_epsilon(), det.bet_context());
        if (!opts.record_paths) {
            res.wealth_path.clear();
            res.pvalue_path.clear();
            res.eta_path.clear();
        }
    }
    return res;
}

std::vector<TrialResult> run_trials_serial(const Scenario& sc, const DetectorConfig& cfg,
                                           const TrialOptions& opts,
                                           std::uint64_t base_seed, std::size_t trials) {
    std::vector<TrialResult> out(trials);
    for (std::size_t i = 0; i < trials; ++i)
        out[i] = run_trial(sc, cfg, opts, base_seed + i);
    return out;
}

std::vector<TrialResult> run_trials(const Scenario& sc, const DetectorConfig& cfg,
                                    const TrialOptions& opts, std::uint64_t base_seed,
                                    std::size_t trials) {
    std::vector<TrialResult> out(trials);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < trials; ++i)
        out[i] = run_trial(sc, cfg, opts, base_seed + i);
    return out;
}

PowerCurve aggregate_power(const std::vector<TrialResult>& trials) {
    if (trials.empty()) throw std::invalid_argument("aggregate_power: no trials");
    const std::uint64_t T = trials.front().horizon;
    for (const auto& tr : trials) {
        if (tr.horizon != T)
            throw std::invalid_argument("aggregate_power: trials have unequal horizons");
    }
    PowerCurve pc;
    pc.times.resize(T);
    pc.power.resize(T, 0.0);
    for (std::uint64_t t = 1; t <= T; ++t) pc.times[t - 1] = t;
    for (const auto& tr : trials) {
        if (tr.tau && *tr.tau >= 1 && *tr.tau <= T) pc.power[*tr.tau - 1] += 1.0;
    }
    double cum = 0.0;
    for (auto& p : pc.power) {
        cum += p;
        p = cum / static_cast<double>(trials.size());
    }
    return pc;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double rejection_time_ratio(const std::vector<TrialResult>& trials_a,
                            const std::vector<TrialResult>& trials_b,
                            std::uint64_t horizon_cap) {
    if (trials_a.empty() || trials_a.size() != trials_b.size())
        throw std::invalid_argument("rejection_time_ratio: need nonempty paired lists");
    std::vector<double> ratios;
    ratios.reserve(trials_a.size());
    for (std::size_t i = 0; i < trials_a.size(); ++i) {
        const double ta = static_cast<double>(trials_a[i].tau.value_or(horizon_cap));
        const double tb = static_cast<double>(trials_b[i].tau.value_or(horizon_cap));
        ratios.push_back(ta / tb);
    }
    return median(std::move(ratios));
}

StoppingSummary summarize_stopping(const std::vector<TrialResult>& trials,
                                   std::uint64_t cap) {
    if (trials.empty()) throw std::invalid_argument("summarize_stopping: no trials");
    std::vector<double> taus;
    taus.reserve(trials.size());
    std::size_t rejected = 0;
    double sum = 0.0;
    for (const auto& tr : trials) {
        const double t = static_cast<double>(tr.tau.value_or(cap));
        if (tr.tau) ++rejected;
        taus.push_back(t);
        sum += t;
    }
    return StoppingSummary{median(std::move(taus)), sum / static_cast<double>(trials.size()),
                           static_cast<double>(rejected) / static_cast<double>(trials.size())};
}

SignalDiagnostic estimate_signal(const ReferenceSet& ref,
                                 const std::vector<double>& alt_samples, double k) {
    if (alt_samples.empty())
        throw std::invalid_argument("estimate_signal: alt_samples is empty");
    if (!(k >= 0.0)) throw std::invalid_argument("estimate_signal: k must be >= 0");
    double sum = 0.0;
    for (double x : alt_samples) sum += ref.pvalue(x);
    const double mean_phat = sum / static_cast<double>(alt_samples.size());
    const double eps_bar = ref.epsilon();
    const double delta_k = std::abs(mean_phat - 0.5) - std::sqrt(1.0 + k * k) * eps_bar;
    return SignalDiagnostic{delta_k, mean_phat, eps_bar};
}

double ons_regret_vs_grid(std::span<const double> p_hats, std::span<const double> etas,
                          double eps, const BetContext& ctx, double grid_step) {
    if (p_hats.size() != etas.size())
        throw std::invalid_argument("ons_regret_vs_grid: path length mismatch");
    if (!(grid_step > 0.0))
        throw std::invalid_argument("ons_regret_vs_grid: grid_step must be > 0");

    double played_loss = 0.0;
    for (std::size_t t = 0; t < p_hats.size(); ++t)
        played_loss -= std::log1p(bet_increment(p_hats[t], etas[t], eps, ctx));

    const auto grid_points = static_cast<std::size_t>(std::llround(1.0 / grid_step)) + 1;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid_points; ++j) {
        const double eta = std::min(0.5, -0.5 + static_cast<double>(j) * grid_step);
        double loss = 0.0;
        for (double p : p_hats) loss -= std::log1p(bet_increment(p, eta, eps, ctx));
        best_loss = std::min(best_loss, loss);
    }
    return played_loss - best_loss;
}

}  // namespace ctm
