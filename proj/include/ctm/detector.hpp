#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctm/betting.hpp"
#include "ctm/ecdf.hpp"
#include "ctm/ons.hpp"
#include "ctm/rng.hpp"

namespace ctm {

enum class Variant { conditional, standard, invalid };

const char* variant_name(Variant v);
std::optional<Variant> parse_variant(const std::string& name);

struct DetectorConfig {
    double alpha = 0.05;            // test level; reject when wealth >= 1/alpha
    double delta = 0.1;             // band confidence level
    double k = 1e-6;                // smoothing constant of the bet
    double clip = 0.1;              // clipping threshold (0 disables clipping)
    Variant variant = Variant::conditional;
    std::uint64_t warmup = 0;       // initial steps that update state but never bet

    double threshold() const { return 1.0 / alpha; }
    void validate() const;          // throws std::invalid_argument on bad ranges
};

struct StepOutcome {
    double p_value;
    double eta;         // betting parameter actually wagered (0 when clipped or warming up)
    double bet_factor;  // wealth multiplier applied this step
    double wealth;
    bool reject;        // wealth has reached 1/alpha at some step so far
};

// Wealth-process state machine over a univariate score stream. One instance
// per stream; stepping is strictly sequential. Wealth is accumulated in log
// space and exposed as exp(log-wealth), saturating at the double max.
class Detector {
public:
    Detector(const std::vector<double>& ref_samples, const DetectorConfig& cfg,
             std::uint64_t seed);

    // Advance one step on score x. Stepping after rejection is permitted; the
    // decision stays reject.
    StepOutcome step(double x);

    double wealth() const;
    double log_wealth() const { return log_wealth_; }
    std::uint64_t time() const { return t_; }
    std::optional<std::uint64_t> rejected_at() const { return rejected_at_; }
    const OnsState& ons() const { return ons_; }
    const ReferenceSet& reference() const { return ref_; }
    const DetectorConfig& config() const { return cfg_; }
    const BetContext& bet_context() const { return ctx_; }

    // Band half-width entering each step's bet (constant DKW width for the
    // conditional variant, zero for the baselines).
    double band_epsilon() const { return band_eps_; }

private:
    DetectorConfig cfg_;
    ReferenceSet ref_;
    std::optional<GrowingPool> pool_;
    BetContext ctx_;
    double band_eps_;
    OnsState ons_;
    Rng rng_;
    double log_wealth_ = 0.0;
    double log_threshold_;
    std::uint64_t t_ = 0;
    std::optional<std::uint64_t> rejected_at_;
};

}  // namespace ctm
