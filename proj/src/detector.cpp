#include "ctm/detector.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ctm {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::conditional: return "conditional";
        case Variant::standard: return "standard";
        case Variant::invalid: return "invalid";
    }
    return "?";
}

std::optional<Variant> parse_variant(const std::string& name) {
    if (name == "conditional") return Variant::conditional;
    if (name == "standard") return Variant::standard;
    if (name == "invalid") return Variant::invalid;
    return std::nullopt;
}

void DetectorConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("DetectorConfig: alpha must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("DetectorConfig: delta must lie in (0,1)");
    if (!(k > 0.0)) throw std::invalid_argument("DetectorConfig: k must be > 0");
    if (!(clip >= 0.0)) throw std::invalid_argument("DetectorConfig: clip must be >= 0");
}

namespace {

// The baselines bet 1 + 2*eta*(p - 0.5) on their p-values: the robust bet with
// no band correction (eps = 0, k = 0, so the scaling constant is exactly 2).
BetContext make_context(const DetectorConfig& cfg, const ReferenceSet& ref) {
    if (cfg.variant == Variant::conditional)
        return BetContext(cfg.k, ref.epsilon(), cfg.clip);
    return BetContext(0.0, 0.0, cfg.clip);
}

}  // namespace

Detector::Detector(const std::vector<double>& ref_samples, const DetectorConfig& cfg,
                   std::uint64_t seed)
    : cfg_(cfg),
      ref_(ref_samples, cfg.delta),
      ctx_(make_context(cfg, ref_)),
      band_eps_(cfg.variant == Variant::conditional ? ref_.epsilon() : 0.0),
      rng_(seed),
      log_threshold_(std::log(cfg.threshold())) {
    cfg_.validate();
    if (cfg_.variant == Variant::standard) pool_.emplace(ref_);
}

double Detector::wealth() const {
    if (log_wealth_ >= std::log(std::numeric_limits<double>::max()))
        return std::numeric_limits<double>::max();
    return std::exp(log_wealth_);
}

StepOutcome Detector::step(double x) {
    if (std::isnan(x)) throw std::invalid_argument("Detector::step: score is NaN");
    ++t_;

    double p;
    switch (cfg_.variant) {
        case Variant::conditional:
            p = ref_.pvalue(x);
            break;
        case Variant::standard:
            pool_->insert(x);
            p = pool_->randomized_pvalue(x, rng_.uniform());
            break;
        case Variant::invalid:
            p = ref_.randomized_pvalue(x, rng_.uniform());
            break;
        default:
            throw std::logic_error("Detector::step: unknown variant");
    }

    double eta_bet = clip_eta(ons_.eta, cfg_.clip);
    double factor = 1.0;
    if (t_ <= cfg_.warmup || eta_bet == 0.0) {
        // No bet is placed and no wealth is lost.
        eta_bet = 0.0;
    } else {
        const double g = bet_increment(p, eta_bet, band_eps_, ctx_);
        assert(1.0 + g > 0.0);
        factor = 1.0 + g;
        log_wealth_ += std::log1p(g);
    }

    if (!rejected_at_ && log_wealth_ >= log_threshold_) rejected_at_ = t_;

    // Learner update last (Algorithm order); it sees the unclipped eta.
    ons_ = ons_update(ons_, p, band_eps_, ctx_);

    return StepOutcome{p, eta_bet, factor, wealth(), rejected_at_.has_value()};
}

}  // namespace ctm
