#pragma once

#include <cmath>
#include <stdexcept>

namespace ctm {

// Scaling constant 1 / (0.5 + sqrt(1 + k^2) * eps_max); keeps the bet in [0,2].
inline double scaling_constant(double eps_max, double k) {
    if (!(eps_max >= 0.0 && eps_max <= 1.0))
        throw std::invalid_argument("scaling_constant: eps_max must lie in [0,1]");
    if (!(k >= 0.0)) throw std::invalid_argument("scaling_constant: k must be >= 0");
    return 1.0 / (0.5 + std::sqrt(1.0 + k * k) * eps_max);
}

// Parameters of the smoothed robust betting function.
struct BetContext {
    double k;        // smoothing constant for |eta| ~ sqrt(eta^2 + k^2)
    double eps_max;  // band half-width bound entering the scaling constant
    double scale_c;  // precomputed scaling constant
    double clip;     // clipping threshold for the betting parameter

    BetContext(double k_, double eps_max_, double clip_)
        : k(k_), eps_max(eps_max_), scale_c(scaling_constant(eps_max_, k_)), clip(clip_) {
        if (!(clip_ >= 0.0)) throw std::invalid_argument("BetContext: clip must be >= 0");
    }
};

namespace detail {
inline void check_bet_args(double p_hat, double eta, double eps) {
    if (!(p_hat >= 0.0 && p_hat <= 1.0))
        throw std::invalid_argument("bet: p_hat must lie in [0,1]");
    if (!(eta >= -0.5 && eta <= 0.5))
        throw std::invalid_argument("bet: eta must lie in [-1/2,1/2]");
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("bet: eps must lie in [0,1]");
}
}  // namespace detail

// Increment g of the bet b = 1 + g:
//   g = C * (eta * (p_hat - 0.5) - sqrt(eta^2 + k^2) * eps).
// For eta in [-1/2,1/2] and eps <= eps_max, g stays in [-1/2,1/2].
inline double bet_increment(double p_hat, double eta, double eps, const BetContext& ctx) {
    detail::check_bet_args(p_hat, eta, eps);
    const double smooth_abs = std::sqrt(eta * eta + ctx.k * ctx.k);
    return ctx.scale_c * (eta * (p_hat - 0.5) - smooth_abs * eps);
}

// Partial derivative of bet_increment with respect to eta:
//   C * (p_hat - 0.5 - eta / sqrt(eta^2 + k^2) * eps).
inline double bet_gradient(double p_hat, double eta, double eps, const BetContext& ctx) {
    detail::check_bet_args(p_hat, eta, eps);
    const double smooth_abs = std::sqrt(eta * eta + ctx.k * ctx.k);
    const double ratio = smooth_abs > 0.0 ? eta / smooth_abs : 0.0;
    return ctx.scale_c * (p_hat - 0.5 - ratio * eps);
}

// Zero out small betting parameters; |eta| < clip means no bet is placed.
inline double clip_eta(double eta, double clip) {
    return std::abs(eta) < clip ? 0.0 : eta;
}

}  // namespace ctm
