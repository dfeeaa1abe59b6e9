#pragma once

#include <cassert>
#include <cstdint>

#include "ctm/betting.hpp"

namespace ctm {

// Online Newton Step state for the betting parameter. `eta` is the unclipped
// value maintained by the learner; clipping applies only at bet time.
struct OnsState {
    double eta = 0.0;       // current betting parameter, in [-1/2, 1/2]
    double a = 1.0;         // second-order accumulator, nondecreasing
    std::uint64_t t = 0;    // number of updates absorbed
};

inline OnsState ons_init() { return OnsState{}; }

// One ONS step on the negative-log-bet loss at the observed (p_hat, eps):
//   z = g' / (1 + g),  a <- a + z^2,  eta <- clamp(eta + 4 z / a, [-1/2, 1/2]).
inline OnsState ons_update(const OnsState& s, double p_hat, double eps,
                           const BetContext& ctx) {
    const double g = bet_increment(p_hat, s.eta, eps, ctx);
    const double gp = bet_gradient(p_hat, s.eta, eps, ctx);
    // 1 + g >= 1/2 by the scaling constant; the division is always safe.
    assert(1.0 + g >= 0.25);
    const double z = gp / (1.0 + g);
    OnsState next;
    next.a = s.a + z * z;
    next.eta = std::min(0.5, std::max(-0.5, s.eta + 4.0 * z / next.a));
    next.t = s.t + 1;
    return next;
}

}  // namespace ctm
