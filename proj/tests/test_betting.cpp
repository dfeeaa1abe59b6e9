#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ctm/betting.hpp"
#include "ctm/ecdf.hpp"
#include "ctm/rng.hpp"
#include "support/stats.hpp"

using ctm::BetContext;

namespace {
const double kEps1000 = 0.0387022756020495;  // dkw_half_width(1000, 0.1)
}

TEST_CASE("scaling constant") {
    CHECK(ctm::scaling_constant(0.0, 0.0) == 2.0);
    CHECK(ctm::scaling_constant(kEps1000, 1e-6) == doctest::Approx(1.856313).epsilon(1e-5));
    CHECK(ctm::scaling_constant(1.0, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(ctm::scaling_constant(-0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ctm::scaling_constant(1.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ctm::scaling_constant(0.5, -1.0), std::invalid_argument);
}

TEST_CASE("bet increment") {
    const BetContext flat(0.0, 0.0, 0.0);
    CHECK(ctm::bet_increment(0.5, 0.5, 0.0, flat) == 0.0);

    const BetContext ctx(1e-6, kEps1000, 0.0);
    CHECK(ctx.scale_c == doctest::Approx(1.856313).epsilon(1e-5));
    CHECK(ctm::bet_increment(1.0, 0.5, kEps1000, ctx) ==
          doctest::Approx(0.4281564653521407).epsilon(1e-9));
    CHECK(ctm::bet_increment(0.5, 0.0, kEps1000, ctx) ==
          doctest::Approx(-7.18435346e-8).epsilon(1e-4));

    CHECK_THROWS_AS(ctm::bet_increment(0.5, 0.6, 0.0, ctx), std::invalid_argument);
    CHECK_THROWS_AS(ctm::bet_increment(1.5, 0.1, 0.0, ctx), std::invalid_argument);
    CHECK_THROWS_AS(ctm::bet_increment(0.5, 0.1, 2.0, ctx), std::invalid_argument);
}

TEST_CASE("bet gradient") {
    const BetContext ctx(1e-6, kEps1000, 0.0);
    CHECK(ctm::bet_gradient(0.9, 0.0, kEps1000, ctx) ==
          doctest::Approx(0.7425251722817557).epsilon(1e-9));
    CHECK(ctm::bet_gradient(0.5, 0.0, kEps1000, ctx) == 0.0);

    // k = 0 limit: eta/|eta| = 1 for eta > 0
    const BetContext k0(0.0, kEps1000, 0.0);
    CHECK(k0.scale_c == doctest::Approx(2.0 / (1.0 + 2.0 * kEps1000)).epsilon(1e-12));
    CHECK(ctm::bet_gradient(1.0, 0.5, kEps1000, k0) ==
          doctest::Approx(k0.scale_c * (0.5 - kEps1000)).epsilon(1e-12));
}

TEST_CASE("bet stays within [0,2] and within [1/2,3/2] for in-band eps") {
    const BetContext ctx(1e-6, kEps1000, 0.0);
    ctm::Rng rng(5);
    for (int i = 0; i < 20000; ++i) {
        const double p = rng.uniform();
        const double eta = rng.uniform(-0.5, 0.5);
        const double eps = rng.uniform(0.0, kEps1000);
        const double b = 1.0 + ctm::bet_increment(p, eta, eps, ctx);
        CHECK(b >= 0.5);
        CHECK(b <= 1.5);
    }
    // dense corner grid
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0})
        for (double eta : {-0.5, -0.1, 0.0, 0.1, 0.5})
            for (double eps : {0.0, kEps1000 / 2.0, kEps1000}) {
                const double b = 1.0 + ctm::bet_increment(p, eta, eps, ctx);
                CHECK(b >= 0.0);
                CHECK(b <= 2.0);
            }
}

TEST_CASE("gradient matches central finite differences") {
    const double h = 1e-5;
    ctm::Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
        const double eps_max = rng.uniform(0.0, 0.5);
        const BetContext ctx(rng.uniform(1e-7, 1e-3), eps_max, 0.0);
        const double p = rng.uniform();
        const double eps = rng.uniform(0.0, eps_max);
        double eta = rng.uniform(-0.5 + h, 0.5 - h);
        if (std::abs(eta) <= 1e-3) eta = eta < 0 ? eta - 1e-3 : eta + 1e-3;
        const double grad = ctm::bet_gradient(p, eta, eps, ctx);
        const double fd = (ctm::bet_increment(p, eta + h, eps, ctx) -
                           ctm::bet_increment(p, eta - h, eps, ctx)) /
                          (2.0 * h);
        CHECK(grad == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("bet is affine in p_hat with slope C*eta") {
    const BetContext ctx(1e-6, kEps1000, 0.0);
    ctm::Rng rng(29);
    for (int i = 0; i < 200; ++i) {
        const double eta = rng.uniform(-0.5, 0.5);
        const double eps = rng.uniform(0.0, kEps1000);
        const double g0 = ctm::bet_increment(0.0, eta, eps, ctx);
        const double g1 = ctm::bet_increment(0.5, eta, eps, ctx);
        const double g2 = ctm::bet_increment(1.0, eta, eps, ctx);
        CHECK(g1 == doctest::Approx(0.5 * (g0 + g2)).epsilon(1e-10));  // collinear
        CHECK(g2 - g0 == doctest::Approx(ctx.scale_c * eta).epsilon(1e-10));
    }
}

TEST_CASE("clipping") {
    CHECK(ctm::clip_eta(0.05, 0.1) == 0.0);
    CHECK(ctm::clip_eta(-0.05, 0.1) == 0.0);
    CHECK(ctm::clip_eta(0.3, 0.1) == 0.3);
    CHECK(ctm::clip_eta(-0.3, 0.1) == -0.3);
    // clip = 0 disables clipping
    for (double eta : {-0.5, -0.07, 0.0, 0.07, 0.5}) CHECK(ctm::clip_eta(eta, 0.0) == eta);
}

TEST_CASE("bet factor is a supermartingale under the null given a valid band") {
    // D0 from N(0,1); condition on the DKW band holding, then the mean bet
    // over null p-hat draws must not exceed 1 beyond Monte Carlo noise.
    ctm::Rng rng(404);
    std::vector<double> samples(1000);
    for (auto& s : samples) s = rng.gaussian();
    const ctm::ReferenceSet ref(samples, 0.1);
    REQUIRE(teststats::ecdf_sup_distance(ref.scores(), teststats::normal_cdf) <=
            ref.epsilon());

    const BetContext ctx(1e-6, ref.epsilon(), 0.0);
    const std::size_t draws = 100000;
    for (double eta : {-0.5, -0.25, 0.25, 0.5}) {
        double sum = 0.0, sum_sq = 0.0;
        ctm::Rng draw_rng(505);
        for (std::size_t i = 0; i < draws; ++i) {
            const double p_hat = ref.pvalue(draw_rng.gaussian());
            const double b = 1.0 + ctm::bet_increment(p_hat, eta, ref.epsilon(), ctx);
            sum += b;
            sum_sq += b * b;
        }
        const double mean = sum / draws;
        const double var = sum_sq / draws - mean * mean;
        const double se = std::sqrt(var / draws);
        CHECK(mean <= 1.0 + 3.0 * se);
    }
}
