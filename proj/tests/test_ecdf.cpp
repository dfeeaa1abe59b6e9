#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "ctm/ecdf.hpp"
#include "ctm/rng.hpp"
#include "support/stats.hpp"

using ctm::GrowingPool;
using ctm::ReferenceSet;

namespace {
const double kNan = std::numeric_limits<double>::quiet_NaN();
}

TEST_CASE("dkw half-width") {
    // sqrt(ln(20)/2000), evaluated at high precision
    CHECK(ctm::dkw_half_width(1000, 0.1) == doctest::Approx(0.0387022756020495).epsilon(1e-10));
    // raw value 1.223873 clamps to 1
    CHECK(ctm::dkw_half_width(1, 0.1) == 1.0);
    CHECK_THROWS_AS(ctm::dkw_half_width(0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(ctm::dkw_half_width(10, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(ctm::dkw_half_width(10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ctm::dkw_half_width(10, 1.0), std::invalid_argument);
}

TEST_CASE("reference construction") {
    ctm::Rng rng(7);
    std::vector<double> samples(1000);
    for (auto& s : samples) s = rng.gaussian();
    const ReferenceSet ref(samples, 0.1);
    CHECK(ref.size() == 1000);
    CHECK(ref.epsilon() == doctest::Approx(0.038702).epsilon(1e-6));
    CHECK(ref.delta() == 0.1);
    CHECK(std::is_sorted(ref.scores().begin(), ref.scores().end()));

    const ReferenceSet tiny({5.0}, 0.1);
    CHECK(tiny.epsilon() == 1.0);

    CHECK_THROWS_AS(ReferenceSet({}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(ReferenceSet({1.0}, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(ReferenceSet({1.0, kNan}, 0.1), std::invalid_argument);
}

TEST_CASE("ecdf evaluation") {
    const ReferenceSet ref({-1.0, 0.0, 1.0, 2.0}, 0.1);
    CHECK(ref.cdf(0.5) == 0.5);
    CHECK(ref.cdf(-10.0) == 0.0);
    CHECK(ref.cdf(2.0) == 1.0);
    CHECK(ref.cdf(10.0) == 1.0);
    // right-continuous step at a sample point
    CHECK(ref.cdf(0.0) == 0.5);
    CHECK(ref.cdf(std::nextafter(0.0, -1.0)) == 0.25);
    CHECK_THROWS_AS(ref.cdf(kNan), std::invalid_argument);
}

TEST_CASE("ecdf is a nondecreasing step function with values on the 1/n grid") {
    ctm::Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> samples(1 + static_cast<std::size_t>(rng.uniform() * 50));
        for (auto& s : samples) s = std::round(rng.gaussian() * 4.0) / 4.0;  // force ties
        const ReferenceSet ref(samples, 0.1);
        const double n = static_cast<double>(ref.size());
        double prev = -1.0;
        for (int i = 0; i < 200; ++i) {
            const double x = rng.uniform(-4.0, 4.0);
            const double lo = std::min(prev, x), hi = std::max(prev, x);
            if (i > 0) CHECK(ref.cdf(lo) <= ref.cdf(hi));
            const double v = ref.cdf(x) * n;
            CHECK(v == doctest::Approx(std::round(v)).epsilon(1e-12));
            prev = x;
        }
    }
}

TEST_CASE("fixed p-value is deterministic and never mutates the reference") {
    const ReferenceSet ref({-1.0, 0.0, 1.0, 2.0}, 0.1);
    const auto before = ref.scores();
    CHECK(ref.pvalue(0.5) == 0.5);
    CHECK(ref.pvalue(0.5) == 0.5);
    CHECK(ref.pvalue(-10.0) == 0.0);
    CHECK(ref.pvalue(10.0) == 1.0);
    CHECK(ref.scores() == before);
    CHECK(ref.size() == 4);
}

TEST_CASE("randomized fixed-reference p-value") {
    const ReferenceSet ref({1.0, 2.0, 3.0}, 0.1);
    CHECK(ref.randomized_pvalue(2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ref.randomized_pvalue(0.0, 0.0) == 0.0);
    CHECK(ref.randomized_pvalue(4.0, 1.0) == 1.0);
    CHECK_THROWS_AS(ref.randomized_pvalue(2.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(ref.randomized_pvalue(2.0, 1.1), std::invalid_argument);
}

TEST_CASE("pooled randomized p-value counts ties exactly") {
    const ReferenceSet ref({-1.0, 0.0, 2.0}, 0.1);
    GrowingPool pool(ref);
    pool.insert(1.0);
    CHECK(pool.size() == 4);
    CHECK(pool.randomized_pvalue(1.0, 0.5) == doctest::Approx(0.625).epsilon(1e-12));

    const ReferenceSet all_ties({3.0, 3.0}, 0.1);
    GrowingPool p2(all_ties);
    p2.insert(3.0);
    CHECK(p2.randomized_pvalue(3.0, 0.0) == 0.0);

    const ReferenceSet run({1.0, 2.0, 3.0, 4.0}, 0.1);
    GrowingPool p3(run);
    p3.insert(5.0);
    CHECK(p3.randomized_pvalue(5.0, 1.0) == 1.0);

    CHECK_THROWS_AS(p3.randomized_pvalue(5.0, 2.0), std::invalid_argument);
}

TEST_CASE("pool ranks match brute force on random multisets") {
    ctm::Rng rng(23);
    for (int rep = 0; rep < 10; ++rep) {
        const ReferenceSet ref({0.0}, 0.1);
        GrowingPool pool(ref);
        std::vector<double> mirror{0.0};
        for (int i = 0; i < 300; ++i) {
            const double x = std::round(rng.gaussian() * 2.0) / 2.0;
            pool.insert(x);
            mirror.push_back(x);
            std::size_t less = 0, equal = 0;
            for (double m : mirror) {
                less += m < x;
                equal += m == x;
            }
            CHECK(pool.count_less(x) == less);
            CHECK(pool.count_equal(x) == equal);
            CHECK(pool.size() == mirror.size());
        }
    }
}

TEST_CASE("pooled randomized p-values are uniform under exchangeability") {
    // 1e4 sequential pooled p-values on an i.i.d. stream; KS at level 0.01.
    ctm::Rng rng(2024);
    std::vector<double> ref_samples(100);
    for (auto& s : ref_samples) s = rng.gaussian();
    const ReferenceSet ref(ref_samples, 0.1);
    GrowingPool pool(ref);

    std::vector<double> pvals;
    pvals.reserve(10000);
    for (int t = 0; t < 10000; ++t) {
        const double x = rng.gaussian();
        pool.insert(x);
        pvals.push_back(pool.randomized_pvalue(x, rng.uniform()));
    }
    const double d = teststats::ks_statistic_uniform(pvals);
    CHECK(teststats::ks_pvalue(d, pvals.size()) > 0.01);
}

TEST_CASE("dkw band covers the true cdf at its nominal rate") {
    // 500 reference draws from N(0,1); the band must hold in all but
    // ~delta of them (binomial slack: 500*0.1 + 3*sqrt(500*0.1*0.9) ~= 70).
    const std::size_t reps = 500, n = 200;
    const double delta = 0.1;
    std::size_t failures = 0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        ctm::Rng rng(ctm::derive_seed(99, rep));
        std::vector<double> samples(n);
        for (auto& s : samples) s = rng.gaussian();
        const ReferenceSet ref(samples, delta);
        const double sup = teststats::ecdf_sup_distance(ref.scores(), teststats::normal_cdf);
        if (sup > ref.epsilon()) ++failures;
    }
    CHECK(failures <= 70);
}
