#include "ctm/ecdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ctm {

double dkw_half_width(std::size_t n, double delta) {
    if (n < 1) throw std::invalid_argument("dkw_half_width: n must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("dkw_half_width: delta must lie in (0,1)");
    const double raw = std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
    return std::min(1.0, raw);
}

ReferenceSet::ReferenceSet(std::vector<double> samples, double delta)
    : scores_(std::move(samples)), delta_(delta) {
    if (scores_.empty())
        throw std::invalid_argument("ReferenceSet: need at least one reference score");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("ReferenceSet: delta must lie in (0,1)");
    for (double s : scores_) {
        if (!std::isfinite(s))
            throw std::invalid_argument("ReferenceSet: reference scores must be finite");
    }
    std::sort(scores_.begin(), scores_.end());
    epsilon_ = dkw_half_width(scores_.size(), delta);
}

std::size_t ReferenceSet::count_less(double x) const {
    return static_cast<std::size_t>(
        std::lower_bound(scores_.begin(), scores_.end(), x) - scores_.begin());
}

std::size_t ReferenceSet::count_less_equal(double x) const {
    return static_cast<std::size_t>(
        std::upper_bound(scores_.begin(), scores_.end(), x) - scores_.begin());
}

double ReferenceSet::cdf(double x) const {
    if (std::isnan(x)) throw std::invalid_argument("ReferenceSet::cdf: x is NaN");
    return static_cast<double>(count_less_equal(x)) / static_cast<double>(scores_.size());
}

double ReferenceSet::randomized_pvalue(double x, double u) const {
    if (std::isnan(x))
        throw std::invalid_argument("ReferenceSet::randomized_pvalue: x is NaN");
    if (!(u >= 0.0 && u <= 1.0))
        throw std::invalid_argument("ReferenceSet::randomized_pvalue: u must lie in [0,1]");
    const double less = static_cast<double>(count_less(x));
    const double ties = static_cast<double>(count_less_equal(x) - count_less(x));
    // The test point counts as one additional tie with itself.
    return (less + u * (1.0 + ties)) / static_cast<double>(scores_.size() + 1);
}

GrowingPool::GrowingPool(const ReferenceSet& ref) {
    for (double s : ref.scores()) insert(s);
}

void GrowingPool::insert(double x) {
    if (std::isnan(x)) throw std::invalid_argument("GrowingPool::insert: x is NaN");
    tree_.insert({x, next_id_++});
}

std::size_t GrowingPool::count_less(double x) const {
    return tree_.order_of_key({x, 0});
}

std::size_t GrowingPool::count_equal(double x) const {
    const auto upper = tree_.order_of_key({x, std::numeric_limits<std::uint64_t>::max()});
    return upper - count_less(x);
}

double GrowingPool::randomized_pvalue(double x, double u) const {
    if (std::isnan(x))
        throw std::invalid_argument("GrowingPool::randomized_pvalue: x is NaN");
    if (!(u >= 0.0 && u <= 1.0))
        throw std::invalid_argument("GrowingPool::randomized_pvalue: u must lie in [0,1]");
    const double less = static_cast<double>(count_less(x));
    const double ties = static_cast<double>(count_equal(x));
    return (less + u * ties) / static_cast<double>(tree_.size());
}

}  // namespace ctm
