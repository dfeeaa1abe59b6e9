#pragma once

#include <cstddef>
#include <cstdint>
#include <ext/pb_ds/assoc_container.hpp>
#include <ext/pb_ds/tree_policy.hpp>
#include <utility>
#include <vector>

namespace ctm {

// DKW half-width min(1, sqrt(log(2/delta) / (2n))).
double dkw_half_width(std::size_t n, double delta);

// Fixed reference scores with their empirical CDF and DKW confidence band.
// Immutable after construction; safe to share across threads.
class ReferenceSet {
public:
    // Sorts a copy of `samples` and computes the band half-width at level `delta`.
    // Throws std::invalid_argument on empty input, non-finite scores, or
    // delta outside (0,1).
    ReferenceSet(std::vector<double> samples, double delta);

    // Fraction of reference scores <= x (right-continuous step function).
    double cdf(double x) const;

    // Fixed-reference conformal p-value, p = F0_hat(x). Deterministic; the
    // reference is never mutated.
    double pvalue(double x) const { return cdf(x); }

    // Randomized conformal p-value over D_0 plus the test point itself:
    // (#{X0_i < x} + u * (1 + #{X0_i = x})) / (n + 1). Marginally uniform
    // under the null but not independent across calls.
    double randomized_pvalue(double x, double u) const;

    double epsilon() const { return epsilon_; }
    double delta() const { return delta_; }
    std::size_t size() const { return scores_.size(); }
    const std::vector<double>& scores() const { return scores_; }

    std::size_t count_less(double x) const;
    std::size_t count_less_equal(double x) const;

private:
    std::vector<double> scores_;  // nondecreasing
    double delta_;
    double epsilon_;
};

// Multiset of scores that absorbs each test point as it arrives; rank queries
// back the pooled conformal p-value. Single writer: the owning detector.
class GrowingPool {
public:
    explicit GrowingPool(const ReferenceSet& ref);

    void insert(double x);

    // Pooled randomized conformal p-value; `x` must already be in the pool:
    // (#{X_i < x} + u * #{X_i = x}) / |pool|.
    double randomized_pvalue(double x, double u) const;

    std::size_t size() const { return tree_.size(); }
    std::size_t count_less(double x) const;
    std::size_t count_equal(double x) const;

private:
    // Order-statistics tree with a tie-break counter for multiset semantics.
    using Entry = std::pair<double, std::uint64_t>;
    using Tree = __gnu_pbds::tree<Entry, __gnu_pbds::null_type, std::less<Entry>,
                                  __gnu_pbds::rb_tree_tag,
                                  __gnu_pbds::tree_order_statistics_node_update>;
    Tree tree_;
    std::uint64_t next_id_ = 0;
};

}  // namespace ctm
