#include "auditgame/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "auditgame/common.hpp"

namespace auditgame {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

DiscreteCountDistribution::DiscreteCountDistribution(int support_min, std::vector<double> pmf,
                                                     double modeled_mass)
    : support_min_(support_min), modeled_mass_(modeled_mass), pmf_(std::move(pmf)) {
    if (support_min_ < 1)
        throw ValidationError("count distribution: support_min must be >= 1, got " +
                              std::to_string(support_min_));
    if (pmf_.empty()) throw ValidationError("count distribution: empty pmf");
    if (!(modeled_mass_ > 0.0 && modeled_mass_ <= 1.0 + 1e-12))
        throw ValidationError("count distribution: modeled_mass must be in (0,1]");
    modeled_mass_ = std::min(modeled_mass_, 1.0);
    double total = 0.0;
    for (double p : pmf_) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw ValidationError("count distribution: pmf entries must be finite and >= 0");
        total += p;
    }
    if (total <= 0.0) throw ValidationError("count distribution: pmf has zero total mass");
    cdf_.resize(pmf_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pmf_.size(); ++i) {
        pmf_[i] /= total;
        acc += pmf_[i];
        cdf_[i] = acc;
    }
    cdf_.back() = 1.0;
}

double DiscreteCountDistribution::cdf(int n) const {
    if (n < support_min_) return 0.0;
    if (n >= support_max()) return 1.0;
    return cdf_[static_cast<std::size_t>(n - support_min_)];
}

double DiscreteCountDistribution::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < pmf_.size(); ++i)
        m += (support_min_ + static_cast<int>(i)) * pmf_[i];
    return m;
}

int DiscreteCountDistribution::sample(Rng& rng) const {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t idx = std::min<std::size_t>(
        static_cast<std::size_t>(it - cdf_.begin()), pmf_.size() - 1);
    return support_min_ + static_cast<int>(idx);
}

DiscreteCountDistribution discretize_gaussian(double mean, double stddev, int coverage_halfwidth) {
    if (!(stddev > 0.0)) throw ValidationError("discretize_gaussian: std must be > 0");
    if (coverage_halfwidth < 0)
        throw ValidationError("discretize_gaussian: coverage_halfwidth must be >= 0");
    const long long center = std::llround(mean);
    const long long hi = center + coverage_halfwidth;
    const long long lo = std::max<long long>(1, center - coverage_halfwidth);
    if (hi < 1)
        throw ValidationError("discretize_gaussian: support is empty after clamping to >= 1");
    std::vector<double> pmf;
    pmf.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long long n = lo; n <= hi; ++n) {
        const double upper = normal_cdf((static_cast<double>(n) + 0.5 - mean) / stddev);
        const double lower = normal_cdf((static_cast<double>(n) - 0.5 - mean) / stddev);
        pmf.push_back(std::max(0.0, upper - lower));
    }
    const double covered = normal_cdf((static_cast<double>(hi) + 0.5 - mean) / stddev) -
                           normal_cdf((static_cast<double>(lo) - 0.5 - mean) / stddev);
    return DiscreteCountDistribution(static_cast<int>(lo), std::move(pmf), covered);
}

DiscreteCountDistribution empirical_distribution(const std::vector<int>& samples) {
    if (samples.empty()) throw ValidationError("empirical_distribution: empty sample list");
    int lo = std::numeric_limits<int>::max();
    int hi = 1;
    for (int s : samples) {
        if (s < 0) throw ValidationError("empirical_distribution: negative count");
        const int v = std::max(1, s);  // a count of 0 is clamped: support starts at 1
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<double> pmf(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (int s : samples) pmf[static_cast<std::size_t>(std::max(1, s) - lo)] += 1.0;
    return DiscreteCountDistribution(lo, std::move(pmf));
}

long long JointCountModel::joint_support_size() const {
    long long total = 1;
    for (const auto& d : per_type) {
        const long long s = d.support_size();
        if (total > std::numeric_limits<long long>::max() / s)
            return std::numeric_limits<long long>::max();
        total *= s;
    }
    return total;
}

std::vector<int> sample_counts(const JointCountModel& model, Rng& rng) {
    std::vector<int> z(model.per_type.size());
    for (std::size_t t = 0; t < model.per_type.size(); ++t) z[t] = model.per_type[t].sample(rng);
    return z;
}

void enumerate_joint(const JointCountModel& model,
                     const std::function<void(const std::vector<int>&, double)>& visit,
                     long long cap) {
    if (model.per_type.empty()) throw SolveError("enumerate_joint: model has no types");
    if (model.joint_support_size() > cap)
        throw SolveError("enumerate_joint: joint support size " +
                         std::to_string(model.joint_support_size()) + " exceeds cap " +
                         std::to_string(cap));
    const int n = model.num_types();
    std::vector<int> z(n);
    for (int t = 0; t < n; ++t) z[t] = model.per_type[t].support_min();
    for (;;) {
        double prob = 1.0;
        for (int t = 0; t < n; ++t) prob *= model.per_type[t].pmf(z[t]);
        visit(z, prob);
        int t = n - 1;
        while (t >= 0) {
            if (z[t] < model.per_type[t].support_max()) {
                ++z[t];
                break;
            }
            z[t] = model.per_type[t].support_min();
            --t;
        }
        if (t < 0) break;
    }
}

}  // namespace auditgame
