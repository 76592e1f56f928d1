#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "auditgame/rng.hpp"

namespace auditgame {

// Distribution of a benign daily alert count: probabilities over the
// consecutive integers [support_min, support_max], support_min >= 1.
//
// `modeled_mass` records how much probability of the underlying (untruncated)
// distribution the support covers. Sampling always uses the normalized pmf;
// exact detection expectations weight their sums by the modeled mass so that
// realizations outside the coverage box contribute no detection.
class DiscreteCountDistribution {
public:
    // pmf is renormalized; throws ValidationError on empty/negative/zero-mass input.
    DiscreteCountDistribution(int support_min, std::vector<double> pmf, double modeled_mass = 1.0);

    int support_min() const { return support_min_; }
    int support_max() const { return support_min_ + static_cast<int>(pmf_.size()) - 1; }
    int support_size() const { return static_cast<int>(pmf_.size()); }

    double pmf(int n) const {
        if (n < support_min() || n > support_max()) return 0.0;
        return pmf_[static_cast<std::size_t>(n - support_min_)];
    }
    // P(count <= n)
    double cdf(int n) const;
    const std::vector<double>& pmf_table() const { return pmf_; }

    double mean() const;
    double modeled_mass() const { return modeled_mass_; }

    // One inverse-CDF draw from the normalized pmf.
    int sample(Rng& rng) const;

private:
    int support_min_;
    double modeled_mass_;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

// Integer count distribution from Gaussian(mean, std) truncated to
// [round(mean)-halfwidth, round(mean)+halfwidth], clamped below at 1:
// mass(n) = Phi((n+0.5-mean)/std) - Phi((n-0.5-mean)/std), renormalized.
DiscreteCountDistribution discretize_gaussian(double mean, double stddev, int coverage_halfwidth);

// Frequency distribution of observed counts; zeros are clamped to 1.
DiscreteCountDistribution empirical_distribution(const std::vector<int>& samples);

// Independent per-type counts.
struct JointCountModel {
    std::vector<DiscreteCountDistribution> per_type;

    int num_types() const { return static_cast<int>(per_type.size()); }
    // Product of support sizes (saturates at 2^63-1).
    long long joint_support_size() const;
};

// One draw of the full count vector.
std::vector<int> sample_counts(const JointCountModel& model, Rng& rng);

inline constexpr long long kDefaultJointEnumerationCap = 10'000'000;

// Visits every joint realization (counts, probability). Throws SolveError when
// the joint support exceeds `cap`; callers then fall back to sampling.
void enumerate_joint(const JointCountModel& model,
                     const std::function<void(const std::vector<int>&, double)>& visit,
                     long long cap = kDefaultJointEnumerationCap);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace auditgame
