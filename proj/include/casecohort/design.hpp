#ifndef CASECOHORT_DESIGN_HPP
#define CASECOHORT_DESIGN_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "casecohort/cohort.hpp"

namespace casecohort {

/// Independent Bernoulli subcohort selection. Simple sampling uses one
/// probability for every stratum; stratified sampling maps stratum labels to
/// probabilities and must cover every label present in the cohort.
struct SamplingPlan {
    enum class Kind { SimpleBernoulli, StratifiedBernoulli };

    Kind kind = Kind::SimpleBernoulli;
    std::map<std::string, double> pi_by_stratum;  // key "*" for simple sampling
    std::uint64_t seed = 0;
    double selection_floor = kDefaultSelectionFloor;

    static SamplingPlan simple(double pi, std::uint64_t seed);
    static SamplingPlan stratified(std::map<std::string, double> pi_by_stratum, std::uint64_t seed);

    double probability_for(const std::string& stratum) const;
};

/// Weight construction applied after sampling. The resulting Omega(t), W(t)
/// paths are nonnegative, bounded by 1/floor, and identically zero on masked
/// subjects.
struct WeightScheme {
    enum class Kind { FullData, SelfPrentice, IpwKL, TwoPhase, Custom };

    Kind kind = Kind::FullData;

    // two-phase only: overrides the selection probability used for censored
    // subjects (failures always have pi* = 1 under R* = R or Delta).
    std::optional<double> pi_star;
    std::map<std::string, double> pi_star_by_stratum;

    static WeightScheme full_data() { return {Kind::FullData, {}, {}}; }
    static WeightScheme self_prentice() { return {Kind::SelfPrentice, {}, {}}; }
    static WeightScheme ipw_kl() { return {Kind::IpwKL, {}, {}}; }
    static WeightScheme two_phase() { return {Kind::TwoPhase, {}, {}}; }
    static WeightScheme custom() { return {Kind::Custom, {}, {}}; }
};

std::string to_string(WeightScheme::Kind kind);
std::string to_string(SamplingPlan::Kind kind);

/// Draws R_i ~ Bernoulli(pi_stratum) independently per subject, using the
/// substream keyed by subject id, and records pi. Requires a fully observed
/// cohort. Returns a new cohort; the input is untouched.
Cohort sample_subcohort(const Cohort& cohort, const SamplingPlan& plan);

/// Fills Omega, W and the observed flag according to the scheme; masks the
/// covariates of unobserved subjects. Requires r/pi populated (any cohort is;
/// defaults are r=1, pi=1).
Cohort build_weights(const Cohort& cohort, const WeightScheme& scheme,
                     double selection_floor = kDefaultSelectionFloor);

/// Per-subject empirical mean of W(t) across sampled replicates of the same
/// underlying cohort; the tests use this to verify E(W | complete data) = 1.
std::vector<double> check_weight_calibration(const std::vector<Cohort>& replicates,
                                             double t = 0.0);

}  // namespace casecohort

#endif
