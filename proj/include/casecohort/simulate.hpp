#ifndef CASECOHORT_SIMULATE_HPP
#define CASECOHORT_SIMULATE_HPP

#include <cstdint>
#include <limits>

#include "casecohort/cohort.hpp"

namespace casecohort {

enum class Family { Cox, Additive };

std::string to_string(Family family);

/// True data-generating model: hazard is lambda0(t) * exp(theta0'z(t)) for the
/// Cox family and lambda0(t) + theta0'z(t) for the additive family.
struct ModelSpec {
    Family family = Family::Cox;
    Eigen::VectorXd theta0;
    CovariatePath baseline = CovariatePath::constant_scalar(1.0);  // dimension 1, >= 0
    double tau = 1.0;
};

/// Censoring independent of covariates, truncated administratively at tau.
struct CensoringSpec {
    enum class Kind { Exponential, Uniform };
    Kind kind = Kind::Exponential;
    double rate = 0.0;   // exponential; 0 means administrative censoring only
    double upper = 1.0;  // uniform upper bound
};

/// Covariate path generator menu. All generated paths are bounded.
struct CovariateGenerator {
    enum class Kind { FixedBinary, FixedGaussianTruncated, PiecewiseSwitch };
    Kind kind = Kind::FixedBinary;
    Eigen::Index dimension = 1;

    // fixed-binary and piecewise-switch levels
    double level_low = 0.0;
    double level_high = 1.0;
    double prob_high = 0.5;

    // fixed-gaussian-truncated: N(0, sd^2) clamped by rejection to [-bound, bound]
    double sd = 1.0;
    double bound = 2.0;

    // piecewise-switch: start at level_low, jump to level_high at a uniform
    // time in [switch_lo, switch_hi]
    double switch_lo = 0.0;
    double switch_hi = 1.0;
};

inline constexpr double kNoEvent = std::numeric_limits<double>::infinity();

/// Event time by exact segment-wise inversion of the piecewise-linear
/// cumulative hazard on the merged breakpoints of z and the baseline.
/// Returns kNoEvent when the subject survives past tau. Throws on a negative
/// additive-hazard segment.
double draw_event_time(const CovariatePath& z, const ModelSpec& model, double u);

/// Cumulative hazard H(t) for the same model/covariate pair; the inversion
/// tests recompute -log u through this.
double cumulative_hazard(const CovariatePath& z, const ModelSpec& model, double t);

/// Censoring time truncated at tau.
double draw_censoring(const CensoringSpec& spec, double u, double tau);

/// n i.i.d. subjects, fully observed (r=1, pi=1, Omega=W=1). Deterministic in
/// the seed; subject i consumes only the substream keyed by i.
Cohort simulate_cohort(std::size_t n, const ModelSpec& model, const CensoringSpec& censoring,
                       const CovariateGenerator& covgen, std::uint64_t seed);

}  // namespace casecohort

#endif
