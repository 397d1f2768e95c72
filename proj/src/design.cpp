#include "casecohort/design.hpp"

#include <cmath>

#include "casecohort/errors.hpp"
#include "casecohort/rng.hpp"

namespace casecohort {

SamplingPlan SamplingPlan::simple(double pi, std::uint64_t seed) {
    SamplingPlan plan;
    plan.kind = Kind::SimpleBernoulli;
    plan.pi_by_stratum["*"] = pi;
    plan.seed = seed;
    return plan;
}

SamplingPlan SamplingPlan::stratified(std::map<std::string, double> pi_by_stratum,
                                      std::uint64_t seed) {
    SamplingPlan plan;
    plan.kind = Kind::StratifiedBernoulli;
    plan.pi_by_stratum = std::move(pi_by_stratum);
    plan.seed = seed;
    return plan;
}

double SamplingPlan::probability_for(const std::string& stratum) const {
    if (kind == Kind::SimpleBernoulli) {
        auto it = pi_by_stratum.find("*");
        if (it == pi_by_stratum.end()) {
            throw validation_error("simple sampling plan has no probability");
        }
        return it->second;
    }
    auto it = pi_by_stratum.find(stratum);
    if (it == pi_by_stratum.end()) {
        throw validation_error("no selection probability for stratum '" + stratum + "'");
    }
    return it->second;
}

std::string to_string(SamplingPlan::Kind kind) {
    return kind == SamplingPlan::Kind::SimpleBernoulli ? "simple-bernoulli"
                                                       : "stratified-bernoulli";
}

std::string to_string(WeightScheme::Kind kind) {
    switch (kind) {
        case WeightScheme::Kind::FullData: return "full-data";
        case WeightScheme::Kind::SelfPrentice: return "self-prentice";
        case WeightScheme::Kind::IpwKL: return "ipw-kl";
        case WeightScheme::Kind::TwoPhase: return "two-phase";
        case WeightScheme::Kind::Custom: return "custom";
    }
    return "?";
}

static void check_plan(const SamplingPlan& plan) {
    if (plan.pi_by_stratum.empty()) {
        throw validation_error("sampling plan has no probabilities");
    }
    for (const auto& [label, pi] : plan.pi_by_stratum) {
        if (!(pi > 0.0) || pi > 1.0) {
            throw validation_error("sampling probability for stratum '" + label +
                                   "' outside (0,1]");
        }
        if (pi < plan.selection_floor) {
            throw validation_error("sampling probability for stratum '" + label +
                                   "' below floor");
        }
    }
}

Cohort sample_subcohort(const Cohort& cohort, const SamplingPlan& plan) {
    check_plan(plan);
    for (const auto& s : cohort.subjects()) {
        if (!s.observed()) {
            throw validation_error("sample_subcohort requires a fully observed cohort");
        }
    }

    std::vector<Subject> out = cohort.subjects();
    for (auto& s : out) {
        const double pi = plan.probability_for(s.stratum());
        auto eng = make_engine(plan.seed, static_cast<std::uint64_t>(s.id()));
        const double u = uniform_open(eng);
        s.set_sampling(u < pi, pi);
    }
    return Cohort(std::move(out), cohort.tau());
}

// pi* for the two-phase scheme: 1 for failures (complete data is certain when
// R* = R or Delta), otherwise the sampling probability unless overridden.
static double two_phase_pi_star(const Subject& s, const WeightScheme& scheme) {
    if (s.failed()) return 1.0;
    auto it = scheme.pi_star_by_stratum.find(s.stratum());
    if (it != scheme.pi_star_by_stratum.end()) return it->second;
    if (scheme.pi_star) return *scheme.pi_star;
    return s.selection_probability();
}

Cohort build_weights(const Cohort& cohort, const WeightScheme& scheme, double selection_floor) {
    std::vector<Subject> out = cohort.subjects();
    const double bound = 1.0 / selection_floor;

    for (auto& s : out) {
        const double pi = s.selection_probability();
        if (pi < selection_floor) {
            throw validation_error("subject " + std::to_string(s.id()) +
                                   ": selection probability below floor");
        }
        const bool complete = s.in_subcohort() || s.failed();

        switch (scheme.kind) {
            case WeightScheme::Kind::FullData:
                if (!s.observed()) {
                    throw validation_error("full-data scheme on a cohort with masked covariates");
                }
                s.set_weights(CovariatePath::constant_scalar(1.0),
                              CovariatePath::constant_scalar(1.0));
                break;

            case WeightScheme::Kind::SelfPrentice: {
                const double w = s.in_subcohort() ? 1.0 / pi : 0.0;
                if (!complete) {
                    s.mask_covariates();
                } else {
                    s.set_weights(CovariatePath::constant_scalar(1.0),
                                  CovariatePath::constant_scalar(w));
                }
                break;
            }

            case WeightScheme::Kind::IpwKL: {
                const double w = s.delta() + (s.in_subcohort() ? 1.0 / pi : 0.0) * (1.0 - s.delta());
                if (!complete) {
                    s.mask_covariates();
                } else {
                    s.set_weights(CovariatePath::constant_scalar(w),
                                  CovariatePath::constant_scalar(w));
                }
                break;
            }

            case WeightScheme::Kind::TwoPhase: {
                const double pi_star = two_phase_pi_star(s, scheme);
                if (!(pi_star >= selection_floor) || pi_star > 1.0) {
                    throw validation_error("two-phase pi* outside [floor, 1]");
                }
                const double w = complete ? 1.0 / pi_star : 0.0;
                if (!complete) {
                    s.mask_covariates();
                } else {
                    s.set_weights(CovariatePath::constant_scalar(w),
                                  CovariatePath::constant_scalar(w));
                }
                break;
            }

            case WeightScheme::Kind::Custom: {
                // user-supplied paths pass through; enforce invariants only
                if (!s.omega().nonnegative() || !s.w().nonnegative()) {
                    throw validation_error("custom weights negative");
                }
                if (s.omega().max_abs() > bound || s.w().max_abs() > bound) {
                    throw validation_error("custom weights exceed 1/floor bound");
                }
                if (!complete) {
                    if (!s.omega().identically_zero() || !s.w().identically_zero()) {
                        throw validation_error("custom weights nonzero on a subject without complete data");
                    }
                    if (s.observed()) s.mask_covariates();
                }
                break;
            }
        }
    }
    return Cohort(std::move(out), cohort.tau());
}

std::vector<double> check_weight_calibration(const std::vector<Cohort>& replicates, double t) {
    if (replicates.empty()) {
        throw invalid_argument_error("weight calibration needs at least one replicate");
    }
    const std::size_t n = replicates.front().size();
    std::vector<double> mean(n, 0.0);
    for (const auto& rep : replicates) {
        if (rep.size() != n) {
            throw invalid_argument_error("weight calibration replicates differ in size");
        }
        for (std::size_t i = 0; i < n; ++i) {
            mean[i] += rep.subjects()[i].w().eval_scalar(t);
        }
    }
    for (auto& m : mean) m /= static_cast<double>(replicates.size());
    return mean;
}

}  // namespace casecohort
