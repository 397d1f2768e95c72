#include "casecohort/simulate.hpp"

#include <cmath>
#include <sstream>

#include "casecohort/errors.hpp"
#include "casecohort/rng.hpp"

namespace casecohort {

std::string to_string(Family family) {
    return family == Family::Cox ? "cox" : "additive";
}

// Hazard on the segment where z(t) == zv and lambda0(t) == b.
static double segment_hazard(const ModelSpec& model, double b, const Eigen::VectorXd& zv) {
    const double lin = model.theta0.dot(zv);
    if (model.family == Family::Cox) {
        return b * std::exp(lin);
    }
    const double h = b + lin;
    if (h < 0.0) {
        std::ostringstream os;
        os << "additive hazard negative (" << h << ") on a covariate segment";
        throw numeric_error(os.str());
    }
    return h;
}

// Walks the merged breakpoints of z and the baseline over [0, tau], calling
// visit(lo, hi, hazard) per segment. Returns the value of visit that stops the
// walk, if any.
template <typename Visit>
static void walk_segments(const CovariatePath& z, const ModelSpec& model, double tau,
                          Visit&& visit) {
    std::size_t kz = 0, kb = 0;
    const auto& zb = z.breakpoints();
    const auto& bb = model.baseline.breakpoints();
    double lo = 0.0;
    while (lo < tau) {
        double hi = tau;
        if (kz + 1 < zb.size()) hi = std::min(hi, zb[kz + 1]);
        if (kb + 1 < bb.size()) hi = std::min(hi, bb[kb + 1]);
        const double hz = segment_hazard(model, model.baseline.values()[kb][0], z.values()[kz]);
        if (!visit(lo, hi, hz)) return;
        lo = hi;
        if (kz + 1 < zb.size() && zb[kz + 1] <= lo) ++kz;
        if (kb + 1 < bb.size() && bb[kb + 1] <= lo) ++kb;
    }
}

double cumulative_hazard(const CovariatePath& z, const ModelSpec& model, double t) {
    double acc = 0.0;
    walk_segments(z, model, t, [&](double lo, double hi, double hz) {
        acc += hz * (hi - lo);
        return true;
    });
    return acc;
}

double draw_event_time(const CovariatePath& z, const ModelSpec& model, double u) {
    if (!(u > 0.0) || !(u < 1.0)) {
        throw invalid_argument_error("event-time draw needs u in (0,1)");
    }
    const double target = -std::log(u);
    double acc = 0.0;
    double event = kNoEvent;
    walk_segments(z, model, model.tau, [&](double lo, double hi, double hz) {
        const double gain = hz * (hi - lo);
        if (acc + gain >= target && hz > 0.0) {
            event = lo + (target - acc) / hz;
            return false;
        }
        acc += gain;
        return true;
    });
    return event;
}

double draw_censoring(const CensoringSpec& spec, double u, double tau) {
    if (!(u > 0.0) || !(u < 1.0)) {
        throw invalid_argument_error("censoring draw needs u in (0,1)");
    }
    double c;
    switch (spec.kind) {
        case CensoringSpec::Kind::Exponential:
            if (spec.rate < 0.0) throw invalid_argument_error("censoring rate must be >= 0");
            c = spec.rate == 0.0 ? tau : -std::log(u) / spec.rate;
            break;
        case CensoringSpec::Kind::Uniform:
            if (!(spec.upper > 0.0)) throw invalid_argument_error("censoring upper bound must be > 0");
            c = u * spec.upper;
            break;
        default:
            throw invalid_argument_error("unknown censoring kind");
    }
    return std::min(c, tau);
}

static void check_model(const ModelSpec& model) {
    if (model.theta0.size() == 0) {
        throw invalid_argument_error("model theta0 must be nonempty");
    }
    if (!(model.tau > 0.0) || !std::isfinite(model.tau)) {
        throw invalid_argument_error("model tau must be positive and finite");
    }
    if (model.baseline.dimension() != 1 || !model.baseline.nonnegative()) {
        throw invalid_argument_error("baseline hazard must be a nonnegative scalar path");
    }
}

static CovariatePath draw_covariates(const CovariateGenerator& gen, double tau,
                                     std::mt19937_64& eng) {
    const Eigen::Index d = gen.dimension;
    if (d <= 0) throw invalid_argument_error("covariate generator dimension must be positive");

    switch (gen.kind) {
        case CovariateGenerator::Kind::FixedBinary: {
            Eigen::VectorXd v(d);
            for (Eigen::Index j = 0; j < d; ++j) {
                v[j] = uniform_open(eng) < gen.prob_high ? gen.level_high : gen.level_low;
            }
            return CovariatePath::constant(v);
        }
        case CovariateGenerator::Kind::FixedGaussianTruncated: {
            if (!(gen.bound > 0.0)) throw invalid_argument_error("truncation bound must be > 0");
            Eigen::VectorXd v(d);
            for (Eigen::Index j = 0; j < d; ++j) {
                double x;
                do {
                    x = gen.sd * normal_draw(eng);
                } while (std::abs(x) > gen.bound);
                v[j] = x;
            }
            return CovariatePath::constant(v);
        }
        case CovariateGenerator::Kind::PiecewiseSwitch: {
            if (!(gen.switch_hi >= gen.switch_lo) || gen.switch_lo < 0.0) {
                throw invalid_argument_error("switch time window must satisfy 0 <= lo <= hi");
            }
            const double span = gen.switch_hi - gen.switch_lo;
            const double at = gen.switch_lo + span * uniform_open(eng);
            Eigen::VectorXd before = Eigen::VectorXd::Constant(d, gen.level_low);
            Eigen::VectorXd after = Eigen::VectorXd::Constant(d, gen.level_high);
            if (at <= 0.0 || at >= tau) {
                return CovariatePath::constant(at <= 0.0 ? after : before);
            }
            return CovariatePath({0.0, at}, {before, after});
        }
    }
    throw invalid_argument_error("unknown covariate generator kind");
}

// Stratum label for the auxiliary Z*: the initial level of the first covariate
// component, which is available for everyone in the cohort.
static std::string stratum_label(const CovariatePath& z) {
    std::ostringstream os;
    os << "z0=" << z.values().front()[0];
    return os.str();
}

Cohort simulate_cohort(std::size_t n, const ModelSpec& model, const CensoringSpec& censoring,
                       const CovariateGenerator& covgen, std::uint64_t seed) {
    if (n == 0) throw invalid_argument_error("cohort size must be >= 1");
    check_model(model);
    if (covgen.dimension != model.theta0.size()) {
        throw invalid_argument_error("covariate generator dimension differs from theta0 length");
    }

    std::vector<Subject> subjects;
    subjects.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto eng = make_engine(seed, i);
        // fixed draw order per subject: covariates, event, censoring
        CovariatePath z = draw_covariates(covgen, model.tau, eng);
        const double t_event = draw_event_time(z, model, uniform_open(eng));
        const double t_cens = draw_censoring(censoring, uniform_open(eng), model.tau);
        const double y = std::min(t_event, t_cens);
        const bool failed = t_event <= t_cens;
        Subject s(static_cast<std::int64_t>(i), y, failed, z, stratum_label(z));
        subjects.push_back(std::move(s));
    }
    return Cohort(std::move(subjects), model.tau);
}

}  // namespace casecohort
