#include "casecohort/cohort.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "casecohort/errors.hpp"

namespace casecohort {

Subject::Subject(std::int64_t id, double y, bool failed, CovariatePath covariates,
                 std::string stratum)
    : id_(id),
      y_(y),
      delta_(failed),
      z_(std::move(covariates)),
      stratum_(std::move(stratum)),
      omega_(CovariatePath::constant_scalar(1.0)),
      w_(CovariatePath::constant_scalar(1.0)) {
    if (!(y_ > 0.0) || !std::isfinite(y_)) {
        throw invalid_argument_error("subject follow-up time must be positive and finite");
    }
}

const CovariatePath& Subject::covariates() const {
    if (!observed_) {
        throw std::logic_error("read of masked covariates (subject " + std::to_string(id_) + ")");
    }
    return z_;
}

void Subject::set_sampling(bool in_subcohort, double pi) {
    if (!(pi > 0.0) || pi > 1.0) {
        throw invalid_argument_error("selection probability must lie in (0,1]");
    }
    r_ = in_subcohort;
    pi_ = pi;
}

void Subject::set_weights(CovariatePath omega, CovariatePath w) {
    if (omega.dimension() != 1 || w.dimension() != 1) {
        throw invalid_argument_error("weight paths must have dimension 1");
    }
    if (!omega.nonnegative() || !w.nonnegative()) {
        throw invalid_argument_error("weight paths must be nonnegative");
    }
    omega_ = std::move(omega);
    w_ = std::move(w);
}

void Subject::mask_covariates() {
    omega_ = CovariatePath::constant_scalar(0.0);
    w_ = CovariatePath::constant_scalar(0.0);
    z_ = CovariatePath::constant(
        Eigen::VectorXd::Constant(z_.dimension(), std::numeric_limits<double>::quiet_NaN()));
    observed_ = false;
}

Cohort::Cohort(std::vector<Subject> subjects, double tau)
    : subjects_(std::move(subjects)), tau_(tau) {
    if (subjects_.empty()) {
        throw invalid_argument_error("cohort must contain at least one subject");
    }
    if (!(tau_ > 0.0) || !std::isfinite(tau_)) {
        throw invalid_argument_error("study horizon tau must be positive and finite");
    }
    d_ = subjects_.front().dimension();
}

std::size_t Cohort::event_count() const {
    std::size_t k = 0;
    for (const auto& s : subjects_) k += s.failed();
    return k;
}

std::vector<std::string> Cohort::validate(double selection_floor) const {
    std::vector<std::string> violations;
    auto flag = [&](std::int64_t id, const std::string& msg) {
        std::ostringstream os;
        os << "subject " << id << ": " << msg;
        violations.push_back(os.str());
    };

    bool any_event = false;
    for (const auto& s : subjects_) {
        if (s.dimension() != d_) {
            flag(s.id(), "covariate dimension differs from cohort dimension");
        }
        if (s.y() > tau_) {
            flag(s.id(), "follow-up time exceeds study horizon");
        }
        if (s.selection_probability() < selection_floor) {
            flag(s.id(), "selection probability below floor");
        }
        if (!s.omega().nonnegative() || !s.w().nonnegative()) {
            flag(s.id(), "negative weight path");
        }
        if (!s.observed()) {
            if (!s.omega().identically_zero() || !s.w().identically_zero()) {
                flag(s.id(), "nonzero weights on masked covariates");
            }
            if (s.failed()) {
                flag(s.id(), "failure with masked covariates");
            }
        }
        any_event = any_event || s.failed();
    }
    if (!any_event) {
        violations.push_back("cohort: no observed failures");
    }
    return violations;
}

void Cohort::require_valid(double selection_floor) const {
    auto violations = validate(selection_floor);
    if (violations.empty()) return;
    std::ostringstream os;
    os << "invalid cohort:";
    for (const auto& v : violations) os << "\n  " << v;
    throw validation_error(os.str());
}

}  // namespace casecohort
