#ifndef CASECOHORT_COHORT_HPP
#define CASECOHORT_COHORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "casecohort/path.hpp"

namespace casecohort {

constexpr double kDefaultSelectionFloor = 1e-6;

/// One observation: follow-up time, failure indicator, covariate history,
/// stratum label, subcohort indicator and selection probability, and the two
/// weight paths of the weighted estimating equation.
///
/// When covariates are masked (censored subject outside the subcohort) the
/// covariate path is replaced by a sentinel and `observed` is false; both
/// weight paths are identically zero there, so masked subjects contribute
/// nothing to any estimating-equation term. Reads of the covariates of a
/// masked subject throw.
class Subject {
public:
    Subject(std::int64_t id, double y, bool failed, CovariatePath covariates,
            std::string stratum);

    std::int64_t id() const { return id_; }
    double y() const { return y_; }
    bool failed() const { return delta_; }
    double delta() const { return delta_ ? 1.0 : 0.0; }
    const std::string& stratum() const { return stratum_; }

    bool in_subcohort() const { return r_; }
    double selection_probability() const { return pi_; }
    bool observed() const { return observed_; }

    const CovariatePath& covariates() const;
    const CovariatePath& omega() const { return omega_; }
    const CovariatePath& w() const { return w_; }

    void set_sampling(bool in_subcohort, double pi);
    void set_weights(CovariatePath omega, CovariatePath w);
    // Zeroes both weight paths and replaces the covariate path with a sentinel.
    void mask_covariates();

    Eigen::Index dimension() const { return z_.dimension(); }

private:
    std::int64_t id_;
    double y_;
    bool delta_;
    CovariatePath z_;
    std::string stratum_;
    bool r_ = true;
    double pi_ = 1.0;
    CovariatePath omega_;
    CovariatePath w_;
    bool observed_ = true;
};

/// Validated collection of subjects with a common covariate dimension and a
/// finite study horizon tau. Immutable by convention once assembled; fits and
/// replicate workers share cohorts freely.
class Cohort {
public:
    Cohort(std::vector<Subject> subjects, double tau);

    const std::vector<Subject>& subjects() const { return subjects_; }
    std::vector<Subject>& subjects() { return subjects_; }
    std::size_t size() const { return subjects_.size(); }
    double tau() const { return tau_; }
    Eigen::Index dimension() const { return d_; }

    std::size_t event_count() const;

    // Report-style validation: one message per violation, empty means valid.
    std::vector<std::string> validate(double selection_floor = kDefaultSelectionFloor) const;

    // Throws validation_error listing the violations; fitters call this.
    void require_valid(double selection_floor = kDefaultSelectionFloor) const;

private:
    std::vector<Subject> subjects_;
    double tau_;
    Eigen::Index d_;
};

}  // namespace casecohort

#endif
