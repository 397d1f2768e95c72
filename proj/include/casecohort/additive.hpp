#ifndef CASECOHORT_ADDITIVE_HPP
#define CASECOHORT_ADDITIVE_HPP

#include "casecohort/cohort.hpp"

namespace casecohort::additive {

/// Lin-Ying-type baseline: jumps at distinct event times plus an absolutely
/// continuous drift with slope -theta' eta_tilde(t) between grid points.
/// Increments may be locally negative; they are reported, not clipped.
/// The drift grid stops at the last event time, where the jump estimator's
/// support ends.
struct Baseline {
    std::vector<double> jump_times;
    std::vector<double> jumps;
    std::vector<double> drift_times;   // grid breakpoints, first is 0
    std::vector<double> drift_slopes;  // slope on [drift_times[m], drift_times[m+1])

    double cumulative(double t) const;
};

struct Sandwich {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd cov;
    Eigen::VectorXd se;
};

struct FitResult {
    Eigen::VectorXd theta;
    Eigen::MatrixXd A;  // slope matrix of the linear estimating function
    Eigen::MatrixXd B;
    Eigen::MatrixXd cov;
    Eigen::VectorXd se;
    bool converged = true;  // closed form; kept for report symmetry
    Baseline baseline;
};

/// Theta-free weighted risk-set average
///   sum_j W_j(t) Z_j(t) 1(Y_j >= t) / sum_j W_j(t) 1(Y_j >= t).
Eigen::VectorXd eta_tilde(const Cohort& cohort, double t);

/// Weighted additive-hazards estimating function; affine in theta.
Eigen::VectorXd score(const Cohort& cohort, const Eigen::VectorXd& theta);

/// Exact root of the linear estimating function: theta = A^-1 b with
///   A = (1/n) sum_i int Omega_i(t) {Z_i(t) - eta_tilde(t)} Z_i(t)' 1(Y_i >= t) dt,
///   b = (1/n) sum_i Omega_i(Y_i) {Z_i(Y_i) - eta_tilde(Y_i)} Delta_i.
/// All integrals are computed exactly on the merged breakpoint grid.
FitResult solve_closed_form(const Cohort& cohort);

Baseline additive_baseline(const Cohort& cohort, const Eigen::VectorXd& theta_hat);

Sandwich sandwich_variance(const Cohort& cohort, const Eigen::VectorXd& theta_hat,
                           const Baseline& baseline);

FitResult fit(const Cohort& cohort,
              double selection_floor = kDefaultSelectionFloor);

}  // namespace casecohort::additive

#endif
