#ifndef CASECOHORT_COX_HPP
#define CASECOHORT_COX_HPP

#include "casecohort/cohort.hpp"

namespace casecohort::cox {

struct Options {
    Eigen::VectorXd theta_init;      // empty means zeros
    double tol = 1e-10;              // on the sup norm of the score
    int max_iter = 50;
    int max_step_halvings = 30;
    double divergence_bound = 50.0;  // on the sup norm of theta
    double selection_floor = kDefaultSelectionFloor;
};

/// Breslow-type baseline cumulative hazard: jumps at distinct event times.
struct Baseline {
    std::vector<double> times;
    std::vector<double> increments;

    double cumulative(double t) const;
};

struct Sandwich {
    Eigen::MatrixXd A;    // minus score Jacobian at theta-hat
    Eigen::MatrixXd B;    // empirical second moment of the influence terms
    Eigen::MatrixXd cov;  // A^-1 B A^-T / n
    Eigen::VectorXd se;
};

struct FitResult {
    Eigen::VectorXd theta;
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd cov;
    Eigen::VectorXd se;
    int iterations = 0;
    bool converged = false;
    Baseline baseline;
};

/// Weighted risk-set average of the covariates at time t,
///   sum_j W_j(t) Z_j(t) exp(theta'Z_j(t)) 1(Y_j >= t) / sum_j W_j(t) exp(theta'Z_j(t)) 1(Y_j >= t).
/// Throws when the weighted risk set at t is empty.
Eigen::VectorXd eta_hat(const Cohort& cohort, const Eigen::VectorXd& theta, double t);

/// Weighted estimating function (1/n) sum_i Omega_i(Y_i) {Z_i(Y_i) - eta_hat(Y_i)} Delta_i.
Eigen::VectorXd score(const Cohort& cohort, const Eigen::VectorXd& theta);

/// Analytic derivative of the score in theta:
///   -(1/n) sum_i Omega_i(Y_i) Delta_i [D2/D0 - (D1/D0)(D1/D0)'](Y_i).
Eigen::MatrixXd score_jacobian(const Cohort& cohort, const Eigen::VectorXd& theta);

/// Damped Newton iteration on the score with step-halving on the merit
/// ||score||_2. Throws NonconvergenceError on iteration exhaustion or when the
/// iterate leaves the divergence bound (separation / monotone likelihood).
Eigen::VectorXd newton_solve(const Cohort& cohort, const Options& options = {},
                             int* iterations = nullptr);

Baseline breslow_baseline(const Cohort& cohort, const Eigen::VectorXd& theta_hat);

Sandwich sandwich_variance(const Cohort& cohort, const Eigen::VectorXd& theta_hat,
                           const Baseline& baseline);

/// newton_solve + breslow_baseline + sandwich_variance over one shared sweep
/// structure.
FitResult fit(const Cohort& cohort, const Options& options = {});

}  // namespace casecohort::cox

#endif
