#include "casecohort/cox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "casecohort/errors.hpp"

namespace casecohort::cox {

namespace {

Eigen::VectorXd resolve_init(const Options& options, Eigen::Index d) {
    if (options.theta_init.size() == 0) return Eigen::VectorXd::Zero(d);
    if (options.theta_init.size() != d) {
        throw invalid_argument_error("theta_init dimension differs from covariate dimension");
    }
    return options.theta_init;
}

[[noreturn]] void empty_risk_set(double t) {
    std::ostringstream os;
    os << "empty weighted risk set at event time t=" << t;
    throw numeric_error(os.str());
}

// Sweep state over one cohort: distinct event times ascending, subjects sorted
// by follow-up time so the risk set at event k is a suffix of `order`.
class Engine {
public:
    explicit Engine(const Cohort& cohort) : cohort_(&cohort), d_(cohort.dimension()) {
        const auto& subjects = cohort.subjects();
        const int n = static_cast<int>(subjects.size());

        order_.resize(n);
        std::iota(order_.begin(), order_.end(), 0);
        std::sort(order_.begin(), order_.end(),
                  [&](int a, int b) { return subjects[a].y() < subjects[b].y(); });

        // distinct event times with their subjects, ascending
        std::vector<int> events;
        for (int i = 0; i < n; ++i) {
            if (subjects[i].failed()) events.push_back(i);
        }
        std::sort(events.begin(), events.end(),
                  [&](int a, int b) { return subjects[a].y() < subjects[b].y(); });
        for (std::size_t p = 0; p < events.size();) {
            const double t = subjects[events[p]].y();
            event_times_.push_back(t);
            std::size_t q = p;
            while (q < events.size() && subjects[events[q]].y() == t) ++q;
            event_members_.emplace_back(events.begin() + p, events.begin() + q);
            p = q;
        }

        // first position in `order` at risk at each event time
        active_from_.resize(event_times_.size());
        std::size_t pos = 0;
        for (std::size_t k = 0; k < event_times_.size(); ++k) {
            while (pos < order_.size() && subjects[order_[pos]].y() < event_times_[k]) ++pos;
            active_from_[k] = pos;
        }

        exp_cache_.resize(n);
        lin_cache_.resize(n);
    }

    Eigen::Index dim() const { return d_; }
    std::size_t n() const { return cohort_->size(); }
    const std::vector<double>& event_times() const { return event_times_; }

    // Aggregates and score/Jacobian in one ascending pass over event times.
    // D2 is accumulated only when jac is non-null. eta_out, if non-null, is
    // filled with eta_hat at each distinct event time.
    void sweep(const Eigen::VectorXd& theta, Eigen::VectorXd* psi, Eigen::MatrixXd* jac,
               std::vector<Eigen::VectorXd>* eta_out, std::vector<double>* d0_out) const {
        const auto& subjects = cohort_->subjects();
        const Eigen::Index d = d_;
        const bool want_d2 = jac != nullptr;

        if (psi) psi->setZero(d);
        if (jac) jac->setZero(d, d);
        if (eta_out) eta_out->assign(event_times_.size(), Eigen::VectorXd());
        if (d0_out) d0_out->assign(event_times_.size(), 0.0);

        std::vector<PathCursor> zc, wc;
        zc.reserve(subjects.size());
        wc.reserve(subjects.size());
        for (const auto& s : subjects) {
            zc.emplace_back(s.observed() ? s.covariates() : s.w());  // placeholder path for masked
            wc.emplace_back(s.w());
        }

        Eigen::VectorXd d1(d);
        Eigen::MatrixXd d2(d, d);
        Eigen::VectorXd eta(d);
        Eigen::MatrixXd curv(d, d);

        for (std::size_t k = 0; k < event_times_.size(); ++k) {
            const double t = event_times_[k];
            double d0 = 0.0;
            d1.setZero();
            if (want_d2) d2.setZero();

            for (std::size_t p = active_from_[k]; p < order_.size(); ++p) {
                const int j = order_[p];
                const Subject& s = subjects[j];
                if (!s.observed()) continue;
                wc[j].advance(t);
                const double wj = wc[j].scalar();
                if (wj == 0.0) continue;
                if (zc[j].advance(t)) {
                    lin_cache_[j] = theta.dot(zc[j].value());
                    exp_cache_[j] = std::exp(lin_cache_[j]);
                }
                const double we = wj * exp_cache_[j];
                const Eigen::VectorXd& zv = zc[j].value();
                d0 += we;
                d1.noalias() += we * zv;
                if (want_d2) d2.noalias() += we * zv * zv.transpose();
            }
            if (!(d0 > 0.0)) empty_risk_set(t);

            eta = d1 / d0;
            if (eta_out) (*eta_out)[k] = eta;
            if (d0_out) (*d0_out)[k] = d0;

            if (psi || jac) {
                if (want_d2) curv = d2 / d0 - eta * eta.transpose();
                for (int i : event_members_[k]) {
                    const Subject& s = subjects[i];
                    const double om = s.omega().eval_scalar(t);
                    if (psi) psi->noalias() += om * (s.covariates().eval(t) - eta);
                    if (jac) jac->noalias() -= om * curv;
                }
            }
        }
        const double n = static_cast<double>(subjects.size());
        if (psi) *psi /= n;
        if (jac) *jac /= n;
    }

    Baseline breslow(const Eigen::VectorXd& theta) const {
        std::vector<double> d0;
        sweep(theta, nullptr, nullptr, nullptr, &d0);
        const auto& subjects = cohort_->subjects();
        Baseline out;
        out.times = event_times_;
        out.increments.resize(event_times_.size());
        for (std::size_t k = 0; k < event_times_.size(); ++k) {
            double num = 0.0;
            for (int i : event_members_[k]) {
                num += subjects[i].omega().eval_scalar(event_times_[k]);
            }
            out.increments[k] = num / (static_cast<double>(subjects.size()) * d0[k]);
        }
        return out;
    }

    Sandwich sandwich(const Eigen::VectorXd& theta, const Baseline& baseline) const {
        const auto& subjects = cohort_->subjects();
        const Eigen::Index d = d_;
        const double n = static_cast<double>(subjects.size());

        Eigen::MatrixXd jac;
        std::vector<Eigen::VectorXd> eta;
        {
            Eigen::VectorXd psi_unused;
            Eigen::MatrixXd j(d, d);
            sweep(theta, &psi_unused, &j, &eta, nullptr);
            jac = j;
        }

        if (baseline.times.size() != event_times_.size()) {
            throw invalid_argument_error("baseline does not match the cohort's event times");
        }

        Eigen::MatrixXd a = -jac;
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d, d);
        Eigen::VectorXd infl(d);

        for (const auto& s : subjects) {
            if (!s.observed()) continue;  // weights identically zero
            infl.setZero();
            if (s.failed()) {
                const std::size_t k = event_index(s.y());
                infl = s.omega().eval_scalar(s.y()) * (s.covariates().eval(s.y()) - eta[k]);
            }
            // events with t_k <= Y_i
            const auto stop = std::upper_bound(event_times_.begin(), event_times_.end(), s.y());
            PathCursor zc(s.covariates());
            PathCursor wcur(s.w());
            double lin = 0.0, ez = 0.0;
            for (auto it = event_times_.begin(); it != stop; ++it) {
                const std::size_t k = static_cast<std::size_t>(it - event_times_.begin());
                const double t = *it;
                wcur.advance(t);
                const double wi = wcur.scalar();
                if (wi == 0.0) continue;
                if (zc.advance(t)) {
                    lin = theta.dot(zc.value());
                    ez = std::exp(lin);
                }
                infl.noalias() -=
                    wi * ez * baseline.increments[k] * (zc.value() - eta[k]);
            }
            b.noalias() += infl * infl.transpose();
        }
        b /= n;

        Sandwich out;
        out.A = a;
        out.B = b;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (!lu.isInvertible()) {
            throw numeric_error("sandwich slope matrix A is singular");
        }
        Eigen::MatrixXd ainv = lu.inverse();
        out.cov = ainv * b * ainv.transpose() / n;
        out.se = out.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
        return out;
    }

private:
    std::size_t event_index(double t) const {
        const auto it = std::lower_bound(event_times_.begin(), event_times_.end(), t);
        return static_cast<std::size_t>(it - event_times_.begin());
    }

    const Cohort* cohort_;
    Eigen::Index d_;
    std::vector<int> order_;
    std::vector<double> event_times_;
    std::vector<std::vector<int>> event_members_;
    std::vector<std::size_t> active_from_;
    mutable std::vector<double> exp_cache_;
    mutable std::vector<double> lin_cache_;
};

Eigen::VectorXd newton_on_engine(const Engine& engine, const Options& options, int* iterations) {
    const Eigen::Index d = engine.dim();
    Eigen::VectorXd theta = resolve_init(options, d);
    if (!(options.tol > 0.0)) throw invalid_argument_error("newton tolerance must be positive");

    // Separation guard: a vanishing score with a still-large Newton step means
    // the iterate is running off to infinity, not converging to a root.
    const double step_tol = std::max(1e-6, options.tol);

    Eigen::VectorXd psi(d), step(d), cand_psi(d);
    Eigen::MatrixXd jac(d, d);
    int accepted = 0;

    engine.sweep(theta, &psi, &jac, nullptr, nullptr);
    for (;;) {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        step = lu.solve(-psi);
        if (!step.allFinite()) {
            throw numeric_error("singular score Jacobian in Newton iteration");
        }
        if (psi.lpNorm<Eigen::Infinity>() <= options.tol &&
            step.lpNorm<Eigen::Infinity>() <= step_tol) {
            if (iterations) *iterations = accepted;
            return theta;
        }
        if (accepted >= options.max_iter) {
            std::vector<double> last(theta.data(), theta.data() + theta.size());
            throw NonconvergenceError("Newton iteration limit reached", last, accepted, false);
        }

        const double merit = psi.norm();
        double alpha = 1.0;
        bool moved = false;
        for (int h = 0; h <= options.max_step_halvings; ++h, alpha *= 0.5) {
            Eigen::VectorXd cand = theta + alpha * step;
            if (cand.lpNorm<Eigen::Infinity>() > 4.0 * options.divergence_bound) continue;
            engine.sweep(cand, &cand_psi, nullptr, nullptr, nullptr);
            const double cand_merit = cand_psi.norm();
            if (std::isfinite(cand_merit) && cand_merit < merit) {
                theta = std::move(cand);
                psi = cand_psi;
                moved = true;
                break;
            }
        }
        if (!moved) {
            std::vector<double> last(theta.data(), theta.data() + theta.size());
            throw NonconvergenceError("Newton step-halving failed to reduce the score", last,
                                      accepted, false);
        }
        ++accepted;
        if (theta.lpNorm<Eigen::Infinity>() > options.divergence_bound) {
            std::vector<double> last(theta.data(), theta.data() + theta.size());
            throw NonconvergenceError("Newton iterate diverged (separation or monotone likelihood)",
                                      last, accepted, true);
        }
        engine.sweep(theta, &psi, &jac, nullptr, nullptr);
    }
}

}  // namespace

double Baseline::cumulative(double t) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < times.size() && times[k] <= t; ++k) acc += increments[k];
    return acc;
}

Eigen::VectorXd eta_hat(const Cohort& cohort, const Eigen::VectorXd& theta, double t) {
    if (!(t >= 0.0)) throw invalid_argument_error("eta_hat needs t >= 0");
    if (theta.size() != cohort.dimension()) {
        throw invalid_argument_error("theta dimension differs from covariate dimension");
    }
    double d0 = 0.0;
    Eigen::VectorXd d1 = Eigen::VectorXd::Zero(cohort.dimension());
    for (const auto& s : cohort.subjects()) {
        if (s.y() < t || !s.observed()) continue;
        const double wj = s.w().eval_scalar(t);
        if (wj == 0.0) continue;
        const Eigen::VectorXd& zv = s.covariates().eval(t);
        const double we = wj * std::exp(theta.dot(zv));
        d0 += we;
        d1.noalias() += we * zv;
    }
    if (!(d0 > 0.0)) empty_risk_set(t);
    return d1 / d0;
}

Eigen::VectorXd score(const Cohort& cohort, const Eigen::VectorXd& theta) {
    if (theta.size() != cohort.dimension()) {
        throw invalid_argument_error("theta dimension differs from covariate dimension");
    }
    Engine engine(cohort);
    Eigen::VectorXd psi;
    engine.sweep(theta, &psi, nullptr, nullptr, nullptr);
    return psi;
}

Eigen::MatrixXd score_jacobian(const Cohort& cohort, const Eigen::VectorXd& theta) {
    if (theta.size() != cohort.dimension()) {
        throw invalid_argument_error("theta dimension differs from covariate dimension");
    }
    Engine engine(cohort);
    Eigen::VectorXd psi;
    Eigen::MatrixXd jac;
    engine.sweep(theta, &psi, &jac, nullptr, nullptr);
    return jac;
}

Eigen::VectorXd newton_solve(const Cohort& cohort, const Options& options, int* iterations) {
    cohort.require_valid(options.selection_floor);
    Engine engine(cohort);
    return newton_on_engine(engine, options, iterations);
}

Baseline breslow_baseline(const Cohort& cohort, const Eigen::VectorXd& theta_hat) {
    if (theta_hat.size() != cohort.dimension()) {
        throw invalid_argument_error("theta dimension differs from covariate dimension");
    }
    Engine engine(cohort);
    return engine.breslow(theta_hat);
}

Sandwich sandwich_variance(const Cohort& cohort, const Eigen::VectorXd& theta_hat,
                           const Baseline& baseline) {
    Engine engine(cohort);
    return engine.sandwich(theta_hat, baseline);
}

FitResult fit(const Cohort& cohort, const Options& options) {
    cohort.require_valid(options.selection_floor);
    Engine engine(cohort);
    FitResult out;
    out.theta = newton_on_engine(engine, options, &out.iterations);
    out.converged = true;
    out.baseline = engine.breslow(out.theta);
    Sandwich s = engine.sandwich(out.theta, out.baseline);
    out.A = std::move(s.A);
    out.B = std::move(s.B);
    out.cov = std::move(s.cov);
    out.se = std::move(s.se);
    return out;
}

}  // namespace casecohort::cox
