#include "casecohort/path.hpp"

#include <algorithm>
#include <cmath>

#include "casecohort/errors.hpp"

namespace casecohort {

CovariatePath::CovariatePath(std::vector<double> breakpoints, std::vector<Eigen::VectorXd> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.empty()) {
        throw invalid_argument_error("covariate path needs at least one segment");
    }
    if (breakpoints_.size() != values_.size()) {
        throw invalid_argument_error("covariate path breakpoint/value count mismatch");
    }
    if (breakpoints_.front() != 0.0) {
        throw invalid_argument_error("covariate path must start at time 0");
    }
    const Eigen::Index d = values_.front().size();
    if (d <= 0) {
        throw invalid_argument_error("covariate path dimension must be positive");
    }
    for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
        if (!std::isfinite(breakpoints_[k])) {
            throw invalid_argument_error("covariate path breakpoint not finite");
        }
        if (k > 0 && !(breakpoints_[k] > breakpoints_[k - 1])) {
            throw invalid_argument_error("covariate path breakpoints must be strictly increasing");
        }
        if (values_[k].size() != d) {
            throw invalid_argument_error("covariate path segments have inconsistent dimension");
        }
        if (!values_[k].allFinite()) {
            throw invalid_argument_error("covariate path value not finite");
        }
    }
}

CovariatePath CovariatePath::constant(const Eigen::VectorXd& value) {
    return CovariatePath({0.0}, {value});
}

CovariatePath CovariatePath::constant_scalar(double value) {
    Eigen::VectorXd v(1);
    v[0] = value;
    return constant(v);
}

CovariatePath CovariatePath::scalar_steps(std::vector<double> breakpoints, std::vector<double> values) {
    std::vector<Eigen::VectorXd> vs;
    vs.reserve(values.size());
    for (double v : values) {
        Eigen::VectorXd e(1);
        e[0] = v;
        vs.push_back(std::move(e));
    }
    return CovariatePath(std::move(breakpoints), std::move(vs));
}

std::size_t CovariatePath::segment_index(double t) const {
    // first breakpoint > t, minus one
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

const Eigen::VectorXd& CovariatePath::eval(double t) const {
    if (!(t >= 0.0)) {
        throw invalid_argument_error("covariate path evaluated at negative time");
    }
    return values_[segment_index(t)];
}

double CovariatePath::eval_scalar(double t) const {
    return eval(t)[0];
}

Eigen::VectorXd CovariatePath::integrate(double a, double b, const CovariatePath* times) const {
    if (!(a >= 0.0) || !(b >= a)) {
        throw invalid_argument_error("covariate path integral needs 0 <= a <= b");
    }
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dimension());
    if (a == b) return acc;
    if (times != nullptr && times->dimension() != 1) {
        throw invalid_argument_error("integration weight path must have dimension 1");
    }

    std::size_t k = segment_index(a);
    std::size_t m = times ? times->segment_index(a) : 0;
    double lo = a;
    while (lo < b) {
        // right edge of the current merged segment
        double hi = b;
        if (k + 1 < breakpoints_.size()) hi = std::min(hi, breakpoints_[k + 1]);
        if (times && m + 1 < times->breakpoints().size()) {
            hi = std::min(hi, times->breakpoints()[m + 1]);
        }
        const double w = times ? times->values()[m][0] : 1.0;
        acc += (hi - lo) * w * values_[k];
        lo = hi;
        if (k + 1 < breakpoints_.size() && breakpoints_[k + 1] <= lo) ++k;
        if (times && m + 1 < times->breakpoints().size() && times->breakpoints()[m + 1] <= lo) ++m;
    }
    return acc;
}

bool CovariatePath::nonnegative() const {
    for (const auto& v : values_) {
        if ((v.array() < 0.0).any()) return false;
    }
    return true;
}

double CovariatePath::max_abs() const {
    double m = 0.0;
    for (const auto& v : values_) {
        m = std::max(m, v.cwiseAbs().maxCoeff());
    }
    return m;
}

bool CovariatePath::identically_zero() const {
    for (const auto& v : values_) {
        if ((v.array() != 0.0).any()) return false;
    }
    return true;
}

CovariatePath CovariatePath::with_breakpoint(double t) const {
    if (!(t > 0.0)) return *this;
    if (std::binary_search(breakpoints_.begin(), breakpoints_.end(), t)) return *this;
    std::size_t k = segment_index(t);
    std::vector<double> bp = breakpoints_;
    std::vector<Eigen::VectorXd> vals = values_;
    bp.insert(bp.begin() + static_cast<std::ptrdiff_t>(k) + 1, t);
    vals.insert(vals.begin() + static_cast<std::ptrdiff_t>(k) + 1, values_[k]);
    return CovariatePath(std::move(bp), std::move(vals));
}

}  // namespace casecohort
