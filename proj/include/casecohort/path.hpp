#ifndef CASECOHORT_PATH_HPP
#define CASECOHORT_PATH_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace casecohort {

/// Piecewise-constant, right-continuous function of time. Segment k holds the
/// value on [breakpoints[k], breakpoints[k+1]); the last segment extends to
/// infinity. Breakpoints are strictly increasing and start at 0, so every path
/// is bounded with finitely many jumps.
class CovariatePath {
public:
    CovariatePath() = default;

    // One value vector per breakpoint. Throws on ragged input, non-ascending
    // times, first breakpoint != 0, or non-finite values.
    CovariatePath(std::vector<double> breakpoints, std::vector<Eigen::VectorXd> values);

    // Constant path of dimension values.size().
    static CovariatePath constant(const Eigen::VectorXd& value);
    static CovariatePath constant_scalar(double value);

    // Scalar (d=1) step function.
    static CovariatePath scalar_steps(std::vector<double> breakpoints, std::vector<double> values);

    Eigen::Index dimension() const { return values_.empty() ? 0 : values_.front().size(); }
    std::size_t segment_count() const { return breakpoints_.size(); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<Eigen::VectorXd>& values() const { return values_; }

    // Value of the segment containing t (right-continuous); constant extension
    // past the last breakpoint. Throws on negative t.
    const Eigen::VectorXd& eval(double t) const;
    double eval_scalar(double t) const;  // d=1 convenience

    // Index of the segment containing t (no bounds check on t >= 0).
    std::size_t segment_index(double t) const;

    // Exact integral over [a,b], segment by segment. With `times` given, the
    // pointwise product path(t) * times(t) is integrated on the merged
    // breakpoint set (times must have dimension 1). Throws if a > b or a < 0.
    Eigen::VectorXd integrate(double a, double b, const CovariatePath* times = nullptr) const;

    bool nonnegative() const;
    double max_abs() const;
    bool identically_zero() const;

    // Same function with a breakpoint inserted at t (value copied from the
    // containing segment); no-op if t is already a breakpoint.
    CovariatePath with_breakpoint(double t) const;

    bool operator==(const CovariatePath& other) const = default;

private:
    std::vector<double> breakpoints_;
    std::vector<Eigen::VectorXd> values_;
};

/// Cursor for sweeping a path at nondecreasing query times without repeated
/// binary searches. Reset per sweep; advance() returns true when the segment
/// changed since the previous query.
class PathCursor {
public:
    explicit PathCursor(const CovariatePath& path) : path_(&path) {}

    bool advance(double t) {
        const auto& bp = path_->breakpoints();
        bool moved = !primed_;
        primed_ = true;
        while (seg_ + 1 < bp.size() && bp[seg_ + 1] <= t) {
            ++seg_;
            moved = true;
        }
        return moved;
    }

    const Eigen::VectorXd& value() const { return path_->values()[seg_]; }
    double scalar() const { return path_->values()[seg_][0]; }

private:
    const CovariatePath* path_;
    std::size_t seg_ = 0;
    bool primed_ = false;
};

}  // namespace casecohort

#endif
