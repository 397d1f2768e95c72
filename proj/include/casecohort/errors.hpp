#ifndef CASECOHORT_ERRORS_HPP
#define CASECOHORT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace casecohort {

enum class ErrorKind {
    InvalidArgument,  // bad inputs to an operation (preconditions)
    Parse,            // malformed config / CSV / JSON
    Validation,       // cohort or plan violates an invariant
    Numeric,          // singular matrix, empty risk set, model violation
    Nonconvergence,   // solver hit max_iter or diverged
    Io                // filesystem failures
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error invalid_argument_error(const std::string& msg) { return {ErrorKind::InvalidArgument, msg}; }
inline Error parse_error(const std::string& msg) { return {ErrorKind::Parse, msg}; }
inline Error validation_error(const std::string& msg) { return {ErrorKind::Validation, msg}; }
inline Error numeric_error(const std::string& msg) { return {ErrorKind::Numeric, msg}; }
inline Error io_error(const std::string& msg) { return {ErrorKind::Io, msg}; }

// Thrown when Newton iteration runs out of budget or walks off to infinity.
// Carries the last iterate so callers (the MC harness in particular) can log it.
class NonconvergenceError : public Error {
public:
    NonconvergenceError(const std::string& what, std::vector<double> last_iterate,
                        int iterations, bool diverged)
        : Error(ErrorKind::Nonconvergence, what),
          last_iterate_(std::move(last_iterate)),
          iterations_(iterations),
          diverged_(diverged) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    int iterations() const noexcept { return iterations_; }
    bool diverged() const noexcept { return diverged_; }

private:
    std::vector<double> last_iterate_;
    int iterations_;
    bool diverged_;
};

}  // namespace casecohort

#endif
