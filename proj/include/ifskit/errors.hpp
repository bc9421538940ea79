#ifndef IFSKIT_ERRORS_HPP
#define IFSKIT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace ifskit {

/// Fixed-point iteration ran out of iterations. Carries the residual history
/// so callers can report how far the run got.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const { return residuals_; }
    double last_residual() const { return residuals_.empty() ? 0.0 : residuals_.back(); }

private:
    std::vector<double> residuals_;
};

/// A geometric quantity could not be resolved at working precision
/// (e.g. a preimage sliver thinner than the partition can represent).
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ifskit

#endif
