#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sst {

/// Signal grid incompatible with the requested operation/bandlimit.
class grid_mismatch_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical health check failed (residuals, quadrature sanity, ...).
class numerical_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Inversion impossible: analysis window has no usable column for some degrees.
class non_invertible_error : public std::runtime_error {
  public:
    non_invertible_error(const std::string& what, std::vector<int> degrees)
        : std::runtime_error(what), degrees_(std::move(degrees)) {}
    const std::vector<int>& degrees() const { return degrees_; }

  private:
    std::vector<int> degrees_;
};

/// File format / filesystem failure.
class io_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace sst
