#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace unruh {

/// Base for every recoverable numerical failure raised by the library.
/// `code()` is the stable identifier written to the sweep `error_code` column.
class Error : public std::runtime_error {
 public:
  Error(std::string_view code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  std::string_view code() const noexcept { return code_; }

 private:
  std::string_view code_;
};

#define UNRUH_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

/// Principal real logarithm does not exist (eigenvalue on the closed negative real axis).
UNRUH_DEFINE_ERROR(LogBranchError);
/// Step doubling exhausted `max_doublings` before meeting the tolerance.
UNRUH_DEFINE_ERROR(IntegratorNoConvergence);
/// Channel has spectral radius too close to (or above) one.
UNRUH_DEFINE_ERROR(NoUniqueFixedPoint);
/// Thermality measure requested for a state at (or numerically at) the ground state.
UNRUH_DEFINE_ERROR(GroundStateDivergence);
UNRUH_DEFINE_ERROR(PopulationInversion);
UNRUH_DEFINE_ERROR(UnphysicalState);
UNRUH_DEFINE_ERROR(CutoffNotConverged);
UNRUH_DEFINE_ERROR(QuadratureFailure);
UNRUH_DEFINE_ERROR(InvalidConfig);

#undef UNRUH_DEFINE_ERROR

}  // namespace unruh
