#pragma once

#include <stdexcept>
#include <string>

namespace mech {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// input shape / value problems
struct ArityError : Error { using Error::Error; };
struct InputError : Error { using Error::Error; };
struct KindMismatchError : Error { using Error::Error; };

// numeric problems
struct NumericDomainError : Error { using Error::Error; };
struct RankError : Error { using Error::Error; };
struct DefinitenessError : Error { using Error::Error; };
struct ConvexityError : Error { using Error::Error; };
struct SingularJacobianError : Error { using Error::Error; };
struct OutOfImageError : Error { using Error::Error; };
struct NoSolutionError : Error { using Error::Error; };
struct ImplicitFunctionError : Error { using Error::Error; };
struct MidpointConvergenceError : Error { using Error::Error; };

// integration left the chart / produced non-finite state
struct BlowUpError : Error {
  int last_good_index;
  BlowUpError(const std::string& msg, int idx) : Error(msg), last_good_index(idx) {}
};

struct UnknownScenarioError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace mech
