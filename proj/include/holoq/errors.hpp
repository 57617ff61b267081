#ifndef HOLOQ_ERRORS_HPP
#define HOLOQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace holoq {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidOperator : Error { using Error::Error; };
struct InvalidArgument : Error { using Error::Error; };
struct InvalidState : Error { using Error::Error; };
struct DegenerateSegment : Error { using Error::Error; };
struct NoSolution : Error { using Error::Error; };
struct MatchViolation : Error { using Error::Error; };
struct NotCyclic : Error { using Error::Error; };
struct InvalidPlan : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };

}  // namespace holoq

#endif
