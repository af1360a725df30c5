#pragma once

#include <stdexcept>
#include <string>

namespace onsager {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define ONSAGER_ERROR(Name)                                          \
  struct Name : Error {                                              \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

ONSAGER_ERROR(InvalidGrid);
ONSAGER_ERROR(NonZeroMean);
ONSAGER_ERROR(KernelUnresolved);
ONSAGER_ERROR(NotSolenoidal);
ONSAGER_ERROR(PhaseDegenerate);
ONSAGER_ERROR(GridUnderResolved);
ONSAGER_ERROR(InvalidLadder);
ONSAGER_ERROR(NonPositiveProfile);
ONSAGER_ERROR(DisjointnessFailed);
ONSAGER_ERROR(PositivityRadiusTooSmall);
ONSAGER_ERROR(ROutOfRange);
ONSAGER_ERROR(CFLWindowExceeded);
ONSAGER_ERROR(BlowupSuspected);
ONSAGER_ERROR(OutOfWindow);
ONSAGER_ERROR(MissingOverlap);
ONSAGER_ERROR(PropertyViolated);
ONSAGER_ERROR(EnergyGapNonpositive);
ONSAGER_ERROR(RtildeOutOfBall);
ONSAGER_ERROR(MeanDriftTooLarge);
ONSAGER_ERROR(ConfigError);

#undef ONSAGER_ERROR

}  // namespace onsager
