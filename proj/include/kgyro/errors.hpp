#pragma once

#include <stdexcept>
#include <string>

namespace kgyro {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotRealImage : Error { using Error::Error; };
struct OffOrbit : Error { using Error::Error; };
struct StepFailure : Error { using Error::Error; };
struct SingularD : Error { using Error::Error; };
struct DependentFields : Error { using Error::Error; };
struct InadmissibleFamily : Error { using Error::Error; };
struct BranchFailure : Error { using Error::Error; };
struct DegenerateDenominator : Error { using Error::Error; };
struct SingularDelta : Error { using Error::Error; };
struct ZeroKappa : Error { using Error::Error; };
struct SZero : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct IOFailure : Error { using Error::Error; };

}  // namespace kgyro
