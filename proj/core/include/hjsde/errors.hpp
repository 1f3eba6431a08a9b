#pragma once
#include <stdexcept>
#include <string>

namespace hjsde {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define HJSDE_ERROR_TYPE(Name)                            \
  struct Name : Error {                                   \
    explicit Name(const std::string& msg) : Error(msg) {} \
  }

HJSDE_ERROR_TYPE(ZeroDenominator);
HJSDE_ERROR_TYPE(IndexOutOfRange);
HJSDE_ERROR_TYPE(DegenerateSpacing);
HJSDE_ERROR_TYPE(NotCanonical);
HJSDE_ERROR_TYPE(NoSignChange);
HJSDE_ERROR_TYPE(OnSupport);
HJSDE_ERROR_TYPE(SupportTouchesCanonicalRegion);
HJSDE_ERROR_TYPE(NoZeroOnArc);
HJSDE_ERROR_TYPE(BisectionStall);
HJSDE_ERROR_TYPE(QuadratureTolExceeded);
HJSDE_ERROR_TYPE(PoleAtPoint);
HJSDE_ERROR_TYPE(OriginSingular);
HJSDE_ERROR_TYPE(NotLocallyAffine);
HJSDE_ERROR_TYPE(DegeneratePhi);
HJSDE_ERROR_TYPE(NonDecreasingYs);
HJSDE_ERROR_TYPE(OnZeroSet);
HJSDE_ERROR_TYPE(ConformalDegeneracy);
HJSDE_ERROR_TYPE(SingularMetric);
HJSDE_ERROR_TYPE(WrongSide);
HJSDE_ERROR_TYPE(OutOfChart);
HJSDE_ERROR_TYPE(FitFailure);
HJSDE_ERROR_TYPE(UnsupportedProfile);
HJSDE_ERROR_TYPE(BadInput);

#undef HJSDE_ERROR_TYPE

} // namespace hjsde
