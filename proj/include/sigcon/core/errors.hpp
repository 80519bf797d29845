#pragma once

#include <stdexcept>
#include <string>

namespace sigcon {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define SIGCON_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                                  \
  public:                                                                      \
    using Error::Error;                                                        \
  }

SIGCON_DEFINE_ERROR(ShapeMismatch);
SIGCON_DEFINE_ERROR(WeightSumError);
SIGCON_DEFINE_ERROR(InvalidParameter);
SIGCON_DEFINE_ERROR(UnsupportedObjective);
SIGCON_DEFINE_ERROR(NotInRange);
SIGCON_DEFINE_ERROR(RankDeficient);
SIGCON_DEFINE_ERROR(CoverageError);
SIGCON_DEFINE_ERROR(EmptyBlock);
SIGCON_DEFINE_ERROR(ManifestError);
SIGCON_DEFINE_ERROR(IoError);
SIGCON_DEFINE_ERROR(FormatError);
SIGCON_DEFINE_ERROR(MissingReference);

#undef SIGCON_DEFINE_ERROR

} // namespace sigcon
