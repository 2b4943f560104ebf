#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ktopos {

/// Base class for every error raised by the library. Each subclass names one
/// contract violation so callers (and the CLI) can react by type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define KTOPOS_DEFINE_ERROR(Name)      \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

KTOPOS_DEFINE_ERROR(CycleError);
KTOPOS_DEFINE_ERROR(DuplicateLabelError);
KTOPOS_DEFINE_ERROR(SizeError);
KTOPOS_DEFINE_ERROR(UnknownElementError);
KTOPOS_DEFINE_ERROR(NotMonotoneError);
KTOPOS_DEFINE_ERROR(NotOpenError);
KTOPOS_DEFINE_ERROR(NotUpsetError);
KTOPOS_DEFINE_ERROR(CodomainMismatchError);
KTOPOS_DEFINE_ERROR(ParallelPairError);
KTOPOS_DEFINE_ERROR(NotLatticeError);
KTOPOS_DEFINE_ERROR(NotDistributiveError);
KTOPOS_DEFINE_ERROR(NotHomomorphismError);
KTOPOS_DEFINE_ERROR(UnboundVariableError);
KTOPOS_DEFINE_ERROR(ResourceError);
KTOPOS_DEFINE_ERROR(NotCoverError);
KTOPOS_DEFINE_ERROR(SearchExhaustedError);
KTOPOS_DEFINE_ERROR(BaseMismatchError);
KTOPOS_DEFINE_ERROR(NotRootedError);
KTOPOS_DEFINE_ERROR(NotMeetPreservingError);
KTOPOS_DEFINE_ERROR(FormatError);

#undef KTOPOS_DEFINE_ERROR

/// Parse failure; `position` is the byte offset into the input.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace ktopos
