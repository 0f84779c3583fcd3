#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cox {

// Base class of every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

#define COX_DECLARE_ERROR(Name)           \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

COX_DECLARE_ERROR(CycleDetected);
COX_DECLARE_ERROR(NotAPoset);
COX_DECLARE_ERROR(UnknownVertex);
COX_DECLARE_ERROR(EmptyWindow);
COX_DECLARE_ERROR(UndefinedProduct);
COX_DECLARE_ERROR(IntervalFinitenessViolated);
COX_DECLARE_ERROR(SharpEulerViolated);
COX_DECLARE_ERROR(CapExceeded);
COX_DECLARE_ERROR(NotInDomain);
COX_DECLARE_ERROR(NotInSubgroup);
COX_DECLARE_ERROR(WindowInsufficient);
COX_DECLARE_ERROR(HomCNotZero);
COX_DECLARE_ERROR(HypothesisViolated);
COX_DECLARE_ERROR(NotInKnittedRegion);
COX_DECLARE_ERROR(KnittingStuck);
COX_DECLARE_ERROR(InfiniteDimensional);

#undef COX_DECLARE_ERROR

}  // namespace cox
