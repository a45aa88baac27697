#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vsynth {

enum class Errc {
  ZeroDirection,
  ZeroAxis,
  InvalidRadii,
  DegenerateBlend,
  ParallelDirections,
  NotEligible,
  RootOutOfSupport,
  ShapeMismatch,
  EmptyGrid,
  IndexOutOfRange,
  TooFewFrames,
  InvalidParams,
  ParseError,
  TruncatedPayload,
  KindMismatch,
  LabeledBackground,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Data-level failure raised by every library operation.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Non-fatal diagnostics (e.g. contrast outside the typical range). Defaults to stderr.
using WarningSink = void (*)(std::string_view);
void set_warning_sink(WarningSink sink) noexcept;
void warn(std::string_view message);

}  // namespace vsynth
