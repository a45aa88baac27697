#include "vsynth/error.hpp"

#include <atomic>
#include <iostream>

namespace vsynth {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::ZeroDirection: return "ZeroDirection";
    case Errc::ZeroAxis: return "ZeroAxis";
    case Errc::InvalidRadii: return "InvalidRadii";
    case Errc::DegenerateBlend: return "DegenerateBlend";
    case Errc::ParallelDirections: return "ParallelDirections";
    case Errc::NotEligible: return "NotEligible";
    case Errc::RootOutOfSupport: return "RootOutOfSupport";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::EmptyGrid: return "EmptyGrid";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::TooFewFrames: return "TooFewFrames";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::ParseError: return "ParseError";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::LabeledBackground: return "LabeledBackground";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

namespace {

void stderr_sink(std::string_view message) { std::cerr << "warning: " << message << '\n'; }

std::atomic<WarningSink> g_sink{&stderr_sink};

}  // namespace

void set_warning_sink(WarningSink sink) noexcept { g_sink.store(sink ? sink : &stderr_sink); }

void warn(std::string_view message) { g_sink.load()(message); }

}  // namespace vsynth
