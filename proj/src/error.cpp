#include "stipula/error.hpp"

namespace stipula {

std::string SourcePos::str() const {
  if (!known()) return "<unknown>";
  return std::to_string(line) + ":" + std::to_string(column);
}

namespace {

std::string format(const std::string& kind, const std::string& message, const SourcePos& pos) {
  std::string out = kind;
  if (pos.known()) out += " at " + pos.str();
  out += ": " + message;
  return out;
}

}  // namespace

Error::Error(std::string kind, const std::string& message, SourcePos pos)
    : std::runtime_error(format(kind, message, pos)),
      kind_(std::move(kind)),
      message_(message),
      pos_(pos) {}

TraceError::TraceError(std::size_t step, const Error& cause)
    : Error("TraceError", "step " + std::to_string(step) + ": " + cause.what()),
      step_(step),
      cause_kind_(cause.kind()) {}

TraceError::TraceError(std::size_t step, const std::string& message)
    : Error("TraceError", "step " + std::to_string(step) + ": " + message),
      step_(step),
      cause_kind_("TraceError") {}

}  // namespace stipula
