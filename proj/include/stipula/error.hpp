#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stipula {

/// 1-based line/column in the contract source. A zero line means "no position".
struct SourcePos {
  int line = 0;
  int column = 0;

  [[nodiscard]] bool known() const { return line > 0; }
  [[nodiscard]] std::string str() const;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

/// Root of every diagnostic raised by the toolkit.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message, SourcePos pos = {});

  [[nodiscard]] const std::string& kind() const { return kind_; }
  [[nodiscard]] const SourcePos& pos() const { return pos_; }
  [[nodiscard]] const std::string& message() const { return message_; }

 private:
  std::string kind_;
  std::string message_;
  SourcePos pos_;
};

#define STIPULA_DEFINE_ERROR(Name)                                          \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& message, SourcePos pos = {})          \
        : Error(#Name, message, pos) {}                                     \
  };

// front end
STIPULA_DEFINE_ERROR(SyntaxError)
STIPULA_DEFINE_ERROR(NameError)
STIPULA_DEFINE_ERROR(TypeError)

// analyses
STIPULA_DEFINE_ERROR(ConflictError)
STIPULA_DEFINE_ERROR(KindError)
STIPULA_DEFINE_ERROR(UnsupportedError)
STIPULA_DEFINE_ERROR(NotDisjointError)
STIPULA_DEFINE_ERROR(NotSupportedError)
STIPULA_DEFINE_ERROR(NonLinearDeltaError)

// interpreter
STIPULA_DEFINE_ERROR(MissingInitError)
STIPULA_DEFINE_ERROR(WrongStateError)
STIPULA_DEFINE_ERROR(GuardFalseError)
STIPULA_DEFINE_ERROR(InsufficientAssetError)
STIPULA_DEFINE_ERROR(UnknownClauseError)
STIPULA_DEFINE_ERROR(NotFireableError)
STIPULA_DEFINE_ERROR(EvalError)
STIPULA_DEFINE_ERROR(ArgumentError)

// external prover bridge
STIPULA_DEFINE_ERROR(ProverNotFound)
STIPULA_DEFINE_ERROR(ProverTimeout)

#undef STIPULA_DEFINE_ERROR

/// A failure while replaying a trace; wraps the underlying error with the step index.
class TraceError : public Error {
 public:
  TraceError(std::size_t step, const Error& cause);
  TraceError(std::size_t step, const std::string& message);

  [[nodiscard]] std::size_t step() const { return step_; }
  [[nodiscard]] const std::string& cause_kind() const { return cause_kind_; }

 private:
  std::size_t step_;
  std::string cause_kind_;
};

}  // namespace stipula
