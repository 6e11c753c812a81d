#pragma once

#include <stdexcept>
#include <string>

namespace catdb {

enum class ErrorKind {
  Precondition,    // NotASubset, MalformedProduct, MiddleMismatch, UnknownVertex, ...
  Parse,           // malformed text, duplicate names, unknown arrows
  Validation,      // instance/morphism fails a law
  Budget,          // search budget exhausted
  PossiblyInfinite // a needed hom-set did not stabilise within the bound
};

/// Base of every error thrown by the library. `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), kind_(kind), code_(std::move(code)), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string code_;
  std::string detail_;
};

inline Error precondition(std::string code, const std::string& what) {
  return Error(ErrorKind::Precondition, std::move(code), what);
}

/// Outcome of a check that can fail without being an error in the caller.
struct Verdict {
  bool ok = true;
  std::string code;    // e.g. "PEDViolation"; empty when ok
  std::string detail;  // names the first offender

  static Verdict pass() { return {}; }
  static Verdict fail(std::string code, std::string detail) { return {false, std::move(code), std::move(detail)}; }

  explicit operator bool() const noexcept { return ok; }
  std::string message() const { return ok ? "ok" : code + ": " + detail; }
};

/// Throws a Validation error for a failed verdict.
inline void require(const Verdict& v) {
  if (!v.ok) throw Error(ErrorKind::Validation, v.code, v.detail);
}

class ParseError : public Error {
 public:
  ParseError(std::string code, const std::string& what, int line = 0, int column = 0)
      : Error(ErrorKind::Parse, std::move(code),
              line > 0 ? what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"
                       : what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class PossiblyInfiniteError : public Error {
 public:
  PossiblyInfiniteError(std::string vertex, const std::string& what)
      : Error(ErrorKind::PossiblyInfinite, "PossiblyInfinite", vertex + ": " + what),
        vertex_(std::move(vertex)) {}

  const std::string& vertex() const noexcept { return vertex_; }

 private:
  std::string vertex_;
};

class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(ErrorKind::Budget, "ExhaustedBudget", what) {}
};

}  // namespace catdb
