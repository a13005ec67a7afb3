#pragma once

#include <stdexcept>
#include <string>

namespace capkc {

// Malformed input (file format, bad arguments). CLI exit code 1.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : std::runtime_error(what), line_(0) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Instance admits no solution (at any threshold / within budget). CLI exit code 2.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input exceeds an exhaustive component's enumeration guard. CLI exit code 1.
class TooLargeError : public std::runtime_error {
 public:
  explicit TooLargeError(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal certificate failed: a transfer did not verify, an LP solution
// violated a constraint, an assignment could not be extracted. Always a bug
// (ours or the caller's preconditions); CLI exit code 3.
class VerificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw VerificationError(what);
}

}  // namespace capkc
