#pragma once

#include <stdexcept>
#include <string>

namespace formpin {

// Every failure surfaces as one of these classes; the CLI maps each to its
// own exit code.
enum class ErrorKind { Input, Ocr, Match, Estimate, Io };

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

class OcrError : public Error {
 public:
  explicit OcrError(const std::string& what) : Error(ErrorKind::Ocr, what) {}
};

class MatchError : public Error {
 public:
  explicit MatchError(const std::string& what) : Error(ErrorKind::Match, what) {}
};

class EstimateError : public Error {
 public:
  explicit EstimateError(const std::string& what)
      : Error(ErrorKind::Estimate, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace formpin
