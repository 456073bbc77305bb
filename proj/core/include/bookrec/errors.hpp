#pragma once

#include <stdexcept>
#include <string>

namespace bookrec {

// Base of all bookrec errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problems with inputs: files, records, parameters. CLI exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

// Violations of domain contracts: unknown entities, untrained state,
// inconsistent kinds. CLI exit code 2.
class DomainError : public Error {
 public:
  using Error::Error;
};

class MissingFile : public InputError {
 public:
  explicit MissingFile(const std::string& path)
      : InputError("MissingFile: " + path) {}
};

class MalformedRecord : public InputError {
 public:
  MalformedRecord(long line, const std::string& reason)
      : InputError("MalformedRecord: line " + std::to_string(line) + ": " +
                   reason),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class RatingOutOfRange : public InputError {
 public:
  RatingOutOfRange(long line, int rating)
      : InputError("RatingOutOfRange: line " + std::to_string(line) +
                   ": rating " + std::to_string(rating) +
                   " outside [1,5]"),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class EmptyInput : public InputError {
 public:
  explicit EmptyInput(const std::string& what_is_empty)
      : InputError("EmptyInput: " + what_is_empty) {}
};

class InvalidParameter : public InputError {
 public:
  explicit InvalidParameter(const std::string& detail)
      : InputError("InvalidParameter: " + detail) {}
};

class InvalidLimit : public InputError {
 public:
  explicit InvalidLimit(int limit)
      : InputError("InvalidLimit: max books per author must be >= 1, got " +
                   std::to_string(limit)) {}
};

class AlphaOutOfRange : public InputError {
 public:
  explicit AlphaOutOfRange(double alpha)
      : InputError("AlphaOutOfRange: alpha must be in [0,1], got " +
                   std::to_string(alpha)) {}
};

class UnknownUser : public DomainError {
 public:
  explicit UnknownUser(const std::string& id)
      : DomainError("UnknownUser: " + id) {}
};

class UnknownItem : public DomainError {
 public:
  explicit UnknownItem(const std::string& detail)
      : DomainError("UnknownItem: " + detail) {}
};

class KindMismatch : public DomainError {
 public:
  explicit KindMismatch(const std::string& detail)
      : DomainError("KindMismatch: " + detail) {}
};

class SchemeMismatch : public DomainError {
 public:
  explicit SchemeMismatch(const std::string& detail)
      : DomainError("SchemeMismatch: " + detail) {}
};

class MissingWeight : public DomainError {
 public:
  explicit MissingWeight(const std::string& detail)
      : DomainError("MissingWeight: " + detail) {}
};

class UntrainedEngine : public DomainError {
 public:
  UntrainedEngine() : DomainError("UntrainedEngine: train() first") {}
};

class EmptyTestSet : public DomainError {
 public:
  EmptyTestSet() : DomainError("EmptyTestSet: no test events") {}
};

class NoEvaluableUsers : public DomainError {
 public:
  NoEvaluableUsers()
      : DomainError(
            "NoEvaluableUsers: no user has both training history and test "
            "events") {}
};

}  // namespace bookrec
