#pragma once

#include <stdexcept>
#include <string>

namespace entgraph {

// Base of every error the library throws. kind() is a stable, machine-readable tag
// that the CLI reports alongside the message.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// A caller-supplied parameter is outside its documented range.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& message) : Error("parameter", message) {}
};

// Input bytes could not be turned into the expected record.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error("parse", message) {}
};

class EmptyCorpusError : public Error {
 public:
  explicit EmptyCorpusError(const std::string& message) : Error("empty_corpus", message) {}
};

// A serialized document violates its schema.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message) : Error("schema", message) {}
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& message) : Error("not_found", message) {}
};

// An operation was applied to an object in the wrong state (e.g. expanding twice).
class StateError : public Error {
 public:
  explicit StateError(const std::string& message) : Error("state", message) {}
};

}  // namespace entgraph
