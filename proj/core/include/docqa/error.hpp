#pragma once

#include <stdexcept>
#include <string>

namespace docqa {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on caller-supplied data was violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A dataset or document file could not be read or parsed.
class IngestError : public Error {
 public:
  IngestError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// The backend could not be reached or returned a transport-level failure.
// Callers may retry.
class TransportError : public Error {
 public:
  using Error::Error;
};

// The backend answered, but with a payload that breaks the wire contract.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// A pipeline stage failed; the message names the stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + " stage: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace docqa
