#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace inspect {

/// Base for errors caused by bad user input (files, config, frame streams).
/// The CLI maps these to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Line-addressed syntax error in an OBJ file.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyMesh : public InputError {
 public:
  EmptyMesh() : InputError("mesh has no vertices or triangles") {}
};

class NonPositiveParameter : public InputError {
 public:
  explicit NonPositiveParameter(const std::string& name)
      : InputError("parameter must be positive: " + name) {}
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

/// A file could not be opened; the message names the path.
class FileError : public InputError {
 public:
  using InputError::InputError;
};

/// Frame timestamps went backwards.
class FrameOrderError : public InputError {
 public:
  FrameOrderError(long long previous, long long got)
      : InputError("frame t_ms " + std::to_string(got) +
                   " precedes previous frame t_ms " + std::to_string(previous)) {}
};

/// Malformed record in a frames file (1-based line) or wire message (line 0).
class ReplayError : public InputError {
 public:
  ReplayError(std::size_t line, const std::string& what)
      : InputError(line == 0 ? what : "frames line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace inspect
