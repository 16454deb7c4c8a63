#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace planeslope {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text; offset is the byte index where parsing failed.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset)
      : Error("unknown identifier '" + name + "' at offset " +
              std::to_string(offset)),
        name_(name),
        offset_(offset) {}
  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

/// The field is undefined at the requested point (division by zero, ln of a
/// non-positive number, non-finite intermediate, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Gradient requested at a point whose value comes from an override.
class OverridePointError : public Error {
 public:
  using Error::Error;
};

class NonUnitDirection : public Error {
 public:
  using Error::Error;
};

class ZeroDirection : public Error {
 public:
  using Error::Error;
};

/// Frame directions are (numerically) linearly dependent.
class CollinearFrame : public Error {
 public:
  using Error::Error;
};

/// Invalid probe configuration or config file content.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace planeslope
