#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gcmetro {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
  public:
    explicit InvalidParams(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

  private:
    std::vector<std::string> violations_;
};

class NonPositiveLadder : public Error {
  public:
    explicit NonPositiveLadder(long level);
    long level() const noexcept { return level_; }

  private:
    long level_;
};

class NotConverged : public Error {
  public:
    using Error::Error;
};

class DegenerateInput : public Error {
  public:
    using Error::Error;
};

class InvalidEfficiency : public Error {
  public:
    explicit InvalidEfficiency(double eta);
};

class Undefined : public Error {
  public:
    using Error::Error;
};

class CutoffTooSmall : public Error {
  public:
    CutoffTooSmall(long requested, long required);
};

class NonHermitian : public Error {
  public:
    using Error::Error;
};

class NoFiniteValue : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace gcmetro
