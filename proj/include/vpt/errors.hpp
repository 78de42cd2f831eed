#pragma once

#include <stdexcept>
#include <string>

namespace vpt {

// Every failure raised by the library derives from Error so callers can catch
// one type at the boundary and still dispatch on the concrete kind.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Pixel ray does not hit the ground plane ahead of the camera.
class AboveHorizon : public Error {
 public:
  using Error::Error;
};

// Ground point cannot be projected with the front-facing arctan branch.
class BehindCamera : public Error {
 public:
  using Error::Error;
};

class InvalidRegion : public Error {
 public:
  using Error::Error;
};

class InvalidSegment : public Error {
 public:
  using Error::Error;
};

class NoRuleFired : public Error {
 public:
  using Error::Error;
};

class NoGoalPoint : public Error {
 public:
  using Error::Error;
};

class EmptyTrace : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnknownPreset : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace vpt
