#pragma once

#include <stdexcept>
#include <string>

namespace froshe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class SensingError : public Error {
 public:
  using Error::Error;
};

class PathError : public Error {
 public:
  using Error::Error;
};

class AssignmentError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace froshe
