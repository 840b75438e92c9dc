#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vanplan/types.h"

namespace vanplan {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed instance data: bad index, non-square matrix, negative entry.
class InvalidInstance : public Error {
public:
  using Error::Error;
};

// Some township with positive demand cannot be served by any single-day tour.
class InfeasibleInstance : public Error {
public:
  InfeasibleInstance(std::vector<Index> townships, const std::string& what)
    : Error(what), _townships(std::move(townships)) {
  }

  const std::vector<Index>& townships() const {
    return _townships;
  }

private:
  std::vector<Index> _townships;
};

// Every pool tour scores zero while demand remains.
class NoProductiveTour : public Error {
public:
  using Error::Error;
};

// Caller broke a documented precondition (e.g. comparing invalid schedules).
class ContractViolation : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class SchemaError : public Error {
public:
  using Error::Error;
};

class MissingCoordinates : public Error {
public:
  MissingCoordinates() : Error("instance has no coordinates") {
  }
};

class NetworkError : public Error {
public:
  using Error::Error;
};

class MalformedResponse : public Error {
public:
  using Error::Error;
};

} // namespace vanplan
