#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zetapair {

enum class ErrorKind {
  InvalidArgument,
  Domain,
  Pole,
  Config,
  InsufficientTables,
  Precondition,
  IncompleteList,
  Parse,
  Accuracy,
  BandLimit,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown when a truncated prime sum/product cannot meet its tail tolerance.
class InsufficientTablesError : public Error {
 public:
  InsufficientTablesError(std::uint64_t have, std::uint64_t required, const std::string& what)
      : Error(ErrorKind::InsufficientTables, what), have_(have), required_(required) {}
  std::uint64_t have_limit() const noexcept { return have_; }
  std::uint64_t required_limit() const noexcept { return required_; }

 private:
  std::uint64_t have_;
  std::uint64_t required_;
};

// A zero list that failed its completeness certificate on [lo, hi].
class IncompleteListError : public Error {
 public:
  IncompleteListError(double lo, double hi, const std::string& what)
      : Error(ErrorKind::IncompleteList, what), lo_(lo), hi_(hi) {}
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::Parse, what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class AccuracyError : public Error {
 public:
  AccuracyError(double achieved, const std::string& what)
      : Error(ErrorKind::Accuracy, what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace zetapair
