#ifndef MORSE2D_COMMON_HPP
#define MORSE2D_COMMON_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace morse2d {

// Dense handle into the global cell table: vertices first, then edges, then
// triangles.
using CellId = std::int32_t;
inline constexpr CellId NIL = -1;

// Exact integer. cpp_int keeps small values inline and only allocates once a
// value outgrows a couple of limbs.
using Integer = boost::multiprecision::cpp_int;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ManifoldError : public Error {
 public:
  enum class Kind { NonManifoldEdge, NonManifoldVertex };
  ManifoldError(Kind kind, CellId cell, const std::string& what)
      : Error(what), kind_(kind), cell_(cell) {}
  Kind kind() const noexcept { return kind_; }
  CellId cell() const noexcept { return cell_; }

 private:
  Kind kind_;
  CellId cell_;
};

// A broken internal invariant: cyclic matching, disconnected frame, ordering
// corruption. Seeing one of these means a bug or an invalid hand-built input.
class InternalError : public Error {
 public:
  using Error::Error;
};

// Cancellation precondition violated (zero or several paths between a pair).
class CancellationError : public Error {
 public:
  CancellationError(const std::string& what, int path_count)
      : Error(what), path_count_(path_count) {}
  int path_count() const noexcept { return path_count_; }

 private:
  int path_count_;
};

// Instrumentation used by the scaling checks. Each counter counts elementary
// steps (one Hasse edge inspected, one formal-sum term touched, ...).
struct OpCounter {
  std::uint64_t hasse_visits = 0;
  std::uint64_t sum_terms = 0;

  std::uint64_t total() const noexcept { return hasse_visits + sum_terms; }
};

}  // namespace morse2d

#endif  // MORSE2D_COMMON_HPP
