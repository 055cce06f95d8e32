#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mte {

/// Input outside an operation's mathematical domain (ell_omega(0), beta <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or truncated omega codeword. offset() is the bit position where decoding stopped.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at bit offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Text input that does not follow its declared format. line() is 1-based; 0 when the
/// error is about a whole document.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A sampler hit its step or attempt budget. Never silently truncated.
class AbortError : public std::runtime_error {
 public:
  AbortError(const std::string& what, std::uint64_t count)
      : std::runtime_error(what + " after " + std::to_string(count)), count_(count) {}
  std::uint64_t count() const noexcept { return count_; }

 private:
  std::uint64_t count_;
};

/// Least-squares fit with too few or degenerate points.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mte
