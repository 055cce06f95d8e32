#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mte {

/// Finite binary string with explicit length; the empty string is allowed.
class BitString {
 public:
  BitString() = default;

  /// Accepts only '0' and '1'; throws DomainError otherwise.
  static BitString from_string(std::string_view text);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }

  void push_back(bool b) { bits_.push_back(b); }
  void append(const BitString& other);
  void reserve(std::size_t n) { bits_.reserve(n); }

  bool is_prefix_of(const BitString& other) const;
  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<bool> bits_;
};

}  // namespace mte
