#include "mte/bitstring.hpp"

#include <algorithm>

#include "mte/errors.hpp"

namespace mte {

BitString BitString::from_string(std::string_view text) {
  BitString out;
  out.reserve(text.size());
  for (char ch : text) {
    if (ch == '0') {
      out.push_back(false);
    } else if (ch == '1') {
      out.push_back(true);
    } else {
      throw DomainError("bit strings contain only '0' and '1'");
    }
  }
  return out;
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

bool BitString::is_prefix_of(const BitString& other) const {
  if (size() > other.size()) return false;
  return std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
}

std::string BitString::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (bool b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

}  // namespace mte
