#include "aiq/bitstring.hpp"

#include <ostream>

namespace aiq {

std::ostream& operator<<(std::ostream& os, const BitString& b) {
  return os << b.str();
}

}  // namespace aiq
