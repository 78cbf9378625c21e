#include "fracdim/parallel.hpp"

#include <cstdlib>
#include <string>

namespace fracdim {

std::size_t worker_count() {
  std::size_t count = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("FRACDIM_THREADS"); cap != nullptr && *cap != '\0') {
    try {
      const long parsed = std::stol(cap);
      if (parsed >= 1) count = std::min(count, static_cast<std::size_t>(parsed));
    } catch (const std::exception&) {
      // Unparseable cap: ignore it.
    }
  }
  return count;
}

}  // namespace fracdim
