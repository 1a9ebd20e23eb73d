#include "levyhull/parallel.hpp"

#include <cstdlib>
#include <string>

namespace levyhull {

unsigned resolve_threads(unsigned requested) {
  if (const char* env = std::getenv("LEVYHULL_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
      // Ignore malformed values.
    }
  }
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace levyhull
