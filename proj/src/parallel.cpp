#include "zollfins/parallel.hpp"

#include <cstdlib>
#include <string>

namespace zollfins {

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("ZOLLFINS_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) n = std::min(n, cap);
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return n;
}

}  // namespace zollfins
