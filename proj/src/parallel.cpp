#include "windline/parallel.hpp"

#include <cstdlib>
#include <string>

namespace windline {

std::size_t thread_cap() {
    const char* env = std::getenv("WINDLINE_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    try {
        const long v = std::stol(env);
        return v > 0 ? static_cast<std::size_t>(v) : 1;
    } catch (...) {
        return 1;
    }
}

}  // namespace windline
