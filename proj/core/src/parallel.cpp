#include "codbench/parallel.hpp"

#include <cstdlib>
#include <string>

namespace codbench {

unsigned default_workers() noexcept {
    if (const char* env = std::getenv("COD_BENCH_WORKERS")) {
        try {
            long v = std::stol(env);
            if (v >= 1)
                return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace codbench
