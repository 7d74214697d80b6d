#include "tvnet/parallel.hpp"

#include <cstdlib>
#include <string>

namespace tvnet {

unsigned default_workers() {
    const char* env = std::getenv("TVNET_WORKERS");
    if (!env || !*env) return 1;
    try {
        const long n = std::stol(env);
        return n > 0 ? static_cast<unsigned>(n) : 1u;
    } catch (const std::exception&) {
        throw ParameterError("TVNET_WORKERS must be a positive integer");
    }
}

}  // namespace tvnet
