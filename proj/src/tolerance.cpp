#include "entropic/tolerance.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace entropic::caps {

int max_dense_dim() {
    static const int value = [] {
        const char* env = std::getenv("ENTROPIC_DOUBLING_MAX_N");
        if (env == nullptr || *env == '\0') return kDefaultDenseDim;
        try {
            return std::clamp(std::stoi(env), 1, kMaxElementDim);
        } catch (...) {
            return kDefaultDenseDim;
        }
    }();
    return value;
}

int max_joint_bits() { return std::min(2 * max_dense_dim(), 26); }

}  // namespace entropic::caps
