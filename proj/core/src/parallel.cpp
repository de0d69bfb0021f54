#include "shadowtree/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace shadowtree {

int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("SHADOWTREE_THREADS")) {
        try {
            const int want = std::stoi(env);
            if (want >= 1) n = std::min(want, 256);
        } catch (...) {
        }
    }
    return n;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace shadowtree
