#include "codesign/common/lhs.hpp"

#include <numeric>

namespace codesign {

std::vector<std::vector<double>> latin_hypercube(std::size_t count, std::size_t dimension, Rng& rng) {
    std::vector<std::vector<double>> samples(count, std::vector<double>(dimension, 0.0));
    std::vector<std::size_t> strata(count);
    const double width = 1.0 / static_cast<double>(count);
    for (std::size_t d = 0; d < dimension; ++d) {
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        // Fisher-Yates with the portable index draw
        for (std::size_t i = count; i > 1; --i) {
            std::swap(strata[i - 1], strata[uniform_index(rng, i)]);
        }
        for (std::size_t i = 0; i < count; ++i) {
            samples[i][d] = (static_cast<double>(strata[i]) + uniform01(rng)) * width;
        }
    }
    return samples;
}

} // namespace codesign
