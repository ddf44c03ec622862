#ifndef CODESIGN_COMMON_LHS_HPP
#define CODESIGN_COMMON_LHS_HPP

#include <cstddef>
#include <vector>

#include "codesign/common/random.hpp"

namespace codesign {

/// Latin hypercube sample on the unit cube: `count` rows of `dimension`
/// coordinates. In every dimension each of the `count` equal strata of [0, 1)
/// holds exactly one sample, placed uniformly inside its stratum.
std::vector<std::vector<double>> latin_hypercube(std::size_t count, std::size_t dimension, Rng& rng);

} // namespace codesign

#endif
