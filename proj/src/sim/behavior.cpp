#include "codesign/sim/behavior.hpp"

#include <cmath>
#include <sstream>

#include "codesign/common/error.hpp"

namespace codesign::sim {

void BehaviorHyperparams::check_bounds() const {
    if (!(a >= kMinA && a <= kMaxA)) {
        std::ostringstream msg;
        msg << "behavior parameter a = " << a << " outside [" << kMinA << ", " << kMaxA << "]";
        throw BoundsError("a", msg.str());
    }
    if (!(b >= kMinB && b <= kMaxB)) {
        std::ostringstream msg;
        msg << "behavior parameter b = " << b << " outside [" << kMinB << ", " << kMaxB << "]";
        throw BoundsError("b", msg.str());
    }
}

double alpha(double t, double t_max, const BehaviorHyperparams& params) {
    if (!(t_max > 0.0)) {
        throw InvalidArgument("alpha: t_max must be positive");
    }
    if (!(t >= 0.0)) {
        throw InvalidArgument("alpha: t must be nonnegative");
    }
    return 1.0 / (1.0 + std::exp(-params.a * (t / t_max - params.b)));
}

} // namespace codesign::sim
