#ifndef CODESIGN_SIM_BEHAVIOR_HPP
#define CODESIGN_SIM_BEHAVIOR_HPP

namespace codesign::sim {

/// Exploration/exploitation schedule parameters of the swarm behavior.
struct BehaviorHyperparams {
    double a = 10.0; // logistic steepness, [5, 15]
    double b = 0.5;  // switch point as a fraction of the mission, [0.1, 0.9]

    static constexpr double kMinA = 5.0, kMaxA = 15.0;
    static constexpr double kMinB = 0.1, kMaxB = 0.9;

    /// Throws BoundsError naming "a" or "b".
    void check_bounds() const;
    bool operator==(const BehaviorHyperparams&) const = default;
};

/// Exploitation weight alpha = 1 / (1 + exp(-a (t / t_max - b))).
/// Throws InvalidArgument when t_max <= 0 or t < 0.
double alpha(double t, double t_max, const BehaviorHyperparams& params);

} // namespace codesign::sim

#endif
