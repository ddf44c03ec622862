#ifndef CODESIGN_SIM_SIGNAL_FIELD_HPP
#define CODESIGN_SIM_SIGNAL_FIELD_HPP

#include <cmath>
#include <vector>

namespace codesign::sim {

/// Planar point in kilometres; x east, y north.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
    bool operator==(const Vec2&) const = default;
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Distance from p to the segment [a, b].
double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);

/// Source families.
///  1 isotropic Gaussian            params: sigma
///  2 rotated anisotropic Gaussian  params: sigma_major, sigma_minor, theta
///  3 true source plus weaker decoy params: sigma, decoy_dx, decoy_dy, decoy_ratio, decoy_sigma
///  4 Gaussian on a linear ramp     params: sigma, ramp_weight, ramp_angle, ramp_length
///  5 plateau Gaussian              params: sigma, plateau_gain
enum class FieldFamily : int { Isotropic = 1, Anisotropic = 2, TwoPeak = 3, RampBackground = 4, Plateau = 5 };

inline constexpr int kFieldFamilyCount = 5;

/// Nonnegative scalar field whose global maximum, equal to peak_strength,
/// sits at source_location. Lengths in km.
struct SignalField {
    int family_id = 1;
    Vec2 source_location;
    double peak_strength = 50.0;
    std::vector<double> shape_params;

    double value(Vec2 p) const;
    /// Throws InvalidArgument when the family or its parameters are invalid.
    void validate() const;
    bool operator==(const SignalField&) const = default;
};

} // namespace codesign::sim

#endif
