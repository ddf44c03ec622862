#include "codesign/sim/signal_field.hpp"

#include <algorithm>
#include <string>

#include "codesign/common/error.hpp"

namespace codesign::sim {

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    if (len2 <= 0.0) {
        return distance(p, a);
    }
    const Vec2 ap = p - a;
    const double t = std::clamp((ap.x * ab.x + ap.y * ab.y) / len2, 0.0, 1.0);
    return distance(p, a + ab * t);
}

namespace {

std::size_t param_count(int family) {
    switch (static_cast<FieldFamily>(family)) {
    case FieldFamily::Isotropic: return 1;
    case FieldFamily::Anisotropic: return 3;
    case FieldFamily::TwoPeak: return 5;
    case FieldFamily::RampBackground: return 4;
    case FieldFamily::Plateau: return 2;
    }
    return 0;
}

inline double gauss(double r2, double sigma) { return std::exp(-0.5 * r2 / (sigma * sigma)); }

} // namespace

void SignalField::validate() const {
    if (family_id < 1 || family_id > kFieldFamilyCount) {
        throw InvalidArgument("signal field: unknown family " + std::to_string(family_id));
    }
    if (shape_params.size() != param_count(family_id)) {
        throw InvalidArgument("signal field: family " + std::to_string(family_id) + " expects " +
                              std::to_string(param_count(family_id)) + " shape parameters");
    }
    if (!(peak_strength > 0.0) || !std::isfinite(source_location.x) || !std::isfinite(source_location.y)) {
        throw InvalidArgument("signal field: invalid source");
    }
    const auto& p = shape_params;
    if (!(p[0] > 0.0)) throw InvalidArgument("signal field: sigma must be positive");
    switch (static_cast<FieldFamily>(family_id)) {
    case FieldFamily::Anisotropic:
        if (!(p[1] > 0.0)) throw InvalidArgument("signal field: minor sigma must be positive");
        break;
    case FieldFamily::TwoPeak:
        if (!(p[3] > 0.0 && p[3] < 1.0) || !(p[4] > 0.0)) throw InvalidArgument("signal field: invalid decoy");
        break;
    case FieldFamily::RampBackground:
        if (!(p[1] >= 0.0 && p[1] < 1.0) || !(p[3] > 0.0)) throw InvalidArgument("signal field: invalid ramp");
        break;
    case FieldFamily::Plateau:
        if (!(p[1] >= 1.0)) throw InvalidArgument("signal field: plateau gain must be at least 1");
        break;
    default:
        break;
    }
}

double SignalField::value(Vec2 q) const {
    const Vec2 d = q - source_location;
    const double r2 = d.x * d.x + d.y * d.y;
    const auto& p = shape_params;
    switch (static_cast<FieldFamily>(family_id)) {
    case FieldFamily::Isotropic:
        return peak_strength * gauss(r2, p[0]);
    case FieldFamily::Anisotropic: {
        const double c = std::cos(p[2]), s = std::sin(p[2]);
        const double u = c * d.x + s * d.y;
        const double v = -s * d.x + c * d.y;
        return peak_strength * std::exp(-0.5 * (u * u / (p[0] * p[0]) + v * v / (p[1] * p[1])));
    }
    case FieldFamily::TwoPeak: {
        const Vec2 decoy = source_location + Vec2{p[1], p[2]};
        const Vec2 dd = q - decoy;
        const double primary = gauss(r2, p[0]);
        const double secondary = p[3] * gauss(dd.x * dd.x + dd.y * dd.y, p[4]);
        return peak_strength * std::max(primary, secondary);
    }
    case FieldFamily::RampBackground: {
        const double along = std::abs(std::cos(p[2]) * d.x + std::sin(p[2]) * d.y);
        const double ramp = std::max(0.0, 1.0 - along / p[3]);
        return peak_strength * ((1.0 - p[1]) * gauss(r2, p[0]) + p[1] * ramp);
    }
    case FieldFamily::Plateau:
        return peak_strength * std::min(1.0, p[1] * gauss(r2, p[0]));
    }
    return 0.0;
}

} // namespace codesign::sim
