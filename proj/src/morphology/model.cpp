#include "codesign/morphology/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "codesign/common/error.hpp"

namespace codesign::morphology {

namespace {

std::atomic<std::uint64_t> g_evaluations{0};

constexpr double kMetersPerInch = 0.0254;

double require(const nlohmann::json& j, const char* section, const char* key) {
    if (!j.contains(section) || !j.at(section).contains(key) || !j.at(section).at(key).is_number()) {
        throw ConfigError(std::string(section) + "." + key, std::string("morphology constants: missing numeric field ") + section + "." + key);
    }
    return j.at(section).at(key).get<double>();
}

} // namespace

std::array<double, MorphologyDesign::size> MorphologyDesign::to_array() const {
    return {length, width, motor_power, battery_capacity, propeller_diameter, sensor_mass};
}

MorphologyDesign MorphologyDesign::from_array(const std::array<double, size>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

std::array<double, TalentVector::size> TalentVector::to_array() const {
    return {flight_range, cruise_speed, detection_distance};
}

TalentVector TalentVector::from_array(const std::array<double, size>& v) {
    return {v[0], v[1], v[2]};
}

std::array<Interval, MorphologyDesign::size> DesignBounds::to_array() const {
    return {length, width, motor_power, battery_capacity, propeller_diameter, sensor_mass};
}

std::array<Interval, TalentVector::size> TalentBounds::to_array() const {
    return {flight_range, cruise_speed, detection_distance};
}

bool TalentBounds::contains(const TalentVector& t) const {
    return flight_range.contains(t.flight_range) && cruise_speed.contains(t.cruise_speed) &&
           detection_distance.contains(t.detection_distance);
}

MorphologyDesign baseline_design() { return {0.325, 0.325, 175.0, 55.6, 9.7, 0.24}; }
TalentVector baseline_talents() { return {16.7, 5.1, 400.0}; }
MorphologyDesign reference_final_design() { return {0.315, 0.315, 100.0, 55.6, 12.0, 0.15}; }
TalentVector reference_final_talents() { return {24.0, 4.7, 100.0}; }

ModelConstants ModelConstants::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("morphology_constants", "cannot open morphology constants file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("morphology_constants", "morphology constants " + path + ": " + e.what());
    }

    ModelConstants c;
    c.version = j.value("version", 0);
    if (c.version != 1) {
        throw ConfigError("version", "morphology constants: unsupported version " + std::to_string(c.version));
    }
    c.frame_base_kg = require(j, "mass", "frame_base_kg");
    c.frame_per_planform_kg_m2 = require(j, "mass", "frame_per_planform_kg_m2");
    c.motor_base_kg = require(j, "mass", "motor_base_kg");
    c.motor_per_watt_kg = require(j, "mass", "motor_per_watt_kg");
    c.battery_specific_energy_wh_kg = require(j, "mass", "battery_specific_energy_wh_kg");
    c.propeller_per_inch_kg = require(j, "mass", "propeller_per_inch_kg");

    c.rotor_count = static_cast<int>(require(j, "propulsion", "rotor_count"));
    c.air_density_kg_m3 = require(j, "propulsion", "air_density_kg_m3");
    c.gravity_m_s2 = require(j, "propulsion", "gravity_m_s2");
    c.cruise_power_fraction = require(j, "propulsion", "cruise_power_fraction");
    c.induced_power_divisor = require(j, "propulsion", "induced_power_divisor");
    c.drag_area_per_planform = require(j, "propulsion", "drag_area_per_planform");
    c.max_solve_speed_m_s = require(j, "propulsion", "max_solve_speed_m_s");

    c.usable_battery_fraction = require(j, "energy", "usable_battery_fraction");
    c.drive_efficiency = require(j, "energy", "drive_efficiency");
    c.avionics_power_w = require(j, "energy", "avionics_power_w");
    c.sensor_power_w_per_kg = require(j, "energy", "sensor_power_w_per_kg");

    c.sensor_min_mass_kg = require(j, "sensor", "min_mass_kg");
    c.sensor_max_mass_kg = require(j, "sensor", "max_mass_kg");
    c.min_detection_m = require(j, "sensor", "min_detection_m");
    c.max_detection_m = require(j, "sensor", "max_detection_m");
    c.hill_exponent = require(j, "sensor", "hill_exponent");
    c.hill_knee = require(j, "sensor", "hill_knee");
    return c;
}

std::string ModelConstants::default_path() {
    if (const char* env = std::getenv("CODESIGN_CONSTANTS"); env != nullptr && *env != '\0') {
        return env;
    }
    return CODESIGN_DEFAULT_CONSTANTS;
}

ModelConstants ModelConstants::load_default() { return load(default_path()); }

MorphologyModel::MorphologyModel(ModelConstants constants, DesignBounds design_bounds, TalentBounds talent_bounds)
    : constants_(constants), design_bounds_(design_bounds), talent_bounds_(talent_bounds) {}

void MorphologyModel::check_bounds(const MorphologyDesign& design) const {
    const auto values = design.to_array();
    const auto box = design_bounds_.to_array();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || !box[i].contains(values[i])) {
            std::ostringstream msg;
            msg << "design field " << kDesignFieldNames[i] << " = " << values[i] << " outside [" << box[i].lower << ", "
                << box[i].upper << "]";
            throw BoundsError(kDesignFieldNames[i], msg.str());
        }
    }
}

double MorphologyModel::total_mass(const MorphologyDesign& d) const {
    check_bounds(d);
    const auto& c = constants_;
    const double frame = c.frame_base_kg + c.frame_per_planform_kg_m2 * d.length * d.width;
    const double motors = c.motor_base_kg + c.motor_per_watt_kg * d.motor_power;
    const double battery = d.battery_capacity / c.battery_specific_energy_wh_kg;
    const double propellers = c.propeller_per_inch_kg * d.propeller_diameter;
    return frame + motors + battery + propellers + d.sensor_mass;
}

double MorphologyModel::power_required(const MorphologyDesign& d, double speed) const {
    const auto& c = constants_;
    const double thrust = total_mass(d) * c.gravity_m_s2;
    const double radius = 0.5 * d.propeller_diameter * kMetersPerInch;
    const double disk_area = c.rotor_count * std::numbers::pi * radius * radius;
    const double hover_inflow = std::sqrt(thrust / (2.0 * c.air_density_kg_m3 * disk_area));

    // Glauert forward-flight inflow ratio: w^4 + (V/v_h)^2 w^2 - 1 = 0
    const double mu2 = (speed / hover_inflow) * (speed / hover_inflow);
    const double inflow_ratio = std::sqrt(0.5 * (std::sqrt(mu2 * mu2 + 4.0) - mu2));
    const double induced = thrust * hover_inflow * inflow_ratio / c.induced_power_divisor;

    const double drag_area = c.drag_area_per_planform * d.length * d.width;
    const double parasite = 0.5 * c.air_density_kg_m3 * drag_area * speed * speed * speed;
    return induced + parasite;
}

double MorphologyModel::raw_cruise_speed(const MorphologyDesign& d) const {
    check_bounds(d);
    const double available = constants_.cruise_power_fraction * d.motor_power;
    const double v_max = constants_.max_solve_speed_m_s;
    auto excess = [&](double v) { return power_required(d, v) - available; };

    // minimum-power speed by golden section; the power curve is unimodal
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 0.0, hi = v_max;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = excess(x1), f2 = excess(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = excess(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = excess(x2);
        }
    }
    double v_low = 0.5 * (lo + hi);
    if (excess(v_low) > 0.0) {
        return 0.0; // underpowered
    }
    if (excess(v_max) <= 0.0) {
        return v_max;
    }
    double v_high = v_max;
    for (int it = 0; it < 200 && v_high - v_low > 1e-13; ++it) {
        const double mid = 0.5 * (v_low + v_high);
        (excess(mid) <= 0.0 ? v_low : v_high) = mid;
    }
    return v_low;
}

double MorphologyModel::cruise_speed(const MorphologyDesign& d) const {
    return std::clamp(raw_cruise_speed(d), talent_bounds_.cruise_speed.lower, talent_bounds_.cruise_speed.upper);
}

double MorphologyModel::flight_range(const MorphologyDesign& d) const {
    const auto& c = constants_;
    const double speed = cruise_speed(d);
    const double electrical = c.cruise_power_fraction * d.motor_power / c.drive_efficiency + c.avionics_power_w +
                              c.sensor_power_w_per_kg * d.sensor_mass;
    const double endurance_s = d.battery_capacity * 3600.0 * c.usable_battery_fraction / electrical;
    const double range_km = speed * endurance_s / 1000.0;
    return std::clamp(range_km, talent_bounds_.flight_range.lower, talent_bounds_.flight_range.upper);
}

double MorphologyModel::detection_distance(double sensor_mass) const {
    const auto& c = constants_;
    if (!std::isfinite(sensor_mass) || sensor_mass < c.sensor_min_mass_kg || sensor_mass > c.sensor_max_mass_kg) {
        std::ostringstream msg;
        msg << "sensor_mass = " << sensor_mass << " outside [" << c.sensor_min_mass_kg << ", " << c.sensor_max_mass_kg << "]";
        throw BoundsError("sensor_mass", msg.str());
    }
    const double u = (sensor_mass - c.sensor_min_mass_kg) / (c.sensor_max_mass_kg - c.sensor_min_mass_kg);
    const double up = std::pow(u, c.hill_exponent);
    const double share = up / (up + c.hill_knee * std::pow(1.0 - u, c.hill_exponent));
    return c.min_detection_m + (c.max_detection_m - c.min_detection_m) * share;
}

TalentVector MorphologyModel::evaluate_talents(const MorphologyDesign& d) const {
    g_evaluations.fetch_add(1, std::memory_order_relaxed);
    check_bounds(d);
    return {flight_range(d), cruise_speed(d), detection_distance(d.sensor_mass)};
}

std::uint64_t evaluation_count() { return g_evaluations.load(std::memory_order_relaxed); }

} // namespace codesign::morphology
