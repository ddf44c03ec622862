#ifndef CODESIGN_MORPHOLOGY_MODEL_HPP
#define CODESIGN_MORPHOLOGY_MODEL_HPP

#include <array>
#include <atomic>
#include <cstdint>
#include <string>

namespace codesign::morphology {

/// Physical design variables of one quadcopter.
struct MorphologyDesign {
    double length = 0.0;             // m
    double width = 0.0;              // m
    double motor_power = 0.0;        // W
    double battery_capacity = 0.0;   // W*h
    double propeller_diameter = 0.0; // in
    double sensor_mass = 0.0;        // kg

    static constexpr std::size_t size = 6;
    std::array<double, size> to_array() const;
    static MorphologyDesign from_array(const std::array<double, size>& v);

    bool operator==(const MorphologyDesign&) const = default;
};

/// Morphology-dependent capabilities consumed by the swarm behavior model.
struct TalentVector {
    double flight_range = 0.0;       // km
    double cruise_speed = 0.0;       // m/s
    double detection_distance = 0.0; // m

    static constexpr std::size_t size = 3;
    std::array<double, size> to_array() const;
    static TalentVector from_array(const std::array<double, size>& v);

    bool operator==(const TalentVector&) const = default;
};

struct Interval {
    double lower;
    double upper;

    bool contains(double v) const { return v >= lower && v <= upper; }
    double width() const { return upper - lower; }
};

/// Design box X_min <= X_M <= X_max.
struct DesignBounds {
    Interval length{0.2, 0.5};
    Interval width{0.2, 0.5};
    Interval motor_power{100.0, 400.0};
    Interval battery_capacity{13.9, 55.6};
    Interval propeller_diameter{7.0, 12.0};
    Interval sensor_mass{0.1, 0.7};

    std::array<Interval, MorphologyDesign::size> to_array() const;
};

/// Talent box Y_min <= Y_TL <= Y_max.
struct TalentBounds {
    Interval flight_range{8.9, 32.6};
    Interval cruise_speed{4.5, 9.5};
    Interval detection_distance{100.0, 1000.0};

    std::array<Interval, TalentVector::size> to_array() const;
    bool contains(const TalentVector& t) const;
};

inline constexpr std::array<const char*, MorphologyDesign::size> kDesignFieldNames{
    "length", "width", "motor_power", "battery_capacity", "propeller_diameter", "sensor_mass"};
inline constexpr std::array<const char*, TalentVector::size> kTalentFieldNames{
    "flight_range", "cruise_speed", "detection_distance"};

/// Baseline quadcopter used as the comparison fixture.
MorphologyDesign baseline_design();
TalentVector baseline_talents();
/// Co-designed anchor design and its reported talents.
MorphologyDesign reference_final_design();
TalentVector reference_final_talents();

/// Calibration coefficients of the analytical sizing model. Loaded from a
/// versioned JSON file (config/morphology_constants.json).
struct ModelConstants {
    int version = 0;

    double frame_base_kg = 0.0;
    double frame_per_planform_kg_m2 = 0.0;
    double motor_base_kg = 0.0;
    double motor_per_watt_kg = 0.0;
    double battery_specific_energy_wh_kg = 0.0;
    double propeller_per_inch_kg = 0.0;

    int rotor_count = 4;
    double air_density_kg_m3 = 0.0;
    double gravity_m_s2 = 0.0;
    double cruise_power_fraction = 0.0;
    double induced_power_divisor = 0.0;
    double drag_area_per_planform = 0.0;
    double max_solve_speed_m_s = 0.0;

    double usable_battery_fraction = 0.0;
    double drive_efficiency = 0.0;
    double avionics_power_w = 0.0;
    double sensor_power_w_per_kg = 0.0;

    double sensor_min_mass_kg = 0.0;
    double sensor_max_mass_kg = 0.0;
    double min_detection_m = 0.0;
    double max_detection_m = 0.0;
    double hill_exponent = 0.0;
    double hill_knee = 0.0;

    static ModelConstants load(const std::string& path);
    /// Path from $CODESIGN_CONSTANTS, falling back to the in-tree file.
    static std::string default_path();
    static ModelConstants load_default();
};

/// Analytical sizing model mapping a morphology to its talents.
///
/// Mass is an affine buildup of frame, motors, battery, propellers and
/// sensor. Cruise speed is where the power required for level flight
/// (momentum-theory induced power plus parasite drag on a planform-scaled
/// drag area) equals the cruise share of installed motor power, taken on the
/// high-speed branch of the power curve. Range is cruise speed times battery
/// endurance. Detection distance depends only on sensor mass through a Hill
/// curve pinned at both ends of the sensor box. Outputs are clamped into the
/// talent box.
///
/// All member functions are pure; the model can be shared across threads.
class MorphologyModel {
public:
    explicit MorphologyModel(ModelConstants constants, DesignBounds design_bounds = {}, TalentBounds talent_bounds = {});

    double total_mass(const MorphologyDesign& design) const;
    double cruise_speed(const MorphologyDesign& design) const;
    double flight_range(const MorphologyDesign& design) const;
    double detection_distance(double sensor_mass) const;
    double detection_distance(const MorphologyDesign& design) const { return detection_distance(design.sensor_mass); }
    TalentVector evaluate_talents(const MorphologyDesign& design) const;

    /// Level-flight power required at `speed` (W), exposed for diagnostics.
    double power_required(const MorphologyDesign& design, double speed) const;
    /// Unclamped power-balance speed (m/s); 0 when the design cannot cruise.
    double raw_cruise_speed(const MorphologyDesign& design) const;

    /// Throws BoundsError naming the first field outside the design box.
    void check_bounds(const MorphologyDesign& design) const;

    const ModelConstants& constants() const { return constants_; }
    const DesignBounds& design_bounds() const { return design_bounds_; }
    const TalentBounds& talent_bounds() const { return talent_bounds_; }

private:
    ModelConstants constants_;
    DesignBounds design_bounds_;
    TalentBounds talent_bounds_;
};

/// Process-wide count of evaluate_talents calls. Used by tests to show which
/// pipeline stages touch the morphology model.
std::uint64_t evaluation_count();

} // namespace codesign::morphology

#endif
