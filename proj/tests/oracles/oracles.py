"""Independent reference values frozen into the C++ tests.

Run: python3 tests/oracles/oracles.py
Uses numpy/scipy only; shares no code with the library.
"""
import json
import math
import os

import numpy as np
from scipy.optimize import brentq, minimize_scalar

HERE = os.path.dirname(os.path.abspath(__file__))
CONSTANTS = json.load(open(os.path.join(HERE, "..", "..", "config", "morphology_constants.json")))


def morphology():
    m, p, e, s = (CONSTANTS[k] for k in ("mass", "propulsion", "energy", "sensor"))

    def mass(d):
        L, W, P, E, D, ms = d
        return (m["frame_base_kg"] + m["frame_per_planform_kg_m2"] * L * W + m["motor_base_kg"]
                + m["motor_per_watt_kg"] * P + E / m["battery_specific_energy_wh_kg"]
                + m["propeller_per_inch_kg"] * D + ms)

    def power(d, v):
        L, W, P, E, D, ms = d
        T = mass(d) * p["gravity_m_s2"]
        A = p["rotor_count"] * math.pi * (0.5 * D * 0.0254) ** 2
        vh = math.sqrt(T / (2 * p["air_density_kg_m3"] * A))
        # induced velocity ratio from w^4 + mu^2 w^2 = 1, solved numerically
        mu = v / vh
        w = brentq(lambda w: w ** 4 + mu * mu * w * w - 1.0, 0.0, 1.0)
        induced = T * vh * w / p["induced_power_divisor"]
        parasite = 0.5 * p["air_density_kg_m3"] * p["drag_area_per_planform"] * L * W * v ** 3
        return induced + parasite

    def raw_speed(d):
        avail = p["cruise_power_fraction"] * d[2]
        vmin = minimize_scalar(lambda v: power(d, v), bounds=(0, p["max_solve_speed_m_s"]), method="bounded",
                               options={"xatol": 1e-12}).x
        if power(d, vmin) > avail:
            return 0.0
        if power(d, p["max_solve_speed_m_s"]) <= avail:
            return p["max_solve_speed_m_s"]
        return brentq(lambda v: power(d, v) - avail, vmin, p["max_solve_speed_m_s"], xtol=1e-14)

    def speed(d):
        return min(max(raw_speed(d), 4.5), 9.5)

    def rng(d):
        L, W, P, E, D, ms = d
        elec = (p["cruise_power_fraction"] * P / e["drive_efficiency"] + e["avionics_power_w"]
                + e["sensor_power_w_per_kg"] * ms)
        r = speed(d) * E * 3600 * e["usable_battery_fraction"] / elec / 1000
        return min(max(r, 8.9), 32.6)

    def det(ms):
        u = (ms - s["min_mass_kg"]) / (s["max_mass_kg"] - s["min_mass_kg"])
        q = s["hill_exponent"]
        share = u ** q / (u ** q + s["hill_knee"] * (1 - u) ** q)
        return s["min_detection_m"] + (s["max_detection_m"] - s["min_detection_m"]) * share

    base = (0.325, 0.325, 175, 55.6, 9.7, 0.24)
    final = (0.315, 0.315, 100, 55.6, 12, 0.15)
    out = {
        "baseline_mass": mass(base),
        "baseline_raw_speed": raw_speed(base),
        "baseline_range": rng(base),
        "baseline_detection": det(0.24),
        "final_raw_speed": raw_speed(final),
        "final_range": rng(final),
        "final_detection": det(0.15),
        "detection_0.4": det(0.4),
        "power_base_at_5": power(base, 5.0),
    }
    return out


def gp_fixture():
    X = np.array([[0.0, 0.0], [1.0, 0.5], [0.3, 1.2]])
    y = np.array([1.0, -0.5, 2.0])
    q = np.array([0.5, 0.5])

    def k(a, b):
        return math.exp(-0.5 * float(np.sum((a - b) ** 2)))

    K = np.array([[k(a, b) for b in X] for a in X])
    kq = np.array([k(a, q) for a in X])
    mean = kq @ np.linalg.solve(K, y)
    var = 1.0 - kq @ np.linalg.solve(K, kq)
    return {"mean": mean, "variance": var}


def alpha():
    return {
        "a10_b05_t0": 1 / (1 + math.exp(5)),
        "a566_b0788_t1": 1 / (1 + math.exp(-5.66 * (1 - 0.788))),
    }


if __name__ == "__main__":
    for name, values in (("morphology", morphology()), ("gp", gp_fixture()), ("alpha", alpha())):
        for k, v in values.items():
            print(f"{name}.{k} = {v!r}")
