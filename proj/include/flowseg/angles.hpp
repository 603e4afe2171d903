#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "flowseg/errors.hpp"

namespace flowseg {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double d) { return d * (kPi / 180.0); }
inline double rad_to_deg(double r) { return r * (180.0 / kPi); }

// Wrap into (-180, 180]; -180 maps to +180.
inline double wrap_degrees(double a) {
    double r = std::fmod(a, 360.0);
    if (r <= -180.0)
        r += 360.0;
    else if (r > 180.0)
        r -= 360.0;
    return r;
}

// Shorter arc between two directions, in [0, 180].
inline double angular_distance(double a, double b) {
    const double d = std::fabs(wrap_degrees(a) - wrap_degrees(b));
    return std::min(d, 360.0 - d);
}

// Direction of the summed unit vectors. Throws DegenerateMean when the
// resultant length drops below 1e-9 (perfectly opposed inputs).
inline double circular_mean(std::span<const double> degrees) {
    double sx = 0.0, sy = 0.0;
    for (double d : degrees) {
        sx += std::cos(deg_to_rad(d));
        sy += std::sin(deg_to_rad(d));
    }
    if (std::hypot(sx, sy) < 1e-9)
        throw DegenerateMean("circular mean undefined: resultant vector is (numerically) zero");
    return wrap_degrees(rad_to_deg(std::atan2(sy, sx)));
}

}  // namespace flowseg
