#ifndef TRACKGUIDE_CORRIDOR_HPP
#define TRACKGUIDE_CORRIDOR_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "trackguide/curve.hpp"

namespace trackguide {

/// Half-width of the drivable corridor as a piecewise-linear profile over the
/// reference curve's arc length.
struct CorridorProfile {
    std::vector<double> station_s;
    std::vector<double> half_width;

    double at(double s) const {
        if (station_s.empty()) {
            throw std::invalid_argument("CorridorProfile: empty profile");
        }
        if (s <= station_s.front()) return half_width.front();
        if (s >= station_s.back()) return half_width.back();
        const auto it = std::upper_bound(station_s.begin(), station_s.end(), s);
        const std::size_t i = static_cast<std::size_t>(it - station_s.begin()) - 1;
        const double span = station_s[i + 1] - station_s[i];
        if (span <= 0.0) return half_width[i];
        const double u = (s - station_s[i]) / span;
        return half_width[i] + u * (half_width[i + 1] - half_width[i]);
    }
};

/// Local planning frame: the corridor midline as a curve plus the corridor
/// half-width along it. Lattice lateral offsets are measured against this
/// midline (d = 0 is the corridor center).
struct LocalReference {
    Curve2D midline;
    CorridorProfile corridor;
};

}  // namespace trackguide

#endif  // TRACKGUIDE_CORRIDOR_HPP
