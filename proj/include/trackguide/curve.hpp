#ifndef TRACKGUIDE_CURVE_HPP
#define TRACKGUIDE_CURVE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "trackguide/errors.hpp"
#include "trackguide/geometry.hpp"
#include "trackguide/spline.hpp"

namespace trackguide {

/// Curve-relative coordinates: arc length s along the reference and signed
/// lateral offset d, positive to the LEFT of the direction of travel.
struct FrenetPoint {
    double s = 0.0;
    double d = 0.0;
};

/// Arc-length-parameterized planar curve backed by two cubic splines x(t), y(t)
/// over a shared parameter, plus a monotone t -> s lookup table built by
/// composite Simpson integration of sqrt(x'^2 + y'^2).
///
/// A curve whose first and last points coincide is treated as closed: arc
/// queries wrap modulo total_length and projections identify the seam.
class Curve2D {
public:
    /// Interpolate the given points with natural cubic splines on the x and y
    /// coordinates against a cumulative-chord-length parameter.
    static Curve2D fit(const std::vector<Vec2>& points, int samples_per_segment = 16) {
        validate_points(points);
        const std::size_t n = points.size();
        std::vector<double> t(n), xs(n), ys(n);
        t[0] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = points[i].x;
            ys[i] = points[i].y;
            if (i > 0) t[i] = t[i - 1] + distance(points[i - 1], points[i]);
        }
        Curve2D c;
        c.x_ = Spline1D::fit_natural(t, xs);
        c.y_ = Spline1D::fit_natural(t, ys);
        c.finish_build(points.front(), points.back(), samples_per_segment);
        return c;
    }

    /// Build from prescribed positions and parameter-derivatives at each knot
    /// (C1 Hermite segments). Used for analytic geometry whose curvature is
    /// discontinuous, where a global C2 fit would ring.
    static Curve2D from_hermite(const std::vector<double>& knots,
                                const std::vector<Vec2>& points,
                                const std::vector<Vec2>& derivatives,
                                int samples_per_segment = 16) {
        validate_points(points);
        if (knots.size() != points.size() || derivatives.size() != points.size()) {
            throw std::invalid_argument("Curve2D: knots/points/derivatives size mismatch");
        }
        const std::size_t n = points.size();
        std::vector<double> xs(n), ys(n), dxs(n), dys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = points[i].x;
            ys[i] = points[i].y;
            dxs[i] = derivatives[i].x;
            dys[i] = derivatives[i].y;
        }
        Curve2D c;
        c.x_ = Spline1D::from_hermite(knots, xs, dxs);
        c.y_ = Spline1D::from_hermite(knots, ys, dys);
        c.finish_build(points.front(), points.back(), samples_per_segment);
        return c;
    }

    double total_length() const { return length_; }
    bool is_closed() const { return closed_; }
    const Spline1D& x_spline() const { return x_; }
    const Spline1D& y_spline() const { return y_; }

    /// Arc length at each spline knot (exact table entries).
    std::vector<double> knot_arc_lengths() const {
        std::vector<double> out;
        out.reserve(x_.knots().size());
        for (std::size_t i = 0; i < x_.knots().size(); ++i) {
            out.push_back(table_s_[i * static_cast<std::size_t>(samples_per_segment_)]);
        }
        return out;
    }

    Vec2 position_at(double s) const {
        const double t = param_from_arc(s);
        return {x_.eval(t, 0), y_.eval(t, 0)};
    }

    /// Unit tangent at arc length s.
    Vec2 tangent_at(double s) const {
        const double t = param_from_arc(s);
        return Vec2{x_.eval(t, 1), y_.eval(t, 1)}.normalized();
    }

    /// Heading of the tangent, atan2(y', x'), in (-pi, pi].
    double yaw_at(double s) const {
        const double t = param_from_arc(s);
        return wrap_angle(std::atan2(y_.eval(t, 1), x_.eval(t, 1)));
    }

    /// Signed curvature (positive = turning left).
    double curvature_at(double s) const {
        const double t = param_from_arc(s);
        const double x1 = x_.eval(t, 1), y1 = y_.eval(t, 1);
        const double x2 = x_.eval(t, 2), y2 = y_.eval(t, 2);
        const double speed2 = x1 * x1 + y1 * y1;
        return (x1 * y2 - y1 * x2) / (speed2 * std::sqrt(speed2));
    }

    /// Base point at arc length p.s displaced by p.d along the left normal.
    Vec2 frenet_to_cartesian(const FrenetPoint& p) const {
        const double t = param_from_arc(p.s);
        const Vec2 base{x_.eval(t, 0), y_.eval(t, 0)};
        const Vec2 n = Vec2{x_.eval(t, 1), y_.eval(t, 1)}.normalized().left_normal();
        return base + n * p.d;
    }

    /// Project q onto the curve: returns (s*, d) minimizing distance.
    /// Throws AmbiguousProjectionError when several equidistant minima exist
    /// and OutOfDomainError when q lies beyond an open curve's endpoint
    /// normal fans.
    FrenetPoint cartesian_to_frenet(const Vec2& q) const {
        return project_impl(q, /*clamp=*/false);
    }

    /// Projection that clamps to the endpoints instead of rejecting points
    /// beyond them; the lateral offset is then measured in the endpoint's
    /// normal frame. Never throws for closed curves.
    FrenetPoint project_clamped(const Vec2& q) const {
        return project_impl(q, /*clamp=*/true);
    }

private:
    static constexpr double kDomainSlack = 1e-9;
    static constexpr double kAmbiguityTol = 1e-6;     // meters
    static constexpr double kNewtonTol = 1e-9;        // on the parameter
    static constexpr int kMaxNewtonIters = 20;

    static void validate_points(const std::vector<Vec2>& points) {
        if (points.size() < 2) {
            throw std::invalid_argument("Curve2D: need at least 2 points");
        }
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            if (distance(points[i], points[i + 1]) <= 1e-12) {
                throw std::invalid_argument(
                    "Curve2D: consecutive points " + std::to_string(i) + " and " +
                    std::to_string(i + 1) + " coincide");
            }
        }
    }

    double speed_at_param(double t) const {
        return std::hypot(x_.eval(t, 1), y_.eval(t, 1));
    }

    /// Simpson integral of the speed over [t0, t1] (single panel).
    double simpson_speed(double t0, double t1) const {
        const double tm = 0.5 * (t0 + t1);
        return (t1 - t0) / 6.0 *
               (speed_at_param(t0) + 4.0 * speed_at_param(tm) + speed_at_param(t1));
    }

    void finish_build(const Vec2& first, const Vec2& last, int samples_per_segment) {
        if (samples_per_segment < 1) {
            throw std::invalid_argument("Curve2D: samples_per_segment must be positive");
        }
        samples_per_segment_ = samples_per_segment;
        const auto& knots = x_.knots();
        table_t_.clear();
        table_s_.clear();
        table_p_.clear();
        table_t_.push_back(knots.front());
        table_s_.push_back(0.0);
        table_p_.push_back({x_.eval(knots.front(), 0), y_.eval(knots.front(), 0)});
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            const double h = (knots[i + 1] - knots[i]) / samples_per_segment;
            for (int k = 0; k < samples_per_segment; ++k) {
                const double ta = knots[i] + k * h;
                const double tb = (k + 1 == samples_per_segment) ? knots[i + 1] : ta + h;
                s += simpson_speed(ta, tb);
                table_t_.push_back(tb);
                table_s_.push_back(s);
                table_p_.push_back({x_.eval(tb, 0), y_.eval(tb, 0)});
            }
        }
        length_ = s;
        if (!(length_ > 0.0)) {
            throw std::invalid_argument("Curve2D: degenerate curve with zero length");
        }
        closed_ = distance(first, last) < 1e-9;
    }

    double canonical_arc(double s) const {
        if (closed_) {
            s = std::fmod(s, length_);
            if (s < 0.0) s += length_;
            return s;
        }
        if (s < 0.0) {
            if (s >= -kDomainSlack) return 0.0;
            throw OutOfDomainError("Curve2D: arc length " + std::to_string(s) + " < 0");
        }
        if (s > length_) {
            if (s <= length_ + kDomainSlack) return length_;
            throw OutOfDomainError("Curve2D: arc length " + std::to_string(s) +
                                   " beyond total length " + std::to_string(length_));
        }
        return s;
    }

    /// Arc length at parameter t, using the table anchor plus a partial
    /// Simpson panel. Consistent with param_from_arc.
    double arc_at_param(double t) const {
        const auto it = std::upper_bound(table_t_.begin(), table_t_.end(), t);
        std::size_t i = static_cast<std::size_t>(std::distance(table_t_.begin(), it));
        if (i > 0) --i;
        if (i >= table_t_.size() - 1) i = table_t_.size() - 2;
        return table_s_[i] + simpson_speed(table_t_[i], t);
    }

    /// Invert the arc table: binary search bracket, linear init, one Newton step.
    double param_from_arc(double s) const {
        s = canonical_arc(s);
        const auto it = std::upper_bound(table_s_.begin(), table_s_.end(), s);
        std::size_t i = static_cast<std::size_t>(std::distance(table_s_.begin(), it));
        if (i > 0) --i;
        if (i >= table_s_.size() - 1) i = table_s_.size() - 2;
        const double s0 = table_s_[i], s1 = table_s_[i + 1];
        const double t0 = table_t_[i], t1 = table_t_[i + 1];
        double t = (s1 > s0) ? t0 + (s - s0) / (s1 - s0) * (t1 - t0) : t0;
        const double v = speed_at_param(t);
        if (v > 0.0) {
            const double residual = table_s_[i] + simpson_speed(t0, t) - s;
            t -= residual / v;
        }
        return std::clamp(t, x_.knots().front(), x_.knots().back());
    }

    struct Candidate {
        double t;
        double dist;
        bool boundary;  // minimum sits on an open endpoint, not a stationary point
    };

    double param_span() const { return x_.knots().back() - x_.knots().front(); }

    /// Wrap a parameter into the domain for closed curves; clamp for open ones.
    double constrain_param(double t) const {
        const double lo = x_.knots().front(), hi = x_.knots().back();
        if (closed_) {
            const double span = hi - lo;
            t = std::fmod(t - lo, span);
            if (t < 0.0) t += span;
            return lo + t;
        }
        return std::clamp(t, lo, hi);
    }

    Candidate refine_candidate(const Vec2& q, double t_init) const {
        const double lo = x_.knots().front(), hi = x_.knots().back();
        double t = t_init;
        for (int iter = 0; iter < kMaxNewtonIters; ++iter) {
            const Vec2 p{x_.eval(t, 0), y_.eval(t, 0)};
            const Vec2 d1{x_.eval(t, 1), y_.eval(t, 1)};
            const Vec2 d2{x_.eval(t, 2), y_.eval(t, 2)};
            const Vec2 r = p - q;
            const double g = r.dot(d1);
            const double gp = d1.squared_norm() + r.dot(d2);
            if (gp <= 0.0) break;  // flat or concave distance profile; keep t
            const double step = g / gp;
            double t_next = t - step;
            if (closed_) {
                t_next = constrain_param(t_next);
                // A wrap can teleport the iterate; limit to one table step.
            } else {
                t_next = std::clamp(t_next, lo, hi);
            }
            const bool converged = std::abs(t_next - t) <= kNewtonTol;
            t = t_next;
            if (converged) break;
            if (!closed_ && (t == lo || t == hi)) {
                // Pinned at an endpoint; check whether it is a true boundary minimum.
                const Vec2 pe{x_.eval(t, 0), y_.eval(t, 0)};
                const Vec2 de{x_.eval(t, 1), y_.eval(t, 1)};
                const double ge = (pe - q).dot(de);
                if ((t == lo && ge > 0.0) || (t == hi && ge < 0.0)) {
                    return {t, distance(pe, q), true};
                }
            }
        }
        const Vec2 p{x_.eval(t, 0), y_.eval(t, 0)};
        const Vec2 d1{x_.eval(t, 1), y_.eval(t, 1)};
        const double g = (p - q).dot(d1);
        const bool boundary =
            !closed_ && ((t <= lo && g > 0.0) || (t >= hi && g < 0.0));
        return {t, distance(p, q), boundary};
    }

    FrenetPoint project_impl(const Vec2& q, bool clamp) const {
        // Coarse scan over the cached table points.
        const std::size_t n = table_p_.size();
        std::vector<double> dist2(n);
        for (std::size_t i = 0; i < n; ++i) dist2[i] = (table_p_[i] - q).squared_norm();

        // Local minima of the scan. For closed curves the first and last table
        // entries are the same physical point; treat the index range cyclically.
        std::vector<std::size_t> minima;
        const std::size_t last = n - 1;
        auto prev_of = [&](std::size_t i) -> std::size_t {
            if (i == 0) return closed_ ? last - 1 : 0;
            return i - 1;
        };
        auto next_of = [&](std::size_t i) -> std::size_t {
            if (i == last) return closed_ ? 1 : last;
            return i + 1;
        };
        const std::size_t scan_end = closed_ ? last : n;  // skip duplicate seam entry
        for (std::size_t i = 0; i < scan_end; ++i) {
            if (dist2[i] <= dist2[prev_of(i)] && dist2[i] <= dist2[next_of(i)]) {
                minima.push_back(i);
            }
        }
        if (minima.empty()) minima.push_back(static_cast<std::size_t>(
            std::min_element(dist2.begin(), dist2.end()) - dist2.begin()));
        std::sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) {
            return dist2[a] < dist2[b];
        });
        if (minima.size() > 8) minima.resize(8);

        std::vector<Candidate> cands;
        for (const std::size_t i : minima) {
            Candidate c = refine_candidate(q, table_t_[i]);
            bool duplicate = false;
            for (const Candidate& o : cands) {
                double dt = std::abs(c.t - o.t);
                if (closed_) dt = std::min(dt, param_span() - dt);
                if (dt < 1e-6) { duplicate = true; break; }
            }
            if (!duplicate) cands.push_back(c);
        }
        std::sort(cands.begin(), cands.end(),
                  [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });
        const Candidate& best = cands.front();

        if (cands.size() > 1 && cands[1].dist - best.dist < kAmbiguityTol) {
            throw AmbiguousProjectionError(
                "Curve2D: point projects onto multiple equidistant curve locations");
        }

        if (best.boundary && !clamp) {
            // Beyond the endpoint normal fans (allow roundoff-sized overhang).
            const Vec2 p{x_.eval(best.t, 0), y_.eval(best.t, 0)};
            const Vec2 tu = Vec2{x_.eval(best.t, 1), y_.eval(best.t, 1)}.normalized();
            if (std::abs((q - p).dot(tu)) > 1e-7) {
                throw OutOfDomainError(
                    "Curve2D: point lies beyond the curve's endpoint normal fans");
            }
        }

        const Vec2 p{x_.eval(best.t, 0), y_.eval(best.t, 0)};
        const Vec2 tu = Vec2{x_.eval(best.t, 1), y_.eval(best.t, 1)}.normalized();
        double s = arc_at_param(best.t);
        if (closed_) {
            s = std::fmod(s, length_);
            if (s < 0.0) s += length_;
        } else {
            s = std::clamp(s, 0.0, length_);
        }
        return {s, tu.cross(q - p)};
    }

    Spline1D x_, y_;
    std::vector<double> table_t_, table_s_;
    std::vector<Vec2> table_p_;
    double length_ = 0.0;
    bool closed_ = false;
    int samples_per_segment_ = 16;
};

}  // namespace trackguide

#endif  // TRACKGUIDE_CURVE_HPP
