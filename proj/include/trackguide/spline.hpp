#ifndef TRACKGUIDE_SPLINE_HPP
#define TRACKGUIDE_SPLINE_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "trackguide/errors.hpp"

namespace trackguide {

/// Piecewise cubic over ascending knots. Each segment i covers [knot_i, knot_{i+1}]
/// and evaluates as a_i + b_i*u + c_i*u^2 + d_i*u^3 with local coordinate
/// u = t - knot_i.
///
/// fit_natural() produces an interpolating natural cubic spline (zero second
/// derivative at both ends, C2 at interior knots). from_hermite() builds a C1
/// piecewise cubic from prescribed values and first derivatives; it is used
/// where the underlying curve has genuine curvature jumps that a C2 fit would
/// smear and overshoot.
class Spline1D {
public:
    struct Coeffs {
        double a, b, c, d;
    };

    /// Interpolating natural cubic spline through (knots[i], values[i]).
    /// Knots must be strictly increasing, at least two of them.
    static Spline1D fit_natural(const std::vector<double>& knots,
                                const std::vector<double>& values) {
        validate_knots(knots, values);
        const std::size_t n = knots.size();
        Spline1D s;
        s.knots_ = knots;

        std::vector<double> h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) h[i] = knots[i + 1] - knots[i];

        // Second derivatives M_i ("moments"). Natural boundary: M_0 = M_{n-1} = 0.
        // Interior: h_{i-1} M_{i-1} + 2(h_{i-1}+h_i) M_i + h_i M_{i+1}
        //           = 6 [ (y_{i+1}-y_i)/h_i - (y_i-y_{i-1})/h_{i-1} ].
        std::vector<double> m(n, 0.0);
        if (n > 2) {
            const std::size_t k = n - 2;  // interior unknowns
            std::vector<double> diag(k), upper(k), rhs(k);
            for (std::size_t i = 0; i < k; ++i) {
                diag[i] = 2.0 * (h[i] + h[i + 1]);
                upper[i] = h[i + 1];
                rhs[i] = 6.0 * ((values[i + 2] - values[i + 1]) / h[i + 1] -
                                (values[i + 1] - values[i]) / h[i]);
            }
            // Thomas algorithm; sub-diagonal equals h[i].
            for (std::size_t i = 1; i < k; ++i) {
                const double w = h[i] / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for (std::size_t i = k - 1; i >= 1; --i) {
                m[i] = (rhs[i - 1] - upper[i - 1] * m[i + 1]) / diag[i - 1];
            }
        }

        s.a_.resize(n - 1);
        s.b_.resize(n - 1);
        s.c_.resize(n - 1);
        s.d_.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            s.a_[i] = values[i];
            s.b_[i] = (values[i + 1] - values[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
            s.c_[i] = m[i] / 2.0;
            s.d_[i] = (m[i + 1] - m[i]) / (6.0 * h[i]);
        }
        return s;
    }

    /// C1 piecewise cubic matching values and first derivatives at every knot.
    static Spline1D from_hermite(const std::vector<double>& knots,
                                 const std::vector<double>& values,
                                 const std::vector<double>& derivatives) {
        validate_knots(knots, values);
        if (derivatives.size() != knots.size()) {
            throw std::invalid_argument("Spline1D: derivatives size must match knots");
        }
        const std::size_t n = knots.size();
        Spline1D s;
        s.knots_ = knots;
        s.a_.resize(n - 1);
        s.b_.resize(n - 1);
        s.c_.resize(n - 1);
        s.d_.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double h = knots[i + 1] - knots[i];
            const double p0 = values[i], p1 = values[i + 1];
            const double m0 = derivatives[i], m1 = derivatives[i + 1];
            s.a_[i] = p0;
            s.b_[i] = m0;
            s.c_[i] = (3.0 * (p1 - p0) / h - 2.0 * m0 - m1) / h;
            s.d_[i] = (2.0 * (p0 - p1) / h + m0 + m1) / (h * h);
        }
        return s;
    }

    /// Evaluate the spline or one of its first two derivatives.
    /// order: 0 = value, 1 = first derivative, 2 = second derivative.
    /// Throws OutOfDomainError if t lies outside [first knot, last knot]
    /// (beyond a small roundoff allowance); no extrapolation.
    double eval(double t, int order = 0) const {
        if (order < 0 || order > 2) {
            throw std::invalid_argument("Spline1D::eval: order must be 0, 1, or 2");
        }
        t = check_domain(t);
        const std::size_t i = locate(t);
        const double u = t - knots_[i];
        switch (order) {
            case 0: return a_[i] + u * (b_[i] + u * (c_[i] + u * d_[i]));
            case 1: return b_[i] + u * (2.0 * c_[i] + u * 3.0 * d_[i]);
            default: return 2.0 * c_[i] + 6.0 * d_[i] * u;
        }
    }

    const std::vector<double>& knots() const { return knots_; }
    double domain_min() const { return knots_.front(); }
    double domain_max() const { return knots_.back(); }
    std::size_t segment_count() const { return a_.size(); }
    Coeffs segment(std::size_t i) const { return {a_[i], b_[i], c_[i], d_[i]}; }

    /// Evaluate segment i's polynomial at global parameter t, regardless of
    /// whether t lies inside that segment. Lets tests probe both sides of a knot.
    double eval_segment(std::size_t i, double t, int order = 0) const {
        const double u = t - knots_[i];
        switch (order) {
            case 0: return a_[i] + u * (b_[i] + u * (c_[i] + u * d_[i]));
            case 1: return b_[i] + u * (2.0 * c_[i] + u * 3.0 * d_[i]);
            case 2: return 2.0 * c_[i] + 6.0 * d_[i] * u;
            default: throw std::invalid_argument("Spline1D::eval_segment: bad order");
        }
    }

private:
    static constexpr double kDomainSlack = 1e-9;

    static void validate_knots(const std::vector<double>& knots,
                               const std::vector<double>& values) {
        if (knots.size() < 2) {
            throw std::invalid_argument("Spline1D: need at least 2 knots");
        }
        if (values.size() != knots.size()) {
            throw std::invalid_argument("Spline1D: values size must match knots");
        }
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            if (!(knots[i + 1] > knots[i])) {
                throw std::invalid_argument("Spline1D: knots must be strictly increasing");
            }
        }
    }

    double check_domain(double t) const {
        const double lo = knots_.front(), hi = knots_.back();
        if (t < lo) {
            if (t >= lo - kDomainSlack) return lo;
            throw OutOfDomainError("Spline1D: parameter " + std::to_string(t) +
                                   " below domain start " + std::to_string(lo));
        }
        if (t > hi) {
            if (t <= hi + kDomainSlack) return hi;
            throw OutOfDomainError("Spline1D: parameter " + std::to_string(t) +
                                   " above domain end " + std::to_string(hi));
        }
        return t;
    }

    /// Index of the segment containing t (last segment for t == last knot).
    std::size_t locate(double t) const {
        std::size_t lo = 0, hi = knots_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (knots_[mid] <= t) lo = mid; else hi = mid;
        }
        return lo;
    }

    std::vector<double> knots_;
    std::vector<double> a_, b_, c_, d_;
};

}  // namespace trackguide

#endif  // TRACKGUIDE_SPLINE_HPP
