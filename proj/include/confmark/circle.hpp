#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "confmark/moebius.hpp"
#include "confmark/rational.hpp"

namespace confmark {

// Angle on R/Z, exact (reduced rational) or numeric with tolerance tag.
struct CirclePoint {
    bool exact = true;
    Rational r{0};
    double v = 0.0;
    double tol = kMembershipTol;

    CirclePoint() = default;
    CirclePoint(const Rational& q) : exact(true), r(mod1(q)), v(to_double(mod1(q))) {}
    CirclePoint(double x, double tolerance = kMembershipTol) : exact(false), tol(tolerance) {
        v = x - std::floor(x);
        if (v >= 1.0) v -= 1.0;
    }

    static CirclePoint from_lift(const Rational& q) { return CirclePoint(q); }

    double value() const { return exact ? to_double(r) : v; }
};

inline double circ_dist(double a, double b) {
    double d = std::abs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

inline bool same_point(const CirclePoint& a, const CirclePoint& b) {
    if (a.exact && b.exact) return a.r == b.r;
    double tol = std::max(a.exact ? 0.0 : a.tol, b.exact ? 0.0 : b.tol);
    return circ_dist(a.value(), b.value()) <= tol;
}

inline Complex to_unit_circle(double angle_turns) { return std::polar(1.0, 2 * M_PI * angle_turns); }

inline double to_angle_turns(Complex z) {
    double t = std::arg(z) / (2 * M_PI);
    t -= std::floor(t);
    if (t >= 1.0) t -= 1.0;
    return t;
}

// Closed counterclockwise arc on circle `circle`, stored in lifted coordinates:
// lo < hi <= lo + 1 (as doubles; exact endpoints kept when rational).
struct Arc {
    int circle = 0;
    bool exact = true;
    Rational lo_r{0}, hi_r{1};
    double lo = 0, hi = 1;

    Arc() = default;
    Arc(int circ, const Rational& l, const Rational& h) : circle(circ), exact(true), lo_r(l), hi_r(h) {
        require(h > l && h - l <= 1, "BadArc", "need lo < hi <= lo+1");
        lo = to_double(l);
        hi = to_double(h);
    }
    Arc(int circ, double l, double h) : circle(circ), exact(false), lo(l), hi(h) {
        require(h > l && h - l <= 1 + 1e-12, "BadArc", "need lo < hi <= lo+1");
    }

    double length() const { return hi - lo; }
    Rational length_r() const {
        require(exact, "ExactOnly", "length_r on numeric arc");
        return hi_r - lo_r;
    }

    // lift t (mod 1) into [lo, lo+1); returns lifted coordinate
    double lift(double t) const {
        double u = t - std::floor(t);
        double base = lo - std::floor(lo);
        double x = u - base;
        if (x < -1e-13) x += 1.0;
        return lo + x;
    }
    Rational lift(const Rational& t) const {
        Rational u = mod1(t);
        Rational base = mod1(lo_r);
        Rational x = u - base;
        if (x < 0) x += 1;
        return lo_r + x;
    }

    bool contains(double t, double tol = 1e-12) const {
        double x = lift(t);
        return x >= lo - tol && x <= hi + tol;
    }
    bool contains(const Rational& t) const {
        Rational x = lift(t);
        return x >= lo_r && x <= hi_r;
    }
};

} // namespace confmark
