#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "confmark/error.hpp"

namespace confmark {

using Complex = std::complex<double>;

inline constexpr double kParabolicTol = 1e-9;
inline constexpr double kMembershipTol = 1e-10;

// A point on the Riemann sphere: finite value or the single point at infinity.
struct ComplexPoint {
    Complex z{0.0, 0.0};
    bool infinite = false;

    ComplexPoint() = default;
    ComplexPoint(Complex v) : z(v) {}
    ComplexPoint(double re, double im) : z(re, im) {}

    static ComplexPoint infinity() {
        ComplexPoint p;
        p.infinite = true;
        return p;
    }

    bool is_finite() const { return !infinite; }
};

inline double sphere_dist(const ComplexPoint& a, const ComplexPoint& b) {
    // chordal metric
    auto lift = [](const ComplexPoint& p, double out[3]) {
        if (p.infinite) {
            out[0] = out[1] = 0;
            out[2] = 1;
            return;
        }
        double n = std::norm(p.z);
        out[0] = 2 * p.z.real() / (1 + n);
        out[1] = 2 * p.z.imag() / (1 + n);
        out[2] = (n - 1) / (n + 1);
    };
    double u[3], v[3];
    lift(a, u);
    lift(b, v);
    double s = 0;
    for (int i = 0; i < 3; ++i) s += (u[i] - v[i]) * (u[i] - v[i]);
    return std::sqrt(s);
}

enum class MoebiusClass { Identity, Elliptic, Parabolic, Hyperbolic };

inline const char* to_string(MoebiusClass c) {
    switch (c) {
        case MoebiusClass::Identity: return "identity";
        case MoebiusClass::Elliptic: return "elliptic";
        case MoebiusClass::Parabolic: return "parabolic";
        case MoebiusClass::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

// Normalized (det = 1) 2x2 complex matrix acting on the Riemann sphere.
// The pair +/-(a,b,c,d) represents the same map.
struct MoebiusMap {
    Complex a{1}, b{0}, c{0}, d{1};

    MoebiusMap() = default;

    MoebiusMap(Complex a_, Complex b_, Complex c_, Complex d_) : a(a_), b(b_), c(c_), d(d_) {
        normalize();
    }

    static MoebiusMap identity() { return MoebiusMap(); }

    void normalize() {
        Complex det = a * d - b * c;
        require(std::abs(det) > 1e-300, "SingularMatrix", "ad - bc = 0");
        Complex s = std::sqrt(det);
        a /= s;
        b /= s;
        c /= s;
        d /= s;
    }

    Complex trace() const { return a + d; }

    ComplexPoint operator()(const ComplexPoint& p) const {
        if (p.infinite) {
            if (std::abs(c) < 1e-300) return ComplexPoint::infinity();
            return ComplexPoint(a / c);
        }
        Complex denom = c * p.z + d;
        if (std::abs(denom) < 1e-300) return ComplexPoint::infinity();
        return ComplexPoint((a * p.z + b) / denom);
    }

    Complex operator()(Complex z) const {
        Complex denom = c * z + d;
        return (a * z + b) / denom;
    }

    // d/dz of the map at a finite point.
    Complex deriv(Complex z) const {
        Complex denom = c * z + d;
        return Complex(1) / (denom * denom);
    }

    MoebiusMap inverse() const { return MoebiusMap(d, -b, -c, a); }

    friend MoebiusMap operator*(const MoebiusMap& m1, const MoebiusMap& m2) {
        return MoebiusMap(m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
                          m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d);
    }

    bool same_map(const MoebiusMap& o, double tol = 1e-12) const {
        auto close = [tol](Complex x, Complex y) { return std::abs(x - y) <= tol; };
        bool plus = close(a, o.a) && close(b, o.b) && close(c, o.c) && close(d, o.d);
        bool minus = close(a, -o.a) && close(b, -o.b) && close(c, -o.c) && close(d, -o.d);
        return plus || minus;
    }

    bool is_identity(double tol = 1e-12) const { return same_map(identity(), tol); }
};

inline MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) { return m1 * m2; }

inline MoebiusMap pow(const MoebiusMap& m, long k) {
    MoebiusMap base = k >= 0 ? m : m.inverse();
    long n = k >= 0 ? k : -k;
    MoebiusMap out = MoebiusMap::identity();
    while (n > 0) {
        if (n & 1) out = out * base;
        base = base * base;
        n >>= 1;
    }
    return out;
}

inline bool preserves_unit_disk(const MoebiusMap& m, double tol = 1e-8) {
    // check |m(z)| = 1 on a few circle points and m(0) inside
    for (int k = 0; k < 8; ++k) {
        double t = 2 * M_PI * k / 8.0;
        ComplexPoint im = m(ComplexPoint(std::cos(t), std::sin(t)));
        if (im.infinite || std::abs(std::abs(im.z) - 1.0) > tol) return false;
    }
    ComplexPoint c0 = m(ComplexPoint(0, 0));
    return !c0.infinite && std::abs(c0.z) < 1 + tol;
}

// Trichotomy for disk automorphisms via |trace| of the det-1 normalization.
inline MoebiusClass classify(const MoebiusMap& m) {
    if (m.is_identity(1e-12)) return MoebiusClass::Identity;
    require(preserves_unit_disk(m), "NotDiskAutomorphism", "map does not preserve the unit disk");
    double t = std::abs(m.trace());
    if (std::abs(t - 2.0) < kParabolicTol) return MoebiusClass::Parabolic;
    return t < 2.0 ? MoebiusClass::Elliptic : MoebiusClass::Hyperbolic;
}

// Same trichotomy without the disk check (used for arbitrary Moebius maps whose
// trace is real up to sign, e.g. conjugates of Fuchsian elements).
inline MoebiusClass classify_by_trace(const MoebiusMap& m) {
    if (m.is_identity(1e-12)) return MoebiusClass::Identity;
    double t = std::abs(m.trace());
    if (std::abs(t - 2.0) < kParabolicTol) return MoebiusClass::Parabolic;
    return t < 2.0 ? MoebiusClass::Elliptic : MoebiusClass::Hyperbolic;
}

struct FixedPoint {
    ComplexPoint point;
    Complex multiplier;
    bool double_point = false; // parabolic: one fixed point of multiplicity two
};

inline std::vector<FixedPoint> fixed_points(const MoebiusMap& m) {
    require(!m.is_identity(), "IdentityMap", "identity fixes everything");
    std::vector<FixedPoint> out;
    if (std::abs(m.c) < 1e-14) {
        // infinity is fixed; the other root solves (a-d) z + b = 0
        FixedPoint inf;
        inf.point = ComplexPoint::infinity();
        inf.multiplier = m.a / m.d; // derivative at infinity in 1/z chart
        if (std::abs(m.a - m.d) < 1e-14) {
            inf.double_point = true; // translation
            inf.multiplier = Complex(1);
            out.push_back(inf);
            return out;
        }
        out.push_back(inf);
        Complex z = m.b / (m.d - m.a);
        out.push_back({ComplexPoint(z), m.deriv(z), false});
        return out;
    }
    // c z^2 + (d - a) z - b = 0
    Complex A = m.c, B = m.d - m.a, C = -m.b;
    Complex disc = B * B - 4.0 * A * C; // = tr^2 - 4 for det 1
    Complex sq = std::sqrt(disc);
    if (std::abs(sq) < 1e-9) {
        Complex z = -B / (2.0 * A);
        out.push_back({ComplexPoint(z), Complex(1), true});
        return out;
    }
    for (Complex s : {sq, -sq}) {
        Complex z = (-B + s) / (2.0 * A);
        out.push_back({ComplexPoint(z), m.deriv(z), false});
    }
    return out;
}

// ---------------------------------------------------------------------------
// standard disk-model constructions

// Cayley map: upper half plane -> unit disk, i -> 0, 0 -> -1, infinity -> 1.
inline MoebiusMap cayley_h_to_d() { return MoebiusMap(Complex(1), Complex(0, -1), Complex(1), Complex(0, 1)); }

// Disk automorphism obtained by conjugating z -> lambda z (half-plane) into the disk.
inline MoebiusMap from_halfplane(const MoebiusMap& h) {
    MoebiusMap cay = cayley_h_to_d();
    return cay * h * cay.inverse();
}

inline MoebiusMap disk_rotation(double angle) {
    Complex h = std::polar(1.0, angle / 2.0);
    return MoebiusMap(h, 0, 0, std::conj(h));
}

// The hyperbolic geodesic in the disk with ideal endpoints at angles x, y
// (turns in [0,1)); realized as the arc of the circle orthogonal to the unit circle.
struct Geodesic {
    double x = 0, y = 0; // angles in turns

    Geodesic(double x_, double y_) : x(x_), y(y_) {
        require(std::abs(std::remainder(x_ - y_, 1.0)) > 1e-14, "DegenerateGeodesic",
                "equal endpoints");
    }

    Complex endpoint1() const { return std::polar(1.0, 2 * M_PI * x); }
    Complex endpoint2() const { return std::polar(1.0, 2 * M_PI * y); }
};

// Points along the geodesic, endpoints included.  Uses the hyperbolic-line
// parametrization: the geodesic from p to q is the image of the diameter
// (-1,1) under a disk automorphism.
inline std::vector<Complex> geodesic_points(const Geodesic& g, int k) {
    require(k >= 2, "BadSampleCount", "need at least 2 samples");
    Complex p = g.endpoint1(), q = g.endpoint2();
    // automorphism sending -1 -> p, 1 -> q, 0 -> hyperbolic midpoint:
    // m(z) = (mu + z nu)/(conj(nu) z + conj(mu)) with suitable mu, nu.
    // Construct via: rotate so p,q symmetric about real axis, then map back.
    Complex mid = (p + q) / std::abs(p + q); // circle point between p and q
    if (std::abs(p + q) < 1e-12) {
        // diameter case: p = -q
        std::vector<Complex> pts(k);
        for (int i = 0; i < k; ++i) {
            double t = double(i) / (k - 1);
            pts[i] = p + (q - p) * t;
        }
        return pts;
    }
    // rotate mid to 1: then p = conj(q'), q' = e^{i s}
    Complex rot = Complex(1) / mid;
    Complex q1 = q * rot; // e^{i s}
    double s = std::arg(q1);
    // geodesic between e^{-is}, e^{is}: circle centered 1/cos(s) radius |tan(s)|
    double cs = std::cos(s);
    std::vector<Complex> pts(k);
    double cx = 1.0 / cs;
    double r = std::abs(std::tan(s));
    // arc from angle (pi - ...) param: points cx + r e^{i phi}, phi in [pi - |s'|, pi + |s'|]
    // endpoints: e^{±is} = cx + r e^{i phi0}: solve phi0
    double phi0 = std::arg(Complex(std::cos(s), std::sin(s)) - cx);
    double phi1 = -phi0;
    for (int i = 0; i < k; ++i) {
        double t = double(i) / (k - 1);
        double phi = phi0 + (phi1 - phi0) * t;
        Complex z = cx + r * std::polar(1.0, phi);
        pts[i] = z / rot;
    }
    // exact endpoints
    pts.front() = q;
    pts.back() = p;
    return pts;
}

// ---------------------------------------------------------------------------
// Parabolic quadratic Blaschke product B(z) = (3 z^2 + 1)/(z^2 + 3).
// B = m o sqr with m(u) = (3u + 1)/(u + 3): this factorization gives exact
// inverse branches on the circle.
struct BlaschkeModel {
    Complex operator()(Complex z) const {
        Complex z2 = z * z;
        return (3.0 * z2 + 1.0) / (z2 + 3.0);
    }

    Complex deriv(Complex z) const {
        Complex z2 = z * z;
        Complex denom = (z2 + 3.0) * (z2 + 3.0);
        return 16.0 * z / denom;
    }

    static MoebiusMap outer_moebius() { return MoebiusMap(3, 1, 1, 3); }
};

inline BlaschkeModel blaschke_parabolic() {
    BlaschkeModel B;
    require(std::abs(B(Complex(1, 0)) - Complex(1, 0)) < 1e-15, "ModelInvariant", "B(1) != 1");
    require(std::abs(B.deriv(Complex(1, 0)) - Complex(1, 0)) < 1e-15, "ModelInvariant",
            "B'(1) != 1");
    require(std::abs(B.deriv(Complex(0, 0))) < 1e-15, "ModelInvariant", "B'(0) != 0");
    return B;
}

} // namespace confmark
