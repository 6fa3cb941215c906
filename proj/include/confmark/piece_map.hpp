#pragma once

#include <vector>

#include "confmark/circle.hpp"

namespace confmark {

// Angle map of the parabolic Blaschke product and its inverse branches.
// B = m o sqr with m(u) = (3u+1)/(u+3), so preimages are exact square roots
// of a Moebius preimage.
namespace blaschke_angle {

inline double forward(double theta) {
    BlaschkeModel B;
    return to_angle_turns(B(to_unit_circle(theta)));
}

inline double deriv(double theta) {
    BlaschkeModel B;
    return std::abs(B.deriv(to_unit_circle(theta)));
}

// branch 0: result in [0, 1/2); branch 1: result in [1/2, 1)
inline double inverse(double theta, int branch) {
    Complex w = to_unit_circle(theta);
    Complex u = (3.0 * w - 1.0) / (3.0 - w);
    double a = to_angle_turns(u); // in [0,1)
    double half = a / 2.0;
    return branch == 0 ? half : half + 0.5;
}

} // namespace blaschke_angle

enum class PieceKind { Linear, Power, Moebius, BlaschkeWord };

// One injective orientation-preserving map carried by a Markov piece.
//
//  Linear       x -> slope*x + offset with exact rational data (covers all
//               sigma_d power words, which are linear with d-adic offsets)
//  Power        x -> d*x (kept as its own kind; behaves as Linear)
//  Moebius      boundary action of a disk-preserving Moebius map
//  BlaschkeWord B^{-n} o B^{m} with branch digits for the inverse part;
//               the local conformal model for fat-Basilica boundary words
struct PieceMap {
    PieceKind kind = PieceKind::Linear;

    // Linear / Power
    Rational slope{1};
    Rational offset{0};

    // Moebius
    MoebiusMap moebius;

    // BlaschkeWord
    int fwd = 0;
    int inv = 0;
    std::vector<int> branches; // inv digits, applied after the forward part

    static PieceMap linear(const Rational& a, const Rational& b) {
        PieceMap p;
        p.kind = PieceKind::Linear;
        p.slope = a;
        p.offset = b;
        return p;
    }
    static PieceMap power(long d) {
        PieceMap p;
        p.kind = PieceKind::Power;
        p.slope = Rational(d);
        p.offset = 0;
        return p;
    }
    static PieceMap moebius_map(const MoebiusMap& m) {
        PieceMap p;
        p.kind = PieceKind::Moebius;
        p.moebius = m;
        return p;
    }
    static PieceMap blaschke_word(int m, int n, std::vector<int> br) {
        PieceMap p;
        p.kind = PieceKind::BlaschkeWord;
        p.fwd = m;
        p.inv = n;
        p.branches = std::move(br);
        require(p.branches.size() == size_t(n), "BadWord", "branch digits must match n");
        return p;
    }

    bool is_exact() const { return kind == PieceKind::Linear || kind == PieceKind::Power; }

    // Evaluate on a lifted coordinate (caller lifts into the source arc).
    // Exact kinds return exact lifted values; numeric kinds return angles in [0,1).
    Rational eval_exact(const Rational& x_lifted) const {
        require(is_exact(), "ExactOnly", "eval_exact on numeric piece");
        return slope * x_lifted + offset;
    }

    double eval_numeric(double x) const {
        switch (kind) {
            case PieceKind::Linear:
            case PieceKind::Power:
                return to_double(slope) * x + to_double(offset);
            case PieceKind::Moebius:
                return to_angle_turns(moebius(to_unit_circle(x)));
            case PieceKind::BlaschkeWord: {
                double t = x;
                for (int k = 0; k < fwd; ++k) t = blaschke_angle::forward(t);
                for (int k = 0; k < inv; ++k) t = blaschke_angle::inverse(t, branches[size_t(k)]);
                return t;
            }
        }
        return x;
    }

    CirclePoint eval(const CirclePoint& x, const Arc& source) const {
        if (is_exact() && x.exact) {
            return CirclePoint(mod1(eval_exact(source.exact ? source.lift(x.r) : x.r)));
        }
        double xv = source.lift(x.value());
        return CirclePoint(eval_numeric(xv), 1e-12);
    }

    // |d(map)/d(angle)| at x
    double deriv_numeric(double x) const {
        switch (kind) {
            case PieceKind::Linear:
            case PieceKind::Power:
                return std::abs(to_double(slope));
            case PieceKind::Moebius:
                // angular derivative of a circle-preserving Moebius map
                return std::abs(moebius.deriv(to_unit_circle(x)));
            case PieceKind::BlaschkeWord: {
                double t = x;
                double d = 1.0;
                for (int k = 0; k < fwd; ++k) {
                    d *= blaschke_angle::deriv(t);
                    t = blaschke_angle::forward(t);
                }
                for (int k = 0; k < inv; ++k) {
                    t = blaschke_angle::inverse(t, branches[size_t(k)]);
                    d /= blaschke_angle::deriv(t);
                }
                return d;
            }
        }
        return 1.0;
    }

    Rational deriv_exact() const {
        require(is_exact(), "ExactOnly", "deriv_exact on numeric piece");
        return slope;
    }

    // Inverse map on the image (branch of the correct monotone inverse); for
    // numeric kinds the caller provides a lifted coordinate in the image arc.
    Rational invert_exact(const Rational& y_lifted) const {
        require(is_exact(), "ExactOnly", "invert_exact on numeric piece");
        return (y_lifted - offset) / slope;
    }

    double invert_numeric(double y) const {
        switch (kind) {
            case PieceKind::Linear:
            case PieceKind::Power:
                return (y - to_double(offset)) / to_double(slope);
            case PieceKind::Moebius:
                return to_angle_turns(moebius.inverse()(to_unit_circle(y)));
            case PieceKind::BlaschkeWord: {
                double t = y;
                for (int k = inv - 1; k >= 0; --k) t = blaschke_angle::forward(t);
                // forward part inverted needs branch info from source arc; handled by caller
                // via invert_in_arc.
                return t;
            }
        }
        return y;
    }
};

} // namespace confmark
