#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confmark/piece_map.hpp"

namespace confmark {

struct Piece {
    Arc arc;
    PieceMap map;
    int target_circle = 0;
};

enum class Side { Left, Right };

inline const char* to_string(Side s) { return s == Side::Right ? "+" : "-"; }

struct OrbitResult {
    std::vector<CirclePoint> points;  // x_0 = x, x_1, ...
    std::vector<int> pieces;          // piece index applied at each step
    int preperiod = 0;
    int period = 0;
};

enum class BreakType { SymmetricHyperbolic, SymmetricParabolic, Asymmetric };

inline const char* to_string(BreakType t) {
    switch (t) {
        case BreakType::SymmetricHyperbolic: return "symmetric-hyperbolic";
        case BreakType::SymmetricParabolic: return "symmetric-parabolic";
        case BreakType::Asymmetric: return "asymmetric";
    }
    return "?";
}

struct BreakClassification {
    CirclePoint point;
    int circle = 0;
    double lambda_plus = 0, lambda_minus = 0;
    int n_plus = 0, n_minus = 0; // parabolic multiplicities (0 = hyperbolic side)
    BreakType type = BreakType::Asymmetric;
};

struct LevelArc {
    std::vector<int> word; // admissible word, length = level + 1
    Arc arc;
};

// Partition of one or several circles plus piecewise conformal maps.
// Pieces are kept sorted by (circle, lo).
class MarkovSystem {
public:
    std::vector<Piece> pieces;
    int n_circles = 1;

    MarkovSystem() = default;
    MarkovSystem(std::vector<Piece> ps, int circles) : pieces(std::move(ps)), n_circles(circles) {
        sort_pieces();
        build_lift_tables();
    }

    void sort_pieces() {
        std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
            if (a.arc.circle != b.arc.circle) return a.arc.circle < b.arc.circle;
            return a.arc.lo < b.arc.lo;
        });
    }

    bool all_exact() const {
        for (const auto& p : pieces)
            if (!p.map.is_exact() || !p.arc.exact) return false;
        return true;
    }

    // ---- evaluation ------------------------------------------------------

    CirclePoint eval(int piece_idx, const CirclePoint& x) const {
        const Piece& p = pieces[size_t(piece_idx)];
        return p.map.eval(x, p.arc);
    }

    double deriv(int piece_idx, const CirclePoint& x) const {
        const Piece& p = pieces[size_t(piece_idx)];
        return p.map.deriv_numeric(p.arc.lift(x.value()));
    }

    // Lifted image interval of a piece (length may be exactly 1).
    std::pair<double, double> image_interval(int piece_idx) const {
        return lift_tables_[size_t(piece_idx)].image;
    }

    std::pair<Rational, Rational> image_interval_exact(int piece_idx) const {
        const Piece& p = pieces[size_t(piece_idx)];
        require(p.map.is_exact() && p.arc.exact, "ExactOnly", "exact image on numeric piece");
        return {p.map.eval_exact(p.arc.lo_r), p.map.eval_exact(p.arc.hi_r)};
    }

    // Monotone inverse of piece map on a lifted image coordinate.
    double invert(int piece_idx, double y_lifted) const {
        const Piece& p = pieces[size_t(piece_idx)];
        if (p.map.is_exact()) {
            return (y_lifted - to_double(p.map.offset)) / to_double(p.map.slope);
        }
        const LiftTable& lt = lift_tables_[size_t(piece_idx)];
        // bracket in the sample table, then bisect
        size_t j = size_t(std::upper_bound(lt.ys.begin(), lt.ys.end(), y_lifted) - lt.ys.begin());
        if (j == 0) return lt.ts.front();
        if (j >= lt.ys.size()) return lt.ts.back();
        double a = lt.ts[j - 1], b = lt.ts[j];
        double ya = lt.ys[j - 1];
        for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
            double m = 0.5 * (a + b);
            double ym = ya + wrapped_delta(p, lt.ts[j - 1], m, ya);
            if (ym < y_lifted) {
                a = m;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    }

    // ---- break points ----------------------------------------------------

    std::vector<CirclePoint> break_points(int circle) const {
        std::vector<CirclePoint> out;
        for (const auto& p : pieces)
            if (p.arc.circle == circle) out.push_back(arc_lo_point(p));
        return out;
    }

    bool is_break_point(const CirclePoint& x, int circle, double tol = kMembershipTol) const {
        for (const auto& p : pieces) {
            if (p.arc.circle != circle) continue;
            CirclePoint lo = arc_lo_point(p);
            if (x.exact && lo.exact) {
                if (x.r == lo.r) return true;
            } else if (circ_dist(x.value(), lo.value()) <= tol) {
                return true;
            }
        }
        return false;
    }

    // ---- validation ------------------------------------------------------

    // M[i][j] = 1 iff A_i is contained in f_j(A_j).
    std::vector<std::vector<int>> validate() const {
        // partition check per circle
        for (int c = 0; c < n_circles; ++c) {
            std::vector<const Piece*> ps;
            for (const auto& p : pieces)
                if (p.arc.circle == c) ps.push_back(&p);
            require(!ps.empty(), "NotMarkov", "circle " + std::to_string(c) + " has no pieces");
            double total = 0;
            for (size_t k = 0; k < ps.size(); ++k) {
                const Piece& cur = *ps[k];
                const Piece& nxt = *ps[(k + 1) % ps.size()];
                total += cur.arc.length();
                bool ok;
                if (cur.arc.exact && nxt.arc.exact) {
                    ok = mod1(cur.arc.hi_r) == mod1(nxt.arc.lo_r);
                } else {
                    ok = circ_dist(cur.arc.hi - std::floor(cur.arc.hi), nxt.arc.lo - std::floor(nxt.arc.lo)) < 1e-10;
                }
                require(ok, "NotMarkov", "gap or overlap after arc " + std::to_string(k) +
                                             " on circle " + std::to_string(c));
            }
            require(std::abs(total - 1.0) < 1e-9, "NotMarkov",
                    "arcs on circle " + std::to_string(c) + " do not cover");
        }

        // image endpoints land on break points; images are unions of arcs
        std::vector<std::vector<int>> M(pieces.size(), std::vector<int>(pieces.size(), 0));
        for (size_t j = 0; j < pieces.size(); ++j) {
            const Piece& pj = pieces[j];
            int tc = pj.target_circle;
            if (pj.map.is_exact() && pj.arc.exact) {
                auto [ylo, yhi] = image_interval_exact(int(j));
                require(yhi - ylo <= 1, "NotMarkov", "piece image longer than circle");
                require(is_exact_break(mod1(ylo), tc) && is_exact_break(mod1(yhi), tc), "NotMarkov",
                        "piece " + std::to_string(j) + " image endpoint not a break point");
                for (size_t i = 0; i < pieces.size(); ++i) {
                    if (pieces[i].arc.circle != tc) continue;
                    M[i][j] = exact_subarc(pieces[i].arc, ylo, yhi) ? 1 : 0;
                }
            } else {
                auto [ylo, yhi] = image_interval(int(j));
                require(yhi - ylo <= 1 + 1e-9, "NotMarkov", "piece image longer than circle");
                require(is_break_point(CirclePoint(ylo, 1e-9), tc, 1e-8) &&
                            is_break_point(CirclePoint(yhi, 1e-9), tc, 1e-8),
                        "NotMarkov", "piece " + std::to_string(j) + " image endpoint not a break point");
                for (size_t i = 0; i < pieces.size(); ++i) {
                    if (pieces[i].arc.circle != tc) continue;
                    M[i][j] = numeric_subarc(pieces[i].arc, ylo, yhi) ? 1 : 0;
                }
            }
            // image must be a union of consecutive arcs: length bookkeeping
            double ilen = 0;
            for (size_t i = 0; i < pieces.size(); ++i)
                if (M[i][j]) ilen += pieces[i].arc.length();
            double want = pj.map.is_exact() && pj.arc.exact
                              ? to_double(image_interval_exact(int(j)).second -
                                          image_interval_exact(int(j)).first)
                              : image_interval(int(j)).second - image_interval(int(j)).first;
            require(std::abs(ilen - want) < 1e-8, "NotMarkov",
                    "piece " + std::to_string(j) + " image is not a union of arcs");
        }
        return M;
    }

    // ---- refinement ------------------------------------------------------

    // Level-n partition; words have length n+1 (A_{i w} = f_i^{-1}(A_w) for
    // A_w inside f_i(A_i)).  Arcs shorter than prune_below are dropped;
    // children are nested inside parents, so pruning is monotone.
    std::vector<LevelArc> refine(int level, double prune_below = 0.0) const {
        std::vector<LevelArc> cur;
        for (size_t i = 0; i < pieces.size(); ++i) cur.push_back({{int(i)}, pieces[i].arc});
        for (int l = 0; l < level; ++l) {
            std::vector<LevelArc> next;
            next.reserve(cur.size() * 2);
            for (size_t j = 0; j < pieces.size(); ++j) {
                const Piece& pj = pieces[j];
                bool exact = pj.map.is_exact() && pj.arc.exact;
                Rational ylo_r, yhi_r;
                double ylo = 0, yhi = 0;
                if (exact) {
                    std::tie(ylo_r, yhi_r) = image_interval_exact(int(j));
                } else {
                    std::tie(ylo, yhi) = image_interval(int(j));
                }
                for (const auto& la : cur) {
                    if (la.arc.circle != pj.target_circle) continue;
                    if (exact && la.arc.exact) {
                        auto sub = exact_lift_into(la.arc, ylo_r, yhi_r);
                        if (!sub) continue;
                        Rational plo = pj.map.invert_exact(sub->first);
                        Rational phi = pj.map.invert_exact(sub->second);
                        if (to_double(phi - plo) < prune_below) continue;
                        std::vector<int> w;
                        w.reserve(la.word.size() + 1);
                        w.push_back(int(j));
                        w.insert(w.end(), la.word.begin(), la.word.end());
                        out_push(next, {std::move(w), Arc(pj.arc.circle, plo, phi)});
                    } else {
                        auto sub = numeric_lift_into(la.arc, ylo, yhi);
                        if (!sub) continue;
                        double plo = invert(int(j), sub->first);
                        double phi = invert(int(j), sub->second);
                        if (phi - plo < prune_below) continue;
                        std::vector<int> w;
                        w.reserve(la.word.size() + 1);
                        w.push_back(int(j));
                        w.insert(w.end(), la.word.begin(), la.word.end());
                        out_push(next, {std::move(w), Arc(pj.arc.circle, plo, phi)});
                    }
                }
            }
            cur = std::move(next);
        }
        return cur;
    }

    struct ExpansionReport {
        bool expanding = false;
        std::vector<double> max_diameter; // per level 1..depth
    };

    ExpansionReport is_topologically_expanding(int depth, double eps_target) const {
        require(depth >= 1, "BadDepth", "depth >= 1");
        ExpansionReport rep;
        std::vector<LevelArc> cur;
        for (size_t i = 0; i < pieces.size(); ++i) cur.push_back({{int(i)}, pieces[i].arc});
        for (int l = 0; l < depth; ++l) {
            cur = one_level_pullback(cur, eps_target * 0.25);
            double mx = 0;
            for (const auto& la : cur) mx = std::max(mx, la.arc.length());
            rep.max_diameter.push_back(mx);
            if (cur.empty()) { // everything shrank below the prune threshold
                rep.max_diameter.back() = 0;
                break;
            }
        }
        double final_max = rep.max_diameter.empty() ? 1.0 : rep.max_diameter.back();
        rep.expanding = final_max < eps_target;
        return rep;
    }

    std::vector<LevelArc> one_level_pullback(const std::vector<LevelArc>& cur,
                                             double prune_below) const {
        std::vector<LevelArc> next;
        for (size_t j = 0; j < pieces.size(); ++j) {
            const Piece& pj = pieces[j];
            bool exact = pj.map.is_exact() && pj.arc.exact;
            Rational ylo_r, yhi_r;
            double ylo = 0, yhi = 0;
            if (exact) {
                std::tie(ylo_r, yhi_r) = image_interval_exact(int(j));
            } else {
                std::tie(ylo, yhi) = image_interval(int(j));
            }
            for (const auto& la : cur) {
                if (la.arc.circle != pj.target_circle) continue;
                if (exact && la.arc.exact) {
                    auto sub = exact_lift_into(la.arc, ylo_r, yhi_r);
                    if (!sub) continue;
                    Rational plo = pj.map.invert_exact(sub->first);
                    Rational phi = pj.map.invert_exact(sub->second);
                    if (to_double(phi - plo) < prune_below) continue;
                    std::vector<int> w{int(j)};
                    w.insert(w.end(), la.word.begin(), la.word.end());
                    next.push_back({std::move(w), Arc(pj.arc.circle, plo, phi)});
                } else {
                    auto sub = numeric_lift_into(la.arc, ylo, yhi);
                    if (!sub) continue;
                    double plo = invert(int(j), sub->first);
                    double phi = invert(int(j), sub->second);
                    if (phi - plo < prune_below) continue;
                    std::vector<int> w{int(j)};
                    w.insert(w.end(), la.word.begin(), la.word.end());
                    next.push_back({std::move(w), Arc(pj.arc.circle, plo, phi)});
                }
            }
        }
        return next;
    }

    // ---- orbits and exponents ---------------------------------------------

    int piece_at(const CirclePoint& x, int circle, Side side) const {
        int best = -1;
        for (size_t i = 0; i < pieces.size(); ++i) {
            const Piece& p = pieces[i];
            if (p.arc.circle != circle) continue;
            CirclePoint lo = arc_lo_point(p), hi = arc_hi_point(p);
            bool at_lo = same_point(x, lo), at_hi = same_point(x, hi);
            if (at_lo && side == Side::Right) return int(i);
            if (at_hi && side == Side::Left) return int(i);
            if (!at_lo && !at_hi) {
                bool inside = x.exact && p.arc.exact ? p.arc.contains(x.r)
                                                     : p.arc.contains(x.value(), 1e-11);
                if (inside) best = int(i);
            }
        }
        require(best >= 0, "NoPiece", "no piece contains the point on the requested side");
        return best;
    }

    OrbitResult side_orbit(CirclePoint x, int circle, Side side, int nmax = 400) const {
        OrbitResult res;
        res.points.push_back(x);
        std::map<std::pair<int, Rational>, int> seen_exact;
        int cur_circle = circle;
        if (x.exact) seen_exact[{cur_circle, x.r}] = 0;
        for (int n = 0; n < nmax; ++n) {
            int pi = piece_at(x, cur_circle, side);
            res.pieces.push_back(pi);
            x = snap_to_break(eval(pi, x), pieces[size_t(pi)].target_circle);
            cur_circle = pieces[size_t(pi)].target_circle;
            res.points.push_back(x);
            // period detection
            if (x.exact) {
                auto it = seen_exact.find({cur_circle, x.r});
                if (it != seen_exact.end()) {
                    res.preperiod = it->second;
                    res.period = n + 1 - it->second;
                    return res;
                }
                seen_exact[{cur_circle, x.r}] = n + 1;
            } else {
                for (int k = 0; k < n + 1; ++k) {
                    if (!res.points[size_t(k)].exact || true) {
                        bool same_circ = circle_of_point(res, k, circle) == cur_circle;
                        if (same_circ &&
                            circ_dist(res.points[size_t(k)].value(), x.value()) < 1e-11) {
                            res.preperiod = k;
                            res.period = n + 1 - k;
                            return res;
                        }
                    }
                }
            }
        }
        fail("NonPeriodicTail", "orbit did not close up within " + std::to_string(nmax) + " steps");
    }

    // Natural-log Lyapunov exponent over the periodic tail of the side orbit.
    double lyapunov_exponent(const CirclePoint& x, int circle, Side side) const {
        OrbitResult orb = side_orbit(x, circle, side);
        return tail_exponent(orb);
    }

    double tail_exponent(const OrbitResult& orb) const {
        int p = orb.preperiod, q = orb.period;
        require(q >= 1, "NonPeriodicTail", "no periodic tail");
        // Moebius-only cycle: classify by trace for the exact-zero decision.
        bool all_moebius = true, all_exact = true;
        for (int k = p; k < p + q; ++k) {
            PieceKind kd = pieces[size_t(orb.pieces[size_t(k)])].map.kind;
            if (kd != PieceKind::Moebius) all_moebius = false;
            if (kd != PieceKind::Linear && kd != PieceKind::Power) all_exact = false;
        }
        if (all_exact) {
            Rational prod = 1;
            for (int k = p; k < p + q; ++k)
                prod *= pieces[size_t(orb.pieces[size_t(k)])].map.slope;
            if (prod == 1) return 0.0;
            return std::log(std::abs(to_double(prod))) / q;
        }
        if (all_moebius) {
            MoebiusMap w = MoebiusMap::identity();
            for (int k = p; k < p + q; ++k)
                w = pieces[size_t(orb.pieces[size_t(k)])].map.moebius * w;
            MoebiusClass cls = classify_by_trace(w);
            if (cls == MoebiusClass::Parabolic || cls == MoebiusClass::Identity) return 0.0;
        }
        double logprod = 0;
        for (int k = p; k < p + q; ++k)
            logprod += std::log(deriv(orb.pieces[size_t(k)], orb.points[size_t(k)]));
        double lam = logprod / q;
        if (std::abs(std::exp(logprod) - 1.0) < kParabolicTol) return 0.0;
        return lam;
    }

    // Parabolic multiplicity N of the periodic tail: the one-sided return germ
    // is x + c x^{N+1} + ...; estimated from the decay exponent of R(x+h)-(x+h).
    int parabolic_multiplicity(const CirclePoint& x, int circle, Side side) const {
        OrbitResult orb = side_orbit(x, circle, side);
        require(std::abs(tail_exponent(orb)) < 1e-12, "NotParabolic",
                "nonzero Lyapunov exponent");
        int p = orb.preperiod, q = orb.period;
        // Moebius cycles: a parabolic Moebius germ has a double fixed point,
        // i.e. tangency order 2 and one petal.
        bool all_moebius = true;
        for (int k = p; k < p + q; ++k)
            if (pieces[size_t(orb.pieces[size_t(k)])].map.kind != PieceKind::Moebius)
                all_moebius = false;
        if (all_moebius) return 1;

        double x0 = orb.points[size_t(p)].value();
        double sgn = side == Side::Right ? 1.0 : -1.0;
        auto ret = [&](double h) {
            double t = x0 + sgn * h;
            for (int k = p; k < p + q; ++k) {
                const Piece& pc = pieces[size_t(orb.pieces[size_t(k)])];
                t = pc.map.eval_numeric(pc.arc.lift(t));
            }
            // signed displacement relative to x0 + sgn h
            double d = t - (x0 + sgn * h);
            d -= std::round(d);
            return std::abs(d);
        };
        std::vector<double> ratios;
        double h = 1e-2;
        double prev = ret(h);
        for (int k = 0; k < 10; ++k) {
            double nxt = ret(h / 2);
            if (prev > 1e-13 && nxt > 1e-14) ratios.push_back(std::log2(prev / nxt));
            prev = nxt;
            h /= 2;
        }
        require(!ratios.empty(), "NotParabolic", "no usable displacement signal");
        std::sort(ratios.begin(), ratios.end());
        double med = ratios[ratios.size() / 2];
        int ord = int(std::lround(med));
        require(std::abs(med - ord) < 0.2 && ord >= 2, "NotParabolic",
                "tangency order not resolved");
        return ord - 1;
    }

    std::vector<BreakClassification> classify_breakpoints() const {
        std::vector<BreakClassification> out;
        for (int c = 0; c < n_circles; ++c) {
            for (const auto& bp : break_points(c)) {
                BreakClassification bc;
                bc.point = bp;
                bc.circle = c;
                OrbitResult op = side_orbit(bp, c, Side::Right);
                OrbitResult om = side_orbit(bp, c, Side::Left);
                bc.lambda_plus = tail_exponent(op);
                bc.lambda_minus = tail_exponent(om);
                bool para_p = bc.lambda_plus == 0.0, para_m = bc.lambda_minus == 0.0;
                if (para_p) bc.n_plus = parabolic_multiplicity(bp, c, Side::Right);
                if (para_m) bc.n_minus = parabolic_multiplicity(bp, c, Side::Left);
                if (para_p && para_m && bc.n_plus == bc.n_minus) {
                    bc.type = BreakType::SymmetricParabolic;
                } else if (!para_p && !para_m && lambda_equal(op, om)) {
                    bc.type = BreakType::SymmetricHyperbolic;
                } else {
                    bc.type = BreakType::Asymmetric;
                }
                out.push_back(bc);
            }
        }
        return out;
    }

    bool lambda_equal(const OrbitResult& a, const OrbitResult& b) const {
        bool exact = true;
        auto piece_exact = [&](const OrbitResult& o) {
            for (int k = o.preperiod; k < o.preperiod + o.period; ++k) {
                PieceKind kd = pieces[size_t(o.pieces[size_t(k)])].map.kind;
                if (kd != PieceKind::Linear && kd != PieceKind::Power) return false;
            }
            return true;
        };
        exact = piece_exact(a) && piece_exact(b);
        if (exact) {
            Rational pa = 1, pb = 1;
            for (int k = a.preperiod; k < a.preperiod + a.period; ++k)
                pa *= pieces[size_t(a.pieces[size_t(k)])].map.slope;
            for (int k = b.preperiod; k < b.preperiod + b.period; ++k)
                pb *= pieces[size_t(b.pieces[size_t(k)])].map.slope;
            // lambda_a = log(pa)/qa equals log(pb)/qb iff pa^qb == pb^qa
            return pow_int(pa, b.period) == pow_int(pb, a.period);
        }
        double la = tail_exponent(a), lb = tail_exponent(b);
        return std::abs(la - lb) < 1e-7 * std::max(1.0, std::abs(la));
    }

    // ---- helpers ---------------------------------------------------------

    CirclePoint arc_lo_point(const Piece& p) const {
        return p.arc.exact ? CirclePoint(p.arc.lo_r) : CirclePoint(p.arc.lo, 1e-11);
    }
    CirclePoint arc_hi_point(const Piece& p) const {
        return p.arc.exact ? CirclePoint(p.arc.hi_r) : CirclePoint(p.arc.hi, 1e-11);
    }

    CirclePoint snap_to_break(const CirclePoint& x, int circle) const {
        if (x.exact) return x;
        for (const auto& p : pieces) {
            if (p.arc.circle != circle) continue;
            if (p.arc.exact && circ_dist(x.value(), to_double(mod1(p.arc.lo_r))) < 1e-9)
                return CirclePoint(p.arc.lo_r);
            if (!p.arc.exact && circ_dist(x.value(), p.arc.lo - std::floor(p.arc.lo)) < 1e-9)
                return CirclePoint(p.arc.lo - std::floor(p.arc.lo), 1e-12);
        }
        return x;
    }

private:
    struct LiftTable {
        std::vector<double> ts, ys;          // continuous lifted graph samples
        std::pair<double, double> image{0, 0};
    };
    std::vector<LiftTable> lift_tables_;

    double wrapped_delta(const Piece& p, double t_ref, double t, double) const {
        // increment of the lifted image between t_ref and t (small interval)
        double y0 = p.map.eval_numeric(t_ref);
        double y1 = p.map.eval_numeric(t);
        double d = y1 - y0;
        d -= std::floor(d);
        if (d > 0.75) d -= 1.0; // guard tiny negative drift
        return d;
    }

    void build_lift_tables() {
        lift_tables_.clear();
        lift_tables_.resize(pieces.size());
        for (size_t i = 0; i < pieces.size(); ++i) {
            const Piece& p = pieces[i];
            LiftTable lt;
            const int S = 256;
            lt.ts.resize(S + 1);
            lt.ys.resize(S + 1);
            double y = p.map.eval_numeric(p.arc.lo);
            lt.ts[0] = p.arc.lo;
            lt.ys[0] = y;
            for (int k = 1; k <= S; ++k) {
                double t0 = p.arc.lo + (p.arc.hi - p.arc.lo) * (k - 1) / double(S);
                double t1 = p.arc.lo + (p.arc.hi - p.arc.lo) * k / double(S);
                double d = p.map.eval_numeric(t1) - p.map.eval_numeric(t0);
                d -= std::floor(d);
                if (d > 0.75) d -= 1.0;
                y += d;
                lt.ts[size_t(k)] = t1;
                lt.ys[size_t(k)] = y;
            }
            lt.image = {lt.ys.front(), lt.ys.back()};
            lift_tables_[i] = lt;
        }
    }

    bool is_exact_break(const Rational& y, int circle) const {
        for (const auto& p : pieces) {
            if (p.arc.circle != circle) continue;
            if (p.arc.exact && mod1(p.arc.lo_r) == y) return true;
            if (!p.arc.exact && circ_dist(to_double(y), p.arc.lo - std::floor(p.arc.lo)) < 1e-10)
                return true;
        }
        return false;
    }

    // arc contained in lifted interval [ylo, yhi] up to an integer shift?
    static bool exact_subarc(const Arc& a, const Rational& ylo, const Rational& yhi) {
        if (!a.exact) return false;
        Rational shift = ylo - mod1(ylo);
        Rational lo = mod1(a.lo_r) + shift;
        for (int k = -1; k <= 1; ++k) {
            Rational l = lo + k, h = l + a.length_r();
            if (l >= ylo && h <= yhi) return true;
        }
        return false;
    }

    static bool numeric_subarc(const Arc& a, double ylo, double yhi) {
        double alo = a.lo - std::floor(a.lo);
        double base = ylo - std::floor(ylo);
        double lo = std::floor(ylo) + alo;
        (void)base;
        for (int k = -1; k <= 2; ++k) {
            double l = lo + k, h = l + a.length();
            if (l >= ylo - 1e-9 && h <= yhi + 1e-9) return true;
        }
        return false;
    }

    static std::optional<std::pair<Rational, Rational>> exact_lift_into(const Arc& a,
                                                                        const Rational& ylo,
                                                                        const Rational& yhi) {
        if (!a.exact) return std::nullopt;
        Rational lo = mod1(a.lo_r) + (ylo - mod1(ylo));
        for (int k = -1; k <= 1; ++k) {
            Rational l = lo + k, h = l + a.length_r();
            if (l >= ylo && h <= yhi) return std::make_pair(l, h);
        }
        return std::nullopt;
    }

    static std::optional<std::pair<double, double>> numeric_lift_into(const Arc& a, double ylo,
                                                                      double yhi) {
        double alo = a.lo - std::floor(a.lo);
        double lo = std::floor(ylo) + alo;
        for (int k = -1; k <= 2; ++k) {
            double l = lo + k, h = l + a.length();
            if (l >= ylo - 1e-9 && h <= yhi + 1e-9) return std::make_pair(l, h);
        }
        return std::nullopt;
    }

    int circle_of_point(const OrbitResult& res, int k, int start_circle) const {
        int c = start_circle;
        for (int i = 0; i < k; ++i) c = pieces[size_t(res.pieces[size_t(i)])].target_circle;
        return c;
    }

    static void out_push(std::vector<LevelArc>& v, LevelArc la) { v.push_back(std::move(la)); }
};

// ---------------------------------------------------------------------------
// standard example systems

// sigma_d on one circle with the uniform d-piece partition.
inline MarkovSystem sigma_d_system(long d) {
    std::vector<Piece> ps;
    for (long j = 0; j < d; ++j) {
        Arc a(0, Rational(j, d), Rational(j + 1, d));
        ps.push_back({a, PieceMap::linear(Rational(d), Rational(-j)), 0});
    }
    return MarkovSystem(std::move(ps), 1);
}

// Parabolic Blaschke product as a 2-piece Markov system in angle coordinates.
inline MarkovSystem blaschke_system() {
    std::vector<Piece> ps;
    ps.push_back({Arc(0, 0.0, 0.5), PieceMap::blaschke_word(1, 0, {}), 0});
    ps.push_back({Arc(0, 0.5, 1.0), PieceMap::blaschke_word(1, 0, {}), 0});
    return MarkovSystem(std::move(ps), 1);
}

// The d-adic -> e-adic pair: F has e pieces with slopes that are powers of d,
// each mapping onto the full circle, G is t -> e t.
inline std::pair<MarkovSystem, MarkovSystem> dyadic_to_dadic_system(long d, long e) {
    require(d >= 2 && e >= 2, "BadDegree", "need d, e >= 2");
    std::vector<Rational> lens;
    if (d == 2 && e == 5) {
        // the 5-piece system from the source construction
        lens = {Rational(1, 4), Rational(1, 4), Rational(1, 8), Rational(1, 8), Rational(1, 4)};
    } else {
        lens.assign(1, Rational(1));
        while (long(lens.size()) < e) {
            // split the leftmost largest piece into d equal parts, or fewer if
            // that would overshoot the piece count
            size_t at = 0;
            for (size_t i = 1; i < lens.size(); ++i)
                if (lens[i] > lens[at]) at = i;
            long want = std::min<long>(d, e - long(lens.size()) + 1);
            Rational piece = lens[at] / d;
            std::vector<Rational> rep;
            for (long k = 0; k + 1 < want; ++k) rep.push_back(piece);
            rep.push_back(lens[at] - piece * (want - 1));
            lens.erase(lens.begin() + long(at));
            lens.insert(lens.begin() + long(at), rep.begin(), rep.end());
        }
    }
    std::vector<Piece> ps;
    Rational x = 0;
    for (const Rational& L : lens) {
        // slope = 1/L must be a power of d
        Rational s = 1 / L;
        ps.push_back({Arc(0, x, x + L), PieceMap::linear(s, -s * x), 0});
        x += L;
    }
    require(x == 1, "Internal", "lengths must sum to 1");
    MarkovSystem F(std::move(ps), 1);
    MarkovSystem G = sigma_d_system(e);
    return {F, G};
}

} // namespace confmark
