#ifndef QORB_FAREY_POLYGON_HPP
#define QORB_FAREY_POLYGON_HPP

#include "quad_arith.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace qorb {

enum class GapType { Even, Odd, Free };

inline const char* gap_type_name(GapType t) {
    switch (t) {
        case GapType::Even: return "even";
        case GapType::Odd: return "odd";
        default: return "free";
    }
}

struct Fraction {
    long long a, b;
};

/// Farey symbol of level q: 0/1 = a_0/b_0 < ... < a_n/b_n = 1/1 with a tag per gap (i, i+1).
struct FareySymbol {
    long long q{};
    std::vector<Fraction> fracs;
    std::vector<GapType> types;
    std::vector<int> partner;  // free gaps only; -1 otherwise

    int n() const { return static_cast<int>(fracs.size()) - 1; }
    int e2() const { return static_cast<int>(std::count(types.begin(), types.end(), GapType::Even)); }
    int e3() const { return static_cast<int>(std::count(types.begin(), types.end(), GapType::Odd)); }
    int genus() const { return (n() - e2() - e3()) / 4; }
    int N() const { return n() + e2() + e3() + 2; }
};

namespace detail {

inline long long pmod(long long x, long long m) { return ((x % m) + m) % m; }

inline long long powmod(long long b, long long e, long long m) {
    long long r = 1;
    b = pmod(b, m);
    while (e) {
        if (e & 1) r = static_cast<long long>(static_cast<__int128>(r) * b % m);
        b = static_cast<long long>(static_cast<__int128>(b) * b % m);
        e >>= 1;
    }
    return r;
}

// Point (c : d) of P^1(F_q) as an index in [0, q], q standing for (1 : 0).
inline long long p1_index(long long c, long long d, long long q) {
    c = pmod(c, q);
    d = pmod(d, q);
    if (d == 0) return q;
    return static_cast<long long>(static_cast<__int128>(c) * powmod(d, q - 2, q) % q);
}

}  // namespace detail

/// Breadth first walk over Farey triangles from (0, 1, infinity): the triangle beyond a gap
/// [[a', a], [b', b]] (0, infinity) is added when its Gamma_0(q)-orbit, read off the coset row (b' : b)
/// and its images under the order three rotation, is new. A new orbit fixed by the rotation makes the gap odd.
/// Remaining gaps are even when their edge orbit is fixed by S, otherwise free and paired within their edge orbit.
inline FareySymbol farey_symbol(long long q) {
    if (q < 2) throw std::domain_error("farey_symbol: q must be at least 2");
    for (long long p = 2; p * p <= q; ++p)
        if (q % p == 0) throw std::domain_error("farey_symbol: q must be prime");
    using detail::p1_index;
    auto tri_key = [q](long long c, long long d) {
        long long k0 = p1_index(c, d, q), k1 = p1_index(c + d, -c, q), k2 = p1_index(d, -c - d, q);
        return std::min({k0, k1, k2});
    };
    auto tri_fixed = [q](long long c, long long d) { return p1_index(c, d, q) == p1_index(c + d, -c, q); };
    auto edge_key = [q](long long c, long long d) { return std::min(p1_index(c, d, q), p1_index(d, -c, q)); };

    struct Node {
        Fraction l, r;
        int state;  // 0 split, 1 odd, 2 boundary
        int kids[2];
    };
    std::vector<Node> nodes{{{0, 1}, {1, 1}, 2, {-1, -1}}};
    std::vector<bool> seen(q + 1, false);
    seen[tri_key(0, 1)] = true;
    std::vector<int> queue{0};
    for (std::size_t h = 0; h < queue.size(); ++h) {
        int id = queue[h];
        Fraction l = nodes[id].l, r = nodes[id].r;
        long long c = r.b, d = l.b;
        long long key = tri_key(c, d);
        if (seen[key]) continue;
        seen[key] = true;
        if (tri_fixed(c, d)) {
            nodes[id].state = 1;
            continue;
        }
        Fraction m{l.a + r.a, l.b + r.b};
        nodes[id].state = 0;
        for (int s = 0; s < 2; ++s) {
            nodes[id].kids[s] = static_cast<int>(nodes.size());
            nodes.push_back({s == 0 ? l : m, s == 0 ? m : r, 2, {-1, -1}});
            queue.push_back(nodes[id].kids[s]);
        }
    }
    FareySymbol F;
    F.q = q;
    F.fracs.push_back({0, 1});
    std::vector<long long> ekeys;
    std::function<void(int)> walk = [&](int id) {
        const Node& nd = nodes[id];
        if (nd.state == 0) {
            walk(nd.kids[0]);
            walk(nd.kids[1]);
            return;
        }
        F.fracs.push_back(nd.r);
        long long c = nd.r.b, d = nd.l.b;
        if (nd.state == 1) {
            F.types.push_back(GapType::Odd);
        } else {
            F.types.push_back(p1_index(c, d, q) == p1_index(d, -c, q) ? GapType::Even : GapType::Free);
        }
        ekeys.push_back(edge_key(c, d));
        F.partner.push_back(-1);
    };
    walk(0);
    for (int i = 0; i < F.n(); ++i) {
        if (F.types[i] != GapType::Free || F.partner[i] >= 0) continue;
        for (int j = i + 1; j < F.n(); ++j)
            if (F.types[j] == GapType::Free && F.partner[j] < 0 && ekeys[j] == ekeys[i]) {
                F.partner[i] = j;
                F.partner[j] = i;
                break;
            }
        if (F.partner[i] < 0) throw std::logic_error("farey_symbol: unpaired free gap");
    }
    if (3 * F.n() + F.e3() != q + 1) throw std::logic_error("farey_symbol: wrong index");
    return F;
}

/// Classical invariants of Gamma_0(q), q prime: (genus, e2, e3).
inline std::array<long long, 3> classical_invariants(long long q) {
    long long e2 = q == 2 ? 1 : 1 + kronecker(-4, q);
    long long e3 = q == 3 ? 1 : 1 + kronecker(-3, q);
    // 12 g = 12 + nu - 3 e2 - 4 e3 - 6 c with nu = q + 1 and two cusps
    long long g = (12 + (q + 1) - 3 * e2 - 4 * e3 - 12) / 12;
    return {g, e2, e3};
}

enum class SideKind { Parabolic, Elliptic2, Elliptic3, Hyperbolic };

inline const char* side_kind_name(SideKind k) {
    switch (k) {
        case SideKind::Parabolic: return "parabolic";
        case SideKind::Elliptic2: return "elliptic2";
        case SideKind::Elliptic3: return "elliptic3";
        default: return "hyperbolic";
    }
}

/// Oriented side from its first vertex to its second, lying on the complete geodesic geo (A|z|^2 + B x + C = 0).
struct Side {
    HPoint v1, v2;
    Form geo;
    Mat2 label;
    int pair{-1};
    SideKind kind{SideKind::Parabolic};
    int gap{-1};   // Farey gap containing the side, -1 for the vertical sides
    Mat2 gap_M;    // [[a_{i+1}, a_i], [b_{i+1}, b_i]]; S and T for the vertical sides
    Cusp end1, end2;  // ideal endpoints of geo
};

/// M applied to the triangle (0, 1, infinity), or only to its third {0 <= x <= 1/2, |z - 1| >= 1} at the edge (0, infinity).
struct Tile {
    Mat2 M;
    bool third{false};
};

/// Fundamental polygon with side pairing; sides are listed anticlockwise starting at infinity.
struct SpecialPolygon {
    long long q{};
    std::optional<FareySymbol> symbol;  // absent for the level one polygon
    std::vector<Side> sides;
    HPoint interior;  // a point strictly inside, fixes the inner side of each geodesic
    std::vector<Tile> tiles;

    int N() const { return static_cast<int>(sides.size()); }
    const Mat2& label(int j) const { return sides[j].label; }
    int pair(int j) const { return sides[j].pair; }
    int wrap(int j) const { return ((j % N()) + N()) % N(); }
    int t(int j) const { return wrap(pair(j) - 1); }

    /// Sign of the side's geodesic form on the polygon's side of it.
    int inner_sign(int j) const { return form_sign_at(sides[j].geo, interior); }
};

/// Geodesic through two cusps as an integer form.
inline Form geodesic_form(const Cusp& x, const Cusp& y) {
    if (x.is_inf() && y.is_inf()) throw std::domain_error("geodesic_form: degenerate");
    if (x.is_inf()) return {0, y.q, -y.p};
    if (y.is_inf()) return {0, x.q, -x.p};
    // (x.q z - x.p)(y.q z - y.p)
    return {x.q * y.q, -(x.p * y.q + y.p * x.q), x.p * y.p};
}

namespace detail {

inline Mat2 even_label(const Fraction& l, const Fraction& r) {
    Int a = l.a, b = l.b, a1 = r.a, b1 = r.b;
    return {a1 * b1 + a * b, -a * a - a1 * a1, b * b + b1 * b1, -a1 * b1 - a * b};
}

inline Mat2 odd_label(const Fraction& l, const Fraction& r) {
    Int a = l.a, b = l.b, a1 = r.a, b1 = r.b;
    return {a1 * b1 + a * b1 + a * b, -a * a - a * a1 - a1 * a1, b * b + b * b1 + b1 * b1, -a1 * b1 - a1 * b - a * b};
}

// Maps the geodesic over gap p onto the geodesic over gap s.
inline Mat2 free_map(const Fraction& pl, const Fraction& pr, const Fraction& sl, const Fraction& sr) {
    Int ai = pl.a, bi = pl.b, ai1 = pr.a, bi1 = pr.b, as = sl.a, bs = sl.b, as1 = sr.a, bs1 = sr.b;
    return {as1 * bi1 + as * bi, -ai * as - ai1 * as1, bi * bs + bi1 * bs1, -ai1 * bs1 - ai * bs};
}

}  // namespace detail

/// Labels satisfy alpha_j L_{pair(j)} = L_j and alpha_{pair(j)} = alpha_j^{-1} exactly.
inline SpecialPolygon special_polygon(const FareySymbol& F) {
    SpecialPolygon P;
    P.q = F.q;
    P.symbol = F;
    P.interior = HPoint::interior(Rat(1, 2), Rat(4));
    auto cusp = [&](int i) { return Cusp(F.fracs[i].a, F.fracs[i].b); };
    Side first;
    first.v1 = HPoint::infinity();
    first.v2 = HPoint::cusp(Cusp(0, 1));
    first.end1 = Cusp::infinity();
    first.end2 = Cusp(0, 1);
    first.geo = geodesic_form(first.end1, first.end2);
    first.label = Mat2::Tinv();
    first.kind = SideKind::Parabolic;
    first.gap_M = Mat2::S();
    P.sides.push_back(first);
    std::vector<int> side_of_gap(F.n(), -1);
    for (int i = 0; i < F.n(); ++i) {
        const Fraction &l = F.fracs[i], &r = F.fracs[i + 1];
        Mat2 M{r.a, l.a, r.b, l.b};
        Cusp cl = cusp(i), cr = cusp(i + 1);
        side_of_gap[i] = P.N();
        if (F.types[i] == GapType::Free) {
            Side s;
            s.v1 = HPoint::cusp(cl);
            s.v2 = HPoint::cusp(cr);
            s.end1 = cl;
            s.end2 = cr;
            s.geo = geodesic_form(cl, cr);
            s.kind = SideKind::Hyperbolic;
            s.gap = i;
            s.gap_M = M;
            P.sides.push_back(s);
        } else if (F.types[i] == GapType::Even) {
            Int n = Int(l.b) * l.b + Int(r.b) * r.b;
            Rat x = Rat(Int(l.a) * l.b + Int(r.a) * r.b) / n, y2 = Rat(1) / (n * n);
            HPoint v = HPoint::interior(x, y2);
            Mat2 K = detail::even_label(l, r);
            for (int h = 0; h < 2; ++h) {
                Side s;
                s.v1 = h == 0 ? HPoint::cusp(cl) : v;
                s.v2 = h == 0 ? v : HPoint::cusp(cr);
                s.end1 = cl;
                s.end2 = cr;
                s.geo = geodesic_form(cl, cr);
                s.kind = SideKind::Elliptic2;
                s.gap = i;
                s.gap_M = M;
                s.label = K;
                s.pair = P.N() + (h == 0 ? 1 : -1);
                P.sides.push_back(s);
            }
        } else {
            Int n = Int(l.b) * l.b + Int(l.b) * r.b + Int(r.b) * r.b;
            Rat x = (Rat(Int(r.a) * r.b + Int(l.a) * l.b) + Rat(Int(r.a) * l.b + Int(l.a) * r.b) / 2) / n;
            Rat y2 = Rat(3, 4) / (n * n);
            HPoint v = HPoint::interior(x, y2);
            Mat2 K = detail::odd_label(l, r);
            // first side lies on M(geodesic 0..2), second on M(geodesic 1/2..infinity)
            Cusp m2 = apply(M, Cusp(2, 1)), mh = apply(M, Cusp(1, 2));
            for (int h = 0; h < 2; ++h) {
                Side s;
                s.v1 = h == 0 ? HPoint::cusp(cl) : v;
                s.v2 = h == 0 ? v : HPoint::cusp(cr);
                s.end1 = h == 0 ? cl : mh;
                s.end2 = h == 0 ? m2 : cr;
                s.geo = geodesic_form(s.end1, s.end2);
                s.kind = SideKind::Elliptic3;
                s.gap = i;
                s.gap_M = M;
                s.label = h == 0 ? K : K.inv();
                s.pair = P.N() + (h == 0 ? 1 : -1);
                P.sides.push_back(s);
            }
        }
    }
    Side last;
    last.v1 = HPoint::cusp(Cusp(1, 1));
    last.v2 = HPoint::infinity();
    last.end1 = Cusp(1, 1);
    last.end2 = Cusp::infinity();
    last.geo = geodesic_form(last.end1, last.end2);
    last.label = Mat2::T();
    last.kind = SideKind::Parabolic;
    last.gap_M = Mat2::T();
    P.sides.push_back(last);
    P.tiles.push_back({Mat2::identity(), false});
    std::function<void(Fraction, Fraction)> descend = [&](Fraction l, Fraction r) {
        Fraction m{l.a + r.a, l.b + r.b};
        bool split = std::any_of(F.fracs.begin(), F.fracs.end(), [&](const Fraction& f) { return f.a == m.a && f.b == m.b; });
        if (!split) return;
        P.tiles.push_back({Mat2{r.a, l.a, r.b, l.b}, false});
        descend(l, m);
        descend(m, r);
    };
    descend({0, 1}, {1, 1});
    for (int i = 0; i < F.n(); ++i)
        if (F.types[i] == GapType::Odd) P.tiles.push_back({Mat2{F.fracs[i + 1].a, F.fracs[i].a, F.fracs[i + 1].b, F.fracs[i].b}, true});
    int N = P.N();
    P.sides[0].pair = N - 1;
    P.sides[N - 1].pair = 0;
    for (int i = 0; i < F.n(); ++i) {
        if (F.types[i] != GapType::Free) continue;
        int j = side_of_gap[i], js = side_of_gap[F.partner[i]];
        P.sides[j].pair = js;
        if (j < js) {
            const Fraction &pl = F.fracs[F.partner[i]], &pr = F.fracs[F.partner[i] + 1];
            P.sides[j].label = detail::free_map(pl, pr, F.fracs[i], F.fracs[i + 1]);
            P.sides[js].label = P.sides[j].label.inv();
        }
    }
    return P;
}

/// Level one polygon {0 <= Re z <= 1/2, |z - 1| >= 1} with sides
/// (inf, i), (i, 0) paired by S and (0, rho), (rho, inf) paired by an order three rotation about rho.
inline SpecialPolygon level_one_polygon() {
    SpecialPolygon P;
    P.q = 1;
    P.interior = HPoint::interior(Rat(1, 4), Rat(4));
    HPoint i_pt = HPoint::interior(0, 1), rho = HPoint::interior(Rat(1, 2), Rat(3, 4));
    Mat2 S = Mat2::S(), R{0, 1, -1, 1};
    auto mk = [](HPoint v1, HPoint v2, Cusp e1, Cusp e2, Mat2 lab, int pair, SideKind k) {
        Side s;
        s.v1 = std::move(v1);
        s.v2 = std::move(v2);
        s.end1 = e1;
        s.end2 = e2;
        s.geo = geodesic_form(e1, e2);
        s.label = std::move(lab);
        s.pair = pair;
        s.kind = k;
        return s;
    };
    P.sides.push_back(mk(HPoint::infinity(), i_pt, Cusp::infinity(), Cusp(0, 1), S, 1, SideKind::Elliptic2));
    P.sides.push_back(mk(i_pt, HPoint::cusp(Cusp(0, 1)), Cusp::infinity(), Cusp(0, 1), S, 0, SideKind::Elliptic2));
    P.sides.push_back(mk(HPoint::cusp(Cusp(0, 1)), rho, Cusp(0, 1), Cusp(2, 1), R, 3, SideKind::Elliptic3));
    P.sides.push_back(mk(rho, HPoint::infinity(), Cusp(1, 2), Cusp::infinity(), R.inv(), 2, SideKind::Elliptic3));
    P.tiles.push_back({Mat2::identity(), true});
    return P;
}

inline SpecialPolygon polygon_for_level(long long q) {
    return q == 1 ? level_one_polygon() : special_polygon(farey_symbol(q));
}

struct LevelInvariants {
    long long g, e2, e3, n, N;
};

inline LevelInvariants invariants_of_level(long long q) {
    FareySymbol F = farey_symbol(q);
    return {F.genus(), F.e2(), F.e3(), F.n(), F.N()};
}

struct TOrbit {
    std::vector<int> members;  // j, t(j), t(t(j)), ...
    Mat2 product;              // alpha_j alpha_{t(j)} ...
};

inline std::vector<TOrbit> t_orbits(const SpecialPolygon& P) {
    std::vector<TOrbit> out;
    std::vector<bool> seen(P.N(), false);
    for (int j0 = 0; j0 < P.N(); ++j0) {
        if (seen[j0]) continue;
        TOrbit o;
        for (int j = j0; !seen[j]; j = P.t(j)) {
            seen[j] = true;
            o.members.push_back(j);
            o.product = o.product * P.label(j);
        }
        out.push_back(std::move(o));
    }
    return out;
}

/// Orbit of side index j under t, with the ordered product of labels.
inline TOrbit t_orbit_of(const SpecialPolygon& P, int j0) {
    TOrbit o;
    int j = j0;
    do {
        o.members.push_back(j);
        o.product = o.product * P.label(j);
        j = P.t(j);
    } while (j != j0);
    return o;
}

struct CanonicalSideForm {
    Mat2 gamma;
    long long v;
};

/// gamma_L W_q maps the hyperbolic side to the vertical line Re z = v/q.
inline CanonicalSideForm canonical_side_form(const SpecialPolygon& P, int j) {
    const Side& s = P.sides.at(j);
    if (s.kind != SideKind::Hyperbolic) throw std::domain_error("canonical_side_form: side is not hyperbolic");
    Int q = P.q;
    Int ai = s.gap_M.b, bi = s.gap_M.d, ai1 = s.gap_M.a, bi1 = s.gap_M.c;
    Int v = mod(bi * inv_mod(bi1, q), q);
    Mat2 g{ai1 * v - ai, (bi1 * v - bi) / q, ai1 * q, bi1};
    return {g, v.convert_to<long long>()};
}

/// Atkin-Lehner representative W = q1^{-1/2} [[alpha q1, beta], [gamma q, delta q1]] with alpha delta q1 - beta gamma q2 = 1.
struct AtkinLehner {
    long long q, q1, q2;
    Mat2 M;  // integer matrix of determinant q1

    std::array<double, 4> real_matrix() const {
        double s = std::sqrt(static_cast<double>(q1));
        auto m = M.to_ll();
        return {m[0] / s, m[1] / s, m[2] / s, m[3] / s};
    }
    /// r' = -r mod 2 q1 and r' = r mod 2 q2, returned in [0, 2q).
    Int act_on_r(const Int& r) const {
        for (Int x = 0; x < 2 * q; ++x)
            if (mod(x + r, 2 * q1) == 0 && mod(x - r, 2 * q2) == 0) return x;
        throw std::logic_error("atkin_lehner: no residue");
    }
    /// Image of a level q form: conjugates the attached embedding by W.
    Form act_on_form(const Form& f) const {
        Mat2 E{f.b, 2 * f.c, -2 * f.a, -f.b};
        Mat2 adj{M.d, -M.b, -M.c, M.a};
        Mat2 X = M * E * adj;
        Int s = q1;
        if (X.a % s != 0 || X.b % (2 * s) != 0 || X.c % (2 * s) != 0) throw std::logic_error("atkin_lehner: non-integral image");
        return {-X.c / (2 * s), X.a / s, X.b / (2 * s)};
    }
};

inline AtkinLehner atkin_lehner(long long q, long long q1) {
    if (q1 <= 0 || q % q1 != 0) throw std::domain_error("atkin_lehner: q1 must divide q");
    long long q2 = q / q1;
    if (std::gcd(q1, q2) != 1) throw std::domain_error("atkin_lehner: q1 and q/q1 must be coprime");
    if (q1 == 1) return {q, 1, q2, Mat2::identity()};
    if (q2 == 1) return {q, q1, 1, Mat2{0, -1, q, 0}};
    // alpha delta q1 - beta gamma q2 = 1 with gamma = 1: alpha = delta = ... via ext gcd on (q1, q2)
    Int x, y;
    ext_gcd(Int(q1), Int(q2), x, y);  // x q1 + y q2 = 1
    Int alpha = x, delta = 1, beta = -y, gamma = 1;
    return {q, q1, q2, Mat2{alpha * q1, beta, gamma * q, delta * q1}};
}

}  // namespace qorb

#endif
