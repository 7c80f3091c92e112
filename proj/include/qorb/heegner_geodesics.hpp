#ifndef QORB_HEEGNER_GEODESICS_HPP
#define QORB_HEEGNER_GEODESICS_HPP

#include "class_group.hpp"

#include <cmath>
#include <map>

namespace qorb {

/// Primitive form [a, b, c] of discriminant D with q | a and b = r mod 2q.
struct HeegnerForm {
    Form f;
    Int D, q, r;

    static HeegnerForm make(const Form& f, const Int& q, const Int& r) {
        if (f.content() != 1) throw std::domain_error("heegner form: not primitive");
        if (mod(f.a, q) != 0 || mod(f.b - r, 2 * q) != 0) throw std::domain_error("heegner form: wrong level or residue");
        return {f, f.disc(), q, r};
    }
};

inline void check_level_data(const Int& D, const Int& q, const Int& r) {
    if (q < 1) throw std::domain_error("level must be positive");
    if (mod(r * r - D, 4 * q) != 0) throw std::domain_error("r^2 != D mod 4q");
    for (const Int& p : prime_factors(q))
        if (kronecker(D, p) != 1) throw std::domain_error("every prime dividing q must split");
}

/// One level-q representative per narrow class: the first primitive form met scanning a = q a'
/// with a' = 1, -1, 2, -2, ... and b = r + 2qk, 0 <= k < |a'|. Indexed by class.
inline std::vector<HeegnerForm> heegner_forms_for_classes(const NarrowClassGroup& G, const Int& q, const Int& r) {
    check_level_data(G.D(), q, r);
    std::vector<HeegnerForm> out;
    std::map<std::size_t, Form> found;
    const Int& D = G.D();
    for (Int m = 1; found.size() < G.order(); ++m) {
        for (int s : {1, -1}) {
            Int a = s * m * q;
            for (Int k = 0; k < m; ++k) {
                Int b = r + 2 * q * k;
                if (mod(b * b - D, 4 * a) != 0) continue;
                Form f{a, b, (b * b - D) / (4 * a)};
                if (f.content() != 1) continue;
                found.emplace(level_class(G, q, r, f), f);
            }
        }
    }
    for (std::size_t A = 0; A < G.order(); ++A) out.push_back(HeegnerForm::make(found.at(A), q, r));
    return out;
}

/// Psi(x + y sqrt D) = [[x + b y, 2 c y], [-2 a y, x - b y]].
struct RatMat2 {
    Rat a, b, c, d;
    friend RatMat2 operator*(const RatMat2& x, const RatMat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const RatMat2& x, const RatMat2& y) { return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d; }
};

inline RatMat2 embedding_matrix(const Form& Q, const QuadIrr& z) {
    Rat x = z.a, y = z.b;
    return {x + Rat(Q.b) * y, 2 * Rat(Q.c) * y, -2 * Rat(Q.a) * y, x - Rat(Q.b) * y};
}

inline Mat2 gamma_Q(const Form& Q) {
    PellUnit e = fundamental_unit(Q.disc());
    RatMat2 m = embedding_matrix(Q, e.eps());
    for (const Rat* x : {&m.a, &m.b, &m.c, &m.d})
        if (den(*x) != 1) throw std::logic_error("gamma_Q: non-integral automorph");
    return {num(m.a), num(m.b), num(m.c), num(m.d)};
}

/// Q o gamma, so that gamma^{-1} gamma_Q gamma is the automorph of the result.
inline Form act(const Form& Q, const Mat2& g) {
    return {Q.a * g.a * g.a + Q.b * g.a * g.c + Q.c * g.c * g.c,
            2 * Q.a * g.a * g.b + Q.b * (g.a * g.d + g.b * g.c) + 2 * Q.c * g.c * g.d,
            Q.a * g.b * g.b + Q.b * g.b * g.d + Q.c * g.d * g.d};
}

/// Fixed semicircle A|z|^2 + B x + C = 0 of a hyperbolic matrix, read off c z^2 + (d - a) z - b.
inline Form fixed_circle(const Mat2& g) {
    Form f{g.c, g.d - g.a, -g.b};
    Int h = f.content();
    return {f.a / h, f.b / h, f.c / h};
}

struct GeodesicData {
    Form form;
    QuadIrr start, end;  // repelling and attracting endpoints
    Rat top_x, top_y2;   // z_Q = top_x + i sqrt(top_y2)
    Mat2 automorph;
    bool anticlockwise;

    double length() const {
        PellUnit e = fundamental_unit(form.disc());
        return 2 * e.log_eps();
    }
};

/// Oriented closed geodesic of Q: from (-b + sqrt D)/2a to (-b - sqrt D)/2a, based at the top of the semicircle.
inline GeodesicData closed_geodesic(const Form& Q) {
    Int D = Q.disc();
    if (Q.a == 0) throw std::domain_error("closed_geodesic: a must be nonzero");
    QuadIrr plus(Rat(-Q.b) / (2 * Q.a), Rat(1) / (2 * Q.a), D);
    GeodesicData g;
    g.form = Q;
    g.start = plus;
    g.end = plus.conj();
    g.top_x = Rat(-Q.b) / (2 * Q.a);
    g.top_y2 = Rat(D) / (4 * Q.a * Q.a);
    g.automorph = gamma_Q(Q);
    g.anticlockwise = Q.a > 0;
    return g;
}

/// Repelling and attracting fixed points of a hyperbolic matrix, in the field of its primitive fixed circle.
inline std::pair<QuadIrr, QuadIrr> repelling_attracting(const Mat2& g) {
    if (!g.hyperbolic()) throw std::domain_error("repelling_attracting: matrix not hyperbolic");
    if (g.c == 0) throw std::domain_error("repelling_attracting: fixes infinity");
    Form f = fixed_circle(g);
    QuadIrr p(Rat(-f.b) / (2 * f.a), Rat(1) / (2 * f.a), f.disc()), m = p.conj();
    // the derivative at a fixed point is (c z + d)^{-2}
    QuadIrr dp = QuadIrr(Rat(g.c)) * p + QuadIrr(Rat(g.d));
    bool p_attracts = (dp * dp - QuadIrr(Rat(1))).sign() > 0;
    return p_attracts ? std::make_pair(m, p) : std::make_pair(p, m);
}

}  // namespace qorb

#endif
