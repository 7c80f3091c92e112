#ifndef QORB_CLASS_GROUP_HPP
#define QORB_CLASS_GROUP_HPP

#include "quad_arith.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

namespace qorb {

namespace detail {

inline bool lt_sqrt(const Int& x, const Int& D) { return x < 0 || x * x < D; }  // x < sqrt(D), D nonsquare
inline bool gt_sqrt(const Int& x, const Int& D) { return x > 0 && x * x > D; }

}  // namespace detail

/// b moved into the standard window modulo 2a (forms of nonsquare discriminant D > 0).
inline Form normalise_form(const Form& f) {
    Int D = f.disc();
    Int A = iabs(f.a), m = 2 * A, b;
    if (detail::lt_sqrt(A, D)) {
        Int s = isqrt(D);
        b = f.b + m * floor_div(s - f.b, m);
    } else {
        b = mod(f.b + A - 1, m) - A + 1;
    }
    Int c = (b * b - D) / (4 * f.a);
    return {f.a, b, c};
}

inline bool is_reduced(const Form& f) {
    Int D = f.disc(), A2 = 2 * iabs(f.a);
    return f.b > 0 && detail::lt_sqrt(f.b, D) && detail::gt_sqrt(A2 + f.b, D) && detail::lt_sqrt(A2 - f.b, D);
}

/// One reduction step (c, -b, a) followed by normalisation; an SL2(Z) equivalence.
inline Form rho(const Form& f) { return normalise_form({f.c, -f.b, f.a}); }

inline Form reduce_form(Form f) {
    f = normalise_form(f);
    for (int guard = 0; !is_reduced(f); ++guard) {
        if (guard > 100000) throw std::runtime_error("reduce_form: no convergence");
        f = rho(f);
    }
    return f;
}

inline std::vector<Form> reduction_cycle(const Form& reduced) {
    std::vector<Form> cyc{reduced};
    for (Form g = rho(reduced); g != reduced; g = rho(g)) cyc.push_back(g);
    return cyc;
}

/// Least (a,b) with a > 0 on the cycle if any, otherwise least (|a|, b).
inline Form canonical_rep(const std::vector<Form>& cyc) {
    std::optional<Form> best;
    auto key = [](const Form& f) { return std::make_pair(iabs(f.a), f.b); };
    for (const Form& f : cyc) {
        if (f.a <= 0) continue;
        if (!best || key(f) < key(*best)) best = f;
    }
    if (best) return *best;
    for (const Form& f : cyc)
        if (!best || key(f) < key(*best)) best = f;
    return *best;
}

/// Dirichlet composition; the second form is first moved to represent a value coprime to a1.
inline Form compose_forms(const Form& f1, const Form& f2) {
    Int D = f1.disc();
    if (f2.disc() != D) throw std::domain_error("compose_forms: discriminants differ");
    Form g = f2;
    if (gcd(f1.a, g.a) != 1) {
        bool found = false;
        for (long long s = 1; s < 200 && !found; ++s) {
            for (long long x = -s; x <= s && !found; ++x) {
                for (long long y : {s - std::llabs(x), -(s - std::llabs(x))}) {
                    if (gcd(Int(x), Int(y)) != 1) continue;
                    Int m = f2.a * x * x + f2.b * x * y + f2.c * y * y;
                    if (m == 0 || gcd(m, f1.a) != 1) continue;
                    Int u, v;
                    ext_gcd(Int(x), Int(y), u, v);  // x u + y v = 1; matrix [[x, -v], [y, u]]
                    Int X = x, Y = y, S = -v, T = u;
                    Int a = f2.a * X * X + f2.b * X * Y + f2.c * Y * Y;
                    Int b = 2 * f2.a * X * S + f2.b * (X * T + Y * S) + 2 * f2.c * Y * T;
                    Int c = f2.a * S * S + f2.b * S * T + f2.c * T * T;
                    g = {a, b, c};
                    found = true;
                    break;
                }
            }
        }
        if (!found) throw std::runtime_error("compose_forms: no coprime value found");
    }
    Int a1 = f1.a, a2 = g.a, m2 = iabs(a2);
    Int k = m2 == 1 ? Int(0) : mod(inv_mod(mod(a1, m2), m2) * ((g.b - f1.b) / 2), m2);
    Int b3 = f1.b + 2 * a1 * k;
    Int a3 = a1 * a2;
    Int c3 = (b3 * b3 - D) / (4 * a3);
    return {a3, b3, c3};
}

/// Narrow class group of a fundamental discriminant D > 0 realised on SL2(Z)-classes of primitive forms.
class NarrowClassGroup {
public:
    static constexpr std::size_t kMaxOrder = 10000;

    explicit NarrowClassGroup(const Int& D) : D_(D) {
        if (!is_fundamental_discriminant(D) || D <= 0) throw std::domain_error("narrow_class_group: D must be a positive fundamental discriminant");
        enumerate_classes();
        build_structure();
    }

    const Int& D() const { return D_; }
    std::size_t order() const { return reps_.size(); }
    const std::vector<Form>& reps() const { return reps_; }
    const Form& rep(std::size_t i) const { return reps_[i]; }
    std::size_t identity() const { return 0; }

    std::size_t class_of(const Form& f) const {
        if (f.disc() != D_ || f.content() != 1) throw std::domain_error("class_of: not a primitive form of this discriminant");
        auto it = index_.find(reduce_form(f));
        if (it == index_.end()) throw std::logic_error("class_of: reduced form not enumerated");
        return it->second;
    }

    /// Invariant factors d_1 | d_2 | ... (trivial factors dropped).
    const std::vector<long long>& invariants() const { return inv_; }
    const std::vector<long long>& coords(std::size_t i) const { return coords_[i]; }

    std::size_t mul(std::size_t i, std::size_t j) const {
        std::vector<long long> y(inv_.size());
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = (coords_[i][k] + coords_[j][k]) % inv_[k];
        return from_coords(y);
    }
    std::size_t inverse(std::size_t i) const {
        std::vector<long long> y(inv_.size());
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = (inv_[k] - coords_[i][k]) % inv_[k];
        return from_coords(y);
    }
    std::size_t from_coords(const std::vector<long long>& y) const {
        long long code = 0;
        for (std::size_t k = 0; k < y.size(); ++k) code = code * inv_[k] + y[k];
        return by_code_[static_cast<std::size_t>(code)];
    }

    std::vector<std::vector<std::size_t>> cayley() const {
        std::vector<std::vector<std::size_t>> t(order(), std::vector<std::size_t>(order()));
        for (std::size_t i = 0; i < order(); ++i)
            for (std::size_t j = 0; j < order(); ++j) t[i][j] = mul(i, j);
        return t;
    }

    /// The principal form [1, b0, (b0^2 - D)/4].
    Form principal_form() const {
        Int b0 = mod(D_, 2);
        return {1, b0, (b0 * b0 - D_) / 4};
    }

    /// Class of the different (sqrt D), represented by [-1, b0, (D - b0^2)/4].
    std::size_t class_J() const {
        Int b0 = mod(D_, 2);
        return class_of({-1, b0, (D_ - b0 * b0) / 4});
    }

private:
    void enumerate_classes() {
        Int s = isqrt(D_);
        std::vector<Form> reduced;
        for (Int b = mod(D_, 2) == 0 ? Int(2) : Int(1); b <= s; b += 2) {
            Int n = (D_ - b * b) / 4;  // a c = -n
            for (Int A = 1; A <= n; ++A) {
                if (n % A != 0) continue;
                for (int sg : {1, -1}) {
                    Form f{sg * A, b, -n / (sg * A)};
                    if (f.content() == 1 && is_reduced(f)) reduced.push_back(f);
                }
            }
        }
        std::vector<std::vector<Form>> cycles;
        std::map<Form, std::size_t> seen;
        for (const Form& f : reduced) {
            if (seen.count(f)) continue;
            auto cyc = reduction_cycle(f);
            for (const Form& g : cyc) seen[g] = cycles.size();
            cycles.push_back(std::move(cyc));
            if (cycles.size() > kMaxOrder) throw std::length_error("narrow_class_group: order exceeds cap");
        }
        std::vector<std::pair<Form, std::size_t>> canon;
        for (std::size_t i = 0; i < cycles.size(); ++i) canon.emplace_back(canonical_rep(cycles[i]), i);
        std::size_t principal = seen.at(reduce_form(principal_form()));
        auto key = [&](const std::pair<Form, std::size_t>& p) {
            return std::make_tuple(p.second != principal, p.first.a <= 0, iabs(p.first.a), p.first.b);
        };
        std::sort(canon.begin(), canon.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
        std::vector<std::size_t> relabel(cycles.size());
        for (std::size_t i = 0; i < canon.size(); ++i) {
            reps_.push_back(canon[i].first);
            relabel[canon[i].second] = i;
        }
        for (auto& [f, c] : seen) index_[f] = relabel[c];
    }

    // Greedy generators with relations, then Smith normal form of the relation matrix.
    void build_structure() {
        std::size_t h = order();
        std::vector<std::vector<long long>> x(h);  // coordinates in the greedy generators
        std::vector<bool> in_span(h, false);
        std::vector<std::size_t> span{0};
        in_span[0] = true;
        std::vector<std::vector<long long>> rel;
        auto compose_idx = [&](std::size_t i, std::size_t j) { return class_of(compose_forms(reps_[i], reps_[j])); };
        for (std::size_t g = 1; g < h; ++g) {
            if (in_span[g]) continue;
            std::size_t k = rel.size();
            for (std::size_t s : span) x[s].resize(k + 1, 0);
            std::vector<std::size_t> added;
            std::size_t p = g;
            long long e = 1;
            while (!in_span[p]) {
                for (std::size_t s : span) {
                    std::size_t t = compose_idx(s, p);
                    x[t] = x[s];
                    x[t][k] = e;
                    added.push_back(t);
                }
                p = compose_idx(p, g);
                ++e;
            }
            std::vector<long long> r(k + 1, 0);
            for (std::size_t i = 0; i < k; ++i) r[i] = -x[p][i];
            r[k] = e;
            for (auto& row : rel) row.resize(k + 1, 0);
            rel.push_back(r);
            for (std::size_t t : added) {
                in_span[t] = true;
                span.push_back(t);
            }
        }
        smith(x, rel);
    }

    void smith(const std::vector<std::vector<long long>>& x, std::vector<std::vector<long long>> R) {
        std::size_t k = R.size();
        std::vector<std::vector<long long>> V(k, std::vector<long long>(k, 0));
        for (std::size_t i = 0; i < k; ++i) V[i][i] = 1;
        auto colop = [&](std::size_t dst, std::size_t src, long long f) {  // col dst -= f * col src
            for (auto& row : R) row[dst] -= f * row[src];
            for (auto& row : V) row[dst] -= f * row[src];
        };
        auto colswap = [&](std::size_t i, std::size_t j) {
            for (auto& row : R) std::swap(row[i], row[j]);
            for (auto& row : V) std::swap(row[i], row[j]);
        };
        for (std::size_t t = 0; t < k; ++t) {
            while (true) {
                // pivot: smallest nonzero absolute entry in the lower-right block
                std::size_t pi = k, pj = k;
                for (std::size_t i = t; i < k; ++i)
                    for (std::size_t j = t; j < k; ++j)
                        if (R[i][j] != 0 && (pi == k || std::llabs(R[i][j]) < std::llabs(R[pi][pj]))) {
                            pi = i;
                            pj = j;
                        }
                if (pi == k) break;
                std::swap(R[t], R[pi]);
                colswap(t, pj);
                bool done = true;
                for (std::size_t i = t + 1; i < k; ++i) {
                    long long f = R[i][t] / R[t][t];
                    for (std::size_t j = 0; j < k; ++j) R[i][j] -= f * R[t][j];
                    if (R[i][t] != 0) done = false;
                }
                for (std::size_t j = t + 1; j < k; ++j) {
                    long long f = R[t][j] / R[t][t];
                    colop(j, t, f);
                    if (R[t][j] != 0) done = false;
                }
                if (!done) continue;
                bool divides = true;
                for (std::size_t i = t + 1; i < k && divides; ++i)
                    for (std::size_t j = t + 1; j < k; ++j)
                        if (R[i][j] % R[t][t] != 0) {
                            for (std::size_t jj = 0; jj < k; ++jj) R[t][jj] += R[i][jj];
                            divides = false;
                            break;
                        }
                if (divides) break;
            }
        }
        std::vector<long long> d(k);
        for (std::size_t i = 0; i < k; ++i) d[i] = std::llabs(R[i][i]);
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < k; ++i)
            if (d[i] > 1) keep.push_back(i);
        std::sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
        for (std::size_t i : keep) inv_.push_back(d[i]);
        coords_.assign(order(), {});
        long long total = 1;
        for (long long v : inv_) total *= v;
        if (static_cast<std::size_t>(total) != order()) throw std::logic_error("class group structure: order mismatch");
        by_code_.assign(order(), 0);
        for (std::size_t a = 0; a < order(); ++a) {
            std::vector<long long> xa = x[a];
            xa.resize(k, 0);
            std::vector<long long> y;
            for (std::size_t i : keep) {
                long long s = 0;
                for (std::size_t j = 0; j < k; ++j) s += xa[j] * V[j][i];
                y.push_back(((s % d[i]) + d[i]) % d[i]);
            }
            coords_[a] = y;
            long long code = 0;
            for (std::size_t t = 0; t < y.size(); ++t) code = code * inv_[t] + y[t];
            by_code_[static_cast<std::size_t>(code)] = a;
        }
    }

    Int D_;
    std::vector<Form> reps_;
    std::map<Form, std::size_t> index_;
    std::vector<long long> inv_;
    std::vector<std::vector<long long>> coords_;
    std::vector<std::size_t> by_code_;
};

/// Character with values exp(2 pi i e(A)), e(A) stored in Q/Z.
struct ClassCharacter {
    std::vector<Rat> exps;
    std::optional<std::pair<Int, Int>> genus_pair;  // (D1, D2), D1 <= D2

    std::complex<double> operator()(std::size_t cls) const {
        double th = 2 * std::numbers::pi * to_double(exps[cls]);
        return {std::cos(th), std::sin(th)};
    }
    bool is_real() const {
        return std::all_of(exps.begin(), exps.end(), [](const Rat& e) { return den(e) <= 2; });
    }
    int real_value(std::size_t cls) const { return exps[cls] == 0 ? 1 : -1; }
    bool trivial() const {
        return std::all_of(exps.begin(), exps.end(), [](const Rat& e) { return e == 0; });
    }
};

inline Rat frac_part(const Rat& x) { return x - Rat(floor_rat(x)); }

inline std::vector<ClassCharacter> characters(const NarrowClassGroup& G) {
    const auto& d = G.invariants();
    std::vector<ClassCharacter> out;
    std::vector<long long> m(d.size(), 0);
    while (true) {
        ClassCharacter chi;
        for (std::size_t a = 0; a < G.order(); ++a) {
            Rat e = 0;
            for (std::size_t i = 0; i < d.size(); ++i) e += Rat(m[i] * G.coords(a)[i], d[i]);
            chi.exps.push_back(frac_part(e));
        }
        out.push_back(std::move(chi));
        std::size_t i = 0;
        while (i < d.size() && ++m[i] == d[i]) m[i++] = 0;
        if (i == d.size()) break;
    }
    return out;
}

/// Unordered factorisations D = D1 D2 into fundamental discriminants (1 allowed), D1 <= D2.
inline std::vector<std::pair<Int, Int>> genus_factorisations(const Int& D) {
    std::vector<std::pair<Int, Int>> out;
    auto ok = [](const Int& x) { return x == 1 || is_fundamental_discriminant(x); };
    for (Int d = 1; d * d <= D * D && d <= D; ++d) {
        if (D % d != 0) continue;
        for (int sg : {1, -1}) {
            Int D1 = sg * d, D2 = D / D1;
            if (D1 <= D2 && ok(D1) && ok(D2)) out.emplace_back(D1, D2);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Some value m = f(x, y), gcd(x, y) = 1, with gcd(m, n) = 1.
inline Int coprime_value(const Form& f, const Int& n) {
    for (long long s = 1; s < 1000; ++s)
        for (long long x = -s; x <= s; ++x)
            for (long long y : {s - std::llabs(x), -(s - std::llabs(x))}) {
                if (gcd(Int(x), Int(y)) != 1) continue;
                Int m = f.a * x * x + f.b * x * y + f.c * y * y;
                if (m != 0 && gcd(m, n) == 1) return m;
            }
    throw std::runtime_error("coprime_value: search exhausted");
}

/// Genus characters A -> kronecker(D1, m) with m represented by A and coprime to D.
inline std::vector<ClassCharacter> genus_characters(const NarrowClassGroup& G) {
    std::vector<ClassCharacter> out;
    for (auto [D1, D2] : genus_factorisations(G.D())) {
        ClassCharacter chi;
        chi.genus_pair = std::make_pair(D1, D2);
        for (const Form& f : G.reps()) {
            Int m = coprime_value(f, G.D());
            chi.exps.push_back(kronecker(D1, m) == 1 ? Rat(0) : Rat(1, 2));
        }
        out.push_back(std::move(chi));
    }
    return out;
}

/// All residues r modulo 2q with r^2 = D mod 4q.
inline std::vector<Int> residues_r(const Int& D, const Int& q) {
    std::vector<Int> out;
    for (Int r = 0; r < 2 * q; ++r)
        if (mod(r * r - D, 4 * q) == 0) out.push_back(r);
    return out;
}

/// Z-basis [alpha1, alpha2] of a fractional ideal, oriented so that alpha1 s(alpha2) - alpha2 s(alpha1) > 0.
struct OrientedIdeal {
    QuadIrr alpha1, alpha2;
    Int D;

    /// Norm of the lattice: (alpha1 s(alpha2) - alpha2 s(alpha1)) / sqrt D.
    Rat norm() const {
        QuadIrr w = alpha1 * alpha2.conj() - alpha2 * alpha1.conj();
        return w.b;
    }
};

inline OrientedIdeal ideal_of_form(const Form& f) {
    Int D = f.disc();
    if (f.content() != 1) throw std::domain_error("ideal_of_form: form not primitive");
    if (f.a > 0) return {QuadIrr(Rat(f.a)), QuadIrr(Rat(f.b, 2), Rat(-1, 2), D), D};
    return {QuadIrr(0, Rat(-f.a), D), QuadIrr(Rat(D, 2), Rat(-f.b, 2), D), D};
}

inline Form form_of_ideal(const OrientedIdeal& I) {
    Rat n = I.norm();
    if (n <= 0) throw std::domain_error("form_of_ideal: basis not positively oriented");
    Rat a = I.alpha1.norm() / n, c = I.alpha2.norm() / n, b = (I.alpha1 * I.alpha2.conj()).trace() / n;
    if (den(a) != 1 || den(b) != 1 || den(c) != 1) throw std::domain_error("form_of_ideal: non-integral form");
    return {num(a), num(b), num(c)};
}

/// Class of the module Z l + Z (r - sqrt D)/2 for l | q.
inline std::size_t class_of_l(const NarrowClassGroup& G, const Int& q, const Int& r, const Int& l) {
    const Int& D = G.D();
    if (l <= 0 || q % l != 0) throw std::domain_error("class_of_l: l must divide q");
    if (mod(r * r - D, 4 * q) != 0) throw std::domain_error("class_of_l: r^2 != D mod 4q");
    return G.class_of({l, r, (r * r - D) / (4 * l)});
}

/// Narrow class attached to a level-q form: its ideal class divided by the class of Z q + Z (r - sqrt D)/2,
/// so that [q, r, (r^2 - D)/4q] is principal.
inline std::size_t level_class(const NarrowClassGroup& G, const Int& q, const Int& r, const Form& f) {
    if (mod(f.a, q) != 0 || mod(f.b - r, 2 * q) != 0) throw std::domain_error("level_class: form is not of level q with residue r");
    return G.mul(G.class_of(f), G.inverse(class_of_l(G, q, r, q)));
}

}  // namespace qorb

#endif
