#ifndef QORB_ORBIFOLD_HPP
#define QORB_ORBIFOLD_HPP

#include "farey_polygon.hpp"
#include "heegner_geodesics.hpp"

#include <complex>
#include <map>
#include <random>
#include <set>
#include <thread>

namespace qorb {

/// Exact Moebius action on an interior point with rational x and y^2.
inline HPoint mobius(const Mat2& m, const HPoint& z) {
    if (z.inf) return m.c == 0 ? HPoint::infinity() : HPoint::interior(Rat(m.a) / Rat(m.c), 0);
    if (!z.x.is_rational()) throw std::domain_error("mobius: irrational real part");
    Rat x = z.x.a, A(m.a), B(m.b), C(m.c), Dd(m.d);
    Rat n = (C * x + Dd) * (C * x + Dd) + C * C * z.y2;
    if (n == 0) return HPoint::infinity();
    return HPoint::interior(((A * x + B) * (C * x + Dd) + A * C * z.y2) / n, z.y2 / (n * n));
}

/// The order three rotation about rho carrying (0, rho, inf) to (inf, rho, 1).
inline Mat2 rotation_rho() { return {1, -1, 1, 0}; }

/// Sector translates h with P = union of h({0 <= x <= 1/2, |z - 1| >= 1}); one per coset of Gamma_0(q) in SL2(Z).
inline std::vector<Mat2> sector_translates(const SpecialPolygon& P) {
    std::vector<Mat2> out;
    Mat2 R = rotation_rho();
    for (const Tile& t : P.tiles) {
        out.push_back(t.M);
        if (!t.third) {
            out.push_back(t.M * R);
            out.push_back(t.M * R * R);
        }
    }
    return out;
}

inline long long coset_index(const Mat2& h, long long q) {
    if (q == 1) return 0;
    return detail::p1_index(mod(h.c, q).convert_to<long long>(), mod(h.d, q).convert_to<long long>(), q);
}

/// g with g z in the sector {0 <= x <= 1/2, |z - 1| >= 1}; exact.
inline Mat2 reduce_to_sector(HPoint& z) {
    Mat2 g;
    for (;;) {
        Rat x = z.x.a;
        Int n = floor_rat(x + Rat(1, 2));
        if (n != 0) {
            Mat2 t{1, -n, 0, 1};
            z = mobius(t, z);
            g = t * g;
        }
        if (z.x.a * z.x.a + z.y2 < 1) {
            z = mobius(Mat2::S(), z);
            g = Mat2::S() * g;
        } else {
            break;
        }
    }
    if (z.x.a < 0) {
        z = mobius(Mat2::S(), z);
        g = Mat2::S() * g;
    }
    return g;
}

/// Fixed circle of g signed to be positive on the left of the axis run from the repelling to the attracting end.
inline Form axis_form(const Mat2& g) { return fixed_circle(g.trace() < 0 ? g.neg() : g); }

/// Sign of a geodesic form at a vertex with zero read as positive, so a vertex on the geodesic is pushed to one side.
inline int tie_sign(const Form& f, const HPoint& v) {
    int s = form_sign_at(f, v);
    return s == 0 ? 1 : s;
}

/// Polygon sides met by the axis of g.
inline std::vector<int> crossing_sides(const SpecialPolygon& P, const Mat2& g) {
    Form f = axis_form(g);
    std::vector<int> out;
    for (int j = 0; j < P.N(); ++j)
        if (tie_sign(f, P.sides[j].v1) != tie_sign(f, P.sides[j].v2)) out.push_back(j);
    return out;
}

/// The crossing side through which the axis leaves the polygon: its repelling end lies on the polygon's side.
inline int exit_side(const SpecialPolygon& P, const Mat2& g) {
    auto cs = crossing_sides(P, g);
    if (cs.size() != 2) throw std::logic_error("exit_side: axis does not cross the polygon");
    HPoint rep = HPoint::real(repelling_attracting(g).first);
    int found = -1;
    for (int j : cs) {
        if (form_sign_at(P.sides[j].geo, rep) == P.inner_sign(j)) {
            if (found >= 0) throw std::logic_error("exit_side: ambiguous exit");
            found = j;
        }
    }
    if (found < 0) throw std::logic_error("exit_side: no exit");
    return found;
}

struct Positioned {
    Mat2 gamma;  // delta^{-1} gamma delta, axis through the polygon
    Mat2 delta;
};

/// Conjugates a hyperbolic gamma in Gamma_0(q) so that its axis crosses P.
inline Positioned position_in_polygon(const Mat2& gamma, const SpecialPolygon& P) {
    if (!gamma.hyperbolic()) throw std::domain_error("position_in_polygon: matrix not hyperbolic");
    if (P.q > 1 && mod(gamma.c, P.q) != 0) throw std::domain_error("position_in_polygon: not in Gamma_0(q)");
    auto crosses = [&](const Mat2& g) {
        if (crossing_sides(P, g).size() != 2) return false;
        try {
            exit_side(P, g);
        } catch (const std::logic_error&) {
            return false;
        }
        return true;
    };
    if (crosses(gamma)) return {gamma, Mat2{}};
    auto hs = sector_translates(P);
    std::map<long long, Mat2> by_coset;
    for (const Mat2& h : hs) by_coset.emplace(coset_index(h, P.q), h);
    Form f = fixed_circle(gamma);
    Rat cx = Rat(-f.b) / (2 * f.a), r2 = Rat(f.disc()) / (4 * f.a * f.a);
    // rational approximation of the radius to spread sample points along the axis
    Rat rad(Int(static_cast<long long>(std::sqrt(to_double(r2)) * (1LL << 40))), Int(1LL << 40));
    for (int k : {0, 1, -1, 3, -3, 5, -5, 7, -7}) {
        Rat t = rad * k / 8;
        if (t * t >= r2) continue;
        HPoint z = HPoint::interior(cx + t, r2 - t * t);
        Mat2 g = reduce_to_sector(z);
        Mat2 gi = g.inv();
        const Mat2& h = by_coset.at(coset_index(gi, P.q));
        Mat2 delta = gi * h.inv();
        Mat2 moved = delta.inv() * gamma * delta;
        if (crosses(moved)) return {moved, delta};
    }
    throw std::logic_error("position_in_polygon: no admissible sample point on the axis");
}

struct MorseCode {
    Mat2 gamma;             // positioned matrix
    std::vector<int> word;  // 0-based side indices, gamma = alpha_{word[0]} alpha_{word[1]} ...
    int m() const { return static_cast<int>(word.size()) - 1; }
};

/// Side crossing sequence of the axis through successive translates until the translate gamma P is reached.
inline MorseCode morse_code(const Mat2& gamma, const SpecialPolygon& P, std::size_t max_len = 1u << 20) {
    MorseCode mc;
    mc.gamma = gamma;
    Mat2 W, g = gamma;
    do {
        if (mc.word.size() >= max_len) throw std::runtime_error("morse_code: word length cap reached");
        int k = exit_side(P, g);
        mc.word.push_back(k);
        W = W * P.label(k);
        g = P.label(k).inv() * g * P.label(k);
    } while (!psl_equal(W, gamma));
    return mc;
}

inline Mat2 word_product(const MorseCode& mc, const SpecialPolygon& P) {
    Mat2 W;
    for (int k : mc.word) W = W * P.label(k);
    return W;
}

/// Indices strictly between i1 and i2 going anticlockwise (upwards mod N).
inline std::vector<int> arc(int i1, int i2, int N) {
    std::vector<int> out;
    if (i1 == i2) return out;
    for (int k = (i1 + 1) % N; k != i2; k = (k + 1) % N) out.push_back(k);
    return out;
}

/// The side's own label if elliptic, otherwise the half turn M S M^{-1} about the side, M its Farey gap matrix.
inline Mat2 sigma(const SpecialPolygon& P, int k) {
    const Side& s = P.sides[k];
    if (s.kind == SideKind::Elliptic2 || s.kind == SideKind::Elliptic3) return s.label;
    return s.gap_M * Mat2::S() * s.gap_M.inv();
}

struct BoundaryPiece {
    Mat2 prefix;  // the piece is prefix applied to polygon side `side`
    int side;
};

/// The part of the translate prefix P lying to the left of the axis.
struct Frame {
    Mat2 prefix;
    Mat2 local;  // prefix^{-1} gamma prefix; its axis crosses P
    int entry, exit;
};

struct BoundaryChain {
    std::vector<int> basis;              // hyperbolic sides j with j < pair(j)
    std::vector<long long> multiplicity; // per side index j < pair(j), all kinds
    std::vector<long long> homology;     // coefficients of the closed geodesic on the basis
    bool null_homologous() const;
};

struct OrbifoldDomain {
    long long q{};
    MorseCode code;
    Mat2 delta;  // input gamma = delta code.gamma delta^{-1}
    std::vector<Frame> frames;
    std::vector<BoundaryPiece> pieces;  // complete sides, frame by frame
    BoundaryPiece entry, exit;          // cut by the closed geodesic
    std::vector<Mat2> omega;            // one generator per cyclic subgroup
    int e2{}, e3{};

    /// Volume divided by pi.
    Rat volume_over_pi() const { return Rat(static_cast<long long>(omega.size())) + Rat(e3, 3); }
    double volume() const { return to_double(volume_over_pi()) * std::numbers::pi; }
    std::size_t complete_arcs() const { return pieces.size(); }
    std::size_t partial_arcs() const { return 2; }
};

namespace detail {

inline std::array<Int, 4> key(const Mat2& m) {
    Mat2 p = m.psl();
    return {p.a, p.b, p.c, p.d};
}

}  // namespace detail

inline OrbifoldDomain fundamental_domain_of_code(const MorseCode& mc, const SpecialPolygon& P, const Mat2& delta = {}) {
    OrbifoldDomain O;
    O.q = P.q;
    O.code = mc;
    O.delta = delta;
    const auto& w = mc.word;
    int L = static_cast<int>(w.size()), N = P.N();
    std::set<std::array<Int, 4>> seen;
    Mat2 W;
    for (int j = 0; j < L; ++j) {
        int entry = P.pair(w[(j + L - 1) % L]);
        O.frames.push_back({W, W.inv() * mc.gamma * W, entry, w[j]});
        for (int k : arc(w[j], entry, N)) {
            O.pieces.push_back({W, k});
            Mat2 s = W * sigma(P, k) * W.inv();
            auto k1 = detail::key(s), k2 = detail::key(s.inv());
            if (seen.count(k1) || seen.count(k2)) continue;
            seen.insert(k1);
            O.omega.push_back(s.psl());
            if (s.trace() == 0) {
                ++O.e2;
            } else if (s.abs_trace() == 1) {
                ++O.e3;
            } else {
                throw std::logic_error("omega element is not elliptic");
            }
        }
        W = W * P.label(w[j]);
    }
    int first_entry = P.pair(w.back());
    O.entry = {Mat2{}, first_entry};
    O.exit = {mc.gamma, first_entry};
    return O;
}

inline OrbifoldDomain fundamental_domain(const Mat2& gamma, const SpecialPolygon& P) {
    Positioned pos = position_in_polygon(gamma, P);
    return fundamental_domain_of_code(morse_code(pos.gamma, P), P, pos.delta);
}

inline bool BoundaryChain::null_homologous() const {
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (homology[i] + multiplicity[basis[i]] != 0) return false;
    return true;
}

/// Side pair {j, j*} with j < j* is the cycle C_j; a boundary piece on side j counts +1 towards it and one on j* counts -1.
inline BoundaryChain boundary_chain(const OrbifoldDomain& O, const SpecialPolygon& P) {
    BoundaryChain B;
    int N = P.N();
    B.multiplicity.assign(N, 0);
    auto rep = [&](int k) { return std::min(k, P.pair(k)); };
    auto sign = [&](int k) { return k < P.pair(k) ? 1 : (k > P.pair(k) ? -1 : 0); };
    for (int j = 0; j < N; ++j)
        if (P.sides[j].kind == SideKind::Hyperbolic && j < P.pair(j)) B.basis.push_back(j);
    for (const BoundaryPiece& p : O.pieces) B.multiplicity[rep(p.side)] += sign(p.side);
    B.homology.assign(B.basis.size(), 0);
    // a label alpha_k with k > k* is homologous to the chain of sides strictly between k* and k
    auto add_side = [&](int i, long long c) {
        if (P.sides[i].kind != SideKind::Hyperbolic) return;
        auto it = std::find(B.basis.begin(), B.basis.end(), rep(i));
        B.homology[it - B.basis.begin()] += c * sign(i);
    };
    for (int k : O.code.word) {
        int lo = std::min(k, P.pair(k)), hi = std::max(k, P.pair(k));
        long long c = k > P.pair(k) ? 1 : -1;
        for (int i = lo + 1; i < hi; ++i) add_side(i, c);
    }
    return B;
}

/// Hyperbolic area of the domain by sampling the exact measure on P's sector translates.
struct AreaEstimate {
    double area, stderr_;
};

namespace detail {

using Cpx = std::complex<double>;

inline Cpx mobius_d(const Mat2& m, Cpx z) {
    double a = to_double(m.a), b = to_double(m.b), c = to_double(m.c), d = to_double(m.d);
    return (a * z + b) / (c * z + d);
}

inline std::uint64_t shard_seed(std::uint64_t seed, unsigned shard) { return seed + 0x9e3779b97f4a7c15ULL * (shard + 1); }

/// Uniform hyperbolic sample of the sector {0 <= x <= 1/2, |z - 1| >= 1}.
template <class Rng>
Cpx sample_sector(Rng& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    // triangle (0, 1, inf): arcsine law in x, then 1/y uniform below 1/sqrt(x(1-x))
    double s = std::sin(std::numbers::pi * U(rng) / 2), x = s * s;
    double t = U(rng) / std::sqrt(x * (1 - x));
    Cpx z(x, 1 / t);
    if (x <= 0.5 && std::norm(z - 1.0) >= 1) return z;
    if (x >= 0.5 && std::norm(z) >= 1) return 1.0 / (1.0 - z);
    return (z - 1.0) / z;
}

}  // namespace detail

/// Number of frames of O whose part of the polygon contains the polygon point z, i.e. the covering multiplicity of
/// the domain at the image of z in Gamma_0(q)\H.
class CoverCounter {
public:
    explicit CoverCounter(const OrbifoldDomain& O) {
        for (const Frame& f : O.frames) {
            Form g = axis_form(f.local);
            lefts_.push_back({to_double(g.a), to_double(g.b), to_double(g.c)});
        }
    }
    int operator()(std::complex<double> z) const {
        double n2 = std::norm(z);
        int cnt = 0;
        for (const Lin& l : lefts_)
            if (l.a * n2 + l.b * z.real() + l.c > 0) ++cnt;
        return cnt;
    }
    std::size_t frames() const { return lefts_.size(); }

private:
    struct Lin {
        double a, b, c;
    };
    std::vector<Lin> lefts_;
};

inline AreaEstimate monte_carlo_area(const OrbifoldDomain& O, const SpecialPolygon& P, std::size_t samples, std::uint64_t seed,
                                     unsigned shards = 8) {
    auto hs = sector_translates(P);
    CoverCounter cover(O);
    std::vector<std::pair<double, double>> part(shards, {0.0, 0.0});
    auto work = [&](unsigned s) {
        std::mt19937_64 rng(detail::shard_seed(seed, s));
        std::size_t n = samples / shards + (s < samples % shards ? 1 : 0);
        double sum = 0, sum2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            detail::Cpx w = detail::sample_sector(rng);
            double cnt = 0;
            for (const Mat2& h : hs) cnt += cover(detail::mobius_d(h, w));
            sum += cnt;
            sum2 += cnt * cnt;
        }
        part[s] = {sum, sum2};
    };
    std::vector<std::thread> th;
    for (unsigned s = 0; s < shards; ++s) th.emplace_back(work, s);
    for (auto& t : th) t.join();
    double sum = 0, sum2 = 0;
    for (auto& p : part) {
        sum += p.first;
        sum2 += p.second;
    }
    double n = static_cast<double>(samples), mean = sum / n, var = sum2 / n - mean * mean;
    double unit = std::numbers::pi / 3;
    return {unit * mean, unit * std::sqrt(std::max(var, 0.0) / n)};
}

}  // namespace qorb

#endif
