#ifndef QORB_EXPERIMENTS_HPP
#define QORB_EXPERIMENTS_HPP

#include "orbifold.hpp"

#include <climits>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>

namespace qorb {

using Cpx = std::complex<double>;

struct PointReduction {
    long long coset;  // P^1(F_q) index of the coset of gamma^{-1}
    Cpx rep;          // gamma z, in the sector {0 <= x <= 1/2, |z - 1| >= 1}
    Mat2 gamma;
};

/// Floating point counterpart of reduce_to_sector, recording the coset of Gamma_0(q) whose translate of the sector holds z.
inline PointReduction reduce_point(Cpx z, long long q) {
    if (!(z.imag() > 0)) throw std::domain_error("reduce_point: Im z must be positive");
    if (q < 1) throw std::domain_error("reduce_point: level must be positive");
    Mat2 g;
    for (int it = 0;; ++it) {
        if (it > 10000) throw std::runtime_error("reduce_point: no convergence");
        double n = std::floor(z.real() + 0.5);
        if (n != 0) {
            z -= n;
            g = Mat2{1, Int(static_cast<long long>(-n)), 0, 1} * g;
        }
        if (std::norm(z) < 1) {
            z = -1.0 / z;
            g = Mat2::S() * g;
        } else {
            break;
        }
    }
    if (z.real() < 0) {
        z = -1.0 / z;
        g = Mat2::S() * g;
    }
    return {coset_index(g.inv(), q), z, g};
}

/// "(c:1)" for c < q and "(1:0)" for q.
inline std::string coset_label(long long idx, long long q) {
    return idx == q ? std::string("(1:0)") : "(" + std::to_string(idx) + ":1)";
}

struct ExperimentConfig {
    long long q{11};
    std::vector<long long> D{12, 92, 188, 284, 412, 812, 1112, 2828};
    std::optional<long long> r;  // default: the least residue with r^2 = D mod 4q
    std::string selector{"all"}; // "all" or "principal-genus"
    std::size_t samples{200000};
    std::uint64_t seed{1};
    unsigned shards{8};
};

struct CosetMassTable {
    long long q{};
    long long D{}, r{};
    std::string selector;
    std::size_t classes{}, samples{};
    std::uint64_t seed{};
    double total_volume{};  // exact sum of the domain volumes
    std::vector<std::string> coset_ids;
    std::vector<double> masses, sigmas;
    double mass_sum{}, sum_sigma{}, deviation{};

    long long nu() const { return static_cast<long long>(masses.size()); }
    bool sum_within_3sigma() const { return std::abs(mass_sum - 1) <= 3 * sum_sigma; }
    bool masses_in_unit_interval() const {
        return std::all_of(masses.begin(), masses.end(), [](double m) { return m >= 0 && m <= 1; });
    }
};

struct EquidistributionResult {
    std::vector<CosetMassTable> tables;
    std::vector<std::string> warnings;
};

inline bool splits_at(long long D, long long q) {
    for (const Int& p : prime_factors(Int(q)))
        if (kronecker(Int(D), p) != 1) return false;
    return true;
}

/// Classes in the principal genus, i.e. the squares.
inline std::set<std::size_t> principal_genus(const NarrowClassGroup& G) {
    std::set<std::size_t> sq;
    for (std::size_t c = 0; c < G.order(); ++c) sq.insert(G.mul(c, c));
    return sq;
}

inline std::vector<std::size_t> select_classes(const NarrowClassGroup& G, const std::string& selector) {
    std::vector<std::size_t> out;
    if (selector == "all") {
        for (std::size_t c = 0; c < G.order(); ++c) out.push_back(c);
    } else if (selector == "principal-genus") {
        auto sq = principal_genus(G);
        out.assign(sq.begin(), sq.end());
    } else {
        throw std::domain_error("unknown class selector '" + selector + "'");
    }
    return out;
}

namespace detail {

/// Runs work(shard, rng, count) on seeded shards in parallel; results are combined by the caller in shard order.
template <class Work>
void run_shards(std::size_t samples, std::uint64_t seed, unsigned shards, Work work) {
    std::vector<std::thread> th;
    for (unsigned s = 0; s < shards; ++s)
        th.emplace_back([&, s] {
            std::mt19937_64 rng(shard_seed(seed, s));
            work(s, rng, samples / shards + (s < samples % shards ? 1 : 0));
        });
    for (auto& t : th) t.join();
}

}  // namespace detail

/// Coset masses of the union of F_A(q) over the selected classes: the share of the total volume lying in each
/// translate of the standard sector, one translate per coset of Gamma_0(q) in the modular group.
inline CosetMassTable coset_masses(const NarrowClassGroup& G, long long q, const Int& r, const std::string& selector,
                                   std::size_t samples, std::uint64_t seed, unsigned shards = 8) {
    if (samples == 0 || shards == 0) throw std::domain_error("coset_masses: need samples and shards");
    check_level_data(G.D(), Int(q), r);
    SpecialPolygon P = polygon_for_level(q);
    auto forms = heegner_forms_for_classes(G, Int(q), r);
    auto chosen = select_classes(G, selector);
    std::vector<CoverCounter> covers;
    Rat vol_over_pi = 0;
    for (std::size_t c : chosen) {
        OrbifoldDomain O = fundamental_domain(gamma_Q(forms[c].f), P);
        vol_over_pi += O.volume_over_pi();
        covers.emplace_back(O);
    }
    std::vector<Mat2> hs = sector_translates(P);
    std::size_t nu = hs.size();
    std::vector<long long> ids(nu);
    for (std::size_t k = 0; k < nu; ++k) ids[k] = coset_index(hs[k], q);

    // per shard: sum and sum of squares of the count in each translate, then of the total count
    std::vector<std::vector<double>> part(shards, std::vector<double>(2 * nu + 2, 0.0));
    detail::run_shards(samples, seed, shards, [&](unsigned s, std::mt19937_64& rng, std::size_t n) {
        auto& acc = part[s];
        for (std::size_t i = 0; i < n; ++i) {
            Cpx w = detail::sample_sector(rng);
            double tot = 0;
            for (std::size_t k = 0; k < nu; ++k) {
                Cpx z = detail::mobius_d(hs[k], w);
                double c = 0;
                for (const CoverCounter& cov : covers) c += cov(z);
                acc[2 * k] += c;
                acc[2 * k + 1] += c * c;
                tot += c;
            }
            acc[2 * nu] += tot;
            acc[2 * nu + 1] += tot * tot;
        }
    });
    std::vector<double> acc(2 * nu + 2, 0.0);
    for (const auto& p : part)
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += p[i];

    CosetMassTable T;
    T.q = q;
    T.D = G.D().convert_to<long long>();
    T.r = r.convert_to<long long>();
    T.selector = selector;
    T.classes = chosen.size();
    T.samples = samples;
    T.seed = seed;
    T.total_volume = to_double(vol_over_pi) * std::numbers::pi;
    double n = static_cast<double>(samples), unit = std::numbers::pi / 3 / T.total_volume;
    auto mean_sigma = [&](std::size_t i) {
        double m = acc[i] / n, v = std::max(acc[i + 1] / n - m * m, 0.0);
        return std::pair{unit * m, unit * std::sqrt(v / n)};
    };
    // order rows by coset index
    std::vector<std::size_t> order(nu);
    for (std::size_t k = 0; k < nu; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return ids[x] < ids[y]; });
    for (std::size_t k : order) {
        auto [m, s] = mean_sigma(2 * k);
        T.coset_ids.push_back(coset_label(ids[k], q));
        T.masses.push_back(m);
        T.sigmas.push_back(s);
        T.deviation = std::max(T.deviation, std::abs(static_cast<double>(nu) * m - 1));
    }
    std::tie(T.mass_sum, T.sum_sigma) = mean_sigma(2 * nu);
    return T;
}

inline EquidistributionResult equidistribute(const ExperimentConfig& cfg) {
    EquidistributionResult R;
    for (long long D : cfg.D) {
        if (!is_fundamental_discriminant(Int(D)) || D <= 0) {
            R.warnings.push_back("D = " + std::to_string(D) + " is not a positive fundamental discriminant; skipped");
            continue;
        }
        if (!splits_at(D, cfg.q)) {
            R.warnings.push_back("D = " + std::to_string(D) + " does not split at q = " + std::to_string(cfg.q) + "; skipped");
            continue;
        }
        Int r = cfg.r ? Int(*cfg.r) : residues_r(Int(D), Int(cfg.q)).front();
        NarrowClassGroup G{Int(D)};
        R.tables.push_back(coset_masses(G, cfg.q, r, cfg.selector, cfg.samples, cfg.seed, cfg.shards));
    }
    return R;
}

inline std::string format_double(double x, int digits = 10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

/// One row per coset: D,q,r,selector,coset,mass,sigma,nu_mass_minus_one.
inline std::string mass_tables_csv(const std::vector<CosetMassTable>& tables, int digits = 10) {
    std::string out = "D,q,r,selector,coset,mass,sigma,nu_mass_minus_one\n";
    for (const CosetMassTable& T : tables)
        for (std::size_t k = 0; k < T.masses.size(); ++k)
            out += std::to_string(T.D) + "," + std::to_string(T.q) + "," + std::to_string(T.r) + "," + T.selector + ",\"" +
                   T.coset_ids[k] + "\"," + format_double(T.masses[k], digits) + "," + format_double(T.sigmas[k], digits) +
                   "," + format_double(static_cast<double>(T.nu()) * T.masses[k] - 1, digits) + "\n";
    return out;
}

struct ComplementPair {
    std::size_t cls{}, partner{};  // partner = class of [-a, -b, -c]
    Form form, complement;
    bool partner_is_J_over_class{};
    long long frames{}, partner_frames{};        // word lengths of the two geodesics
    int multiplicity_min{}, multiplicity_max{};  // of m_A + m_partner over the samples
    double sampled_sum_over_unit{};              // (vol F_A + vol F_partner) / (pi / 3) from the samples

    bool constant() const { return multiplicity_min == multiplicity_max; }
    bool integral_within(double rel) const {
        double k = std::round(sampled_sum_over_unit);
        return k >= 1 && std::abs(sampled_sum_over_unit - k) <= rel * k;
    }
};

struct ComplementarityReport {
    long long D{};
    std::size_t samples{};
    std::vector<ComplementPair> pairs;
    bool J_in_principal_genus{}, no_prime_3_mod_4{};
    int genus_min{}, genus_max{};  // of the summed multiplicity over the principal genus

    bool genus_cover_constant() const { return genus_min == genus_max; }
    bool ok() const {
        for (const ComplementPair& p : pairs)
            if (!p.partner_is_J_over_class || !p.constant() || !p.integral_within(0.01))
                return false;
        if (J_in_principal_genus != no_prime_3_mod_4) return false;
        return !J_in_principal_genus || genus_cover_constant();
    }
};

inline bool has_prime_3_mod_4(long long D) {
    for (const Int& p : prime_factors(Int(D)))
        if (mod(p, Int(4)) == 3) return true;
    return false;
}

/// Level one: the domains of A and of the class of [-a, -b, -c] cover the modular surface evenly, since the two geodesics
/// cross the same translates in opposite directions. The multiplicity is usually the word length; a word whose axis runs
/// through a polygon vertex can carry an extra frame of zero area.
inline ComplementarityReport complementarity_check(long long D, std::size_t samples = 10000, std::uint64_t seed = 1,
                                                   unsigned shards = 8) {
    if (D <= 0 || !is_fundamental_discriminant(Int(D))) throw std::domain_error("complementarity_check: D must be a positive fundamental discriminant");
    NarrowClassGroup G{Int(D)};
    SpecialPolygon P = polygon_for_level(1);
    Mat2 h = sector_translates(P).front();
    std::size_t n = G.order();
    std::vector<CoverCounter> covers;
    std::vector<OrbifoldDomain> domains;
    for (std::size_t c = 0; c < n; ++c) {
        domains.push_back(fundamental_domain(gamma_Q(G.rep(c)), P));
        covers.emplace_back(domains.back());
    }
    ComplementarityReport R;
    R.D = D;
    R.samples = samples;
    auto sq = principal_genus(G);
    R.J_in_principal_genus = sq.count(G.class_J()) > 0;
    R.no_prime_3_mod_4 = !has_prime_3_mod_4(D);
    for (std::size_t c = 0; c < n; ++c) {
        ComplementPair p;
        p.cls = c;
        p.form = G.rep(c);
        p.complement = Form{-p.form.a, -p.form.b, -p.form.c};
        p.partner = G.class_of(p.complement);
        p.partner_is_J_over_class = p.partner == G.mul(G.class_J(), G.inverse(c));
        p.frames = static_cast<long long>(domains[c].frames.size());
        p.partner_frames = static_cast<long long>(domains[p.partner].frames.size());
        R.pairs.push_back(p);
    }

    struct Acc {
        std::vector<int> lo, hi;
        std::vector<double> sum;
        int glo{INT_MAX}, ghi{INT_MIN};
    };
    std::vector<Acc> part(shards, Acc{std::vector<int>(n, INT_MAX), std::vector<int>(n, INT_MIN), std::vector<double>(n, 0.0)});
    detail::run_shards(samples, seed, shards, [&](unsigned s, std::mt19937_64& rng, std::size_t cnt) {
        Acc& a = part[s];
        std::vector<int> m(n);
        for (std::size_t i = 0; i < cnt; ++i) {
            Cpx z = detail::mobius_d(h, detail::sample_sector(rng));
            for (std::size_t c = 0; c < n; ++c) m[c] = covers[c](z);
            int g = 0;
            for (std::size_t c : sq) g += m[c];
            a.glo = std::min(a.glo, g);
            a.ghi = std::max(a.ghi, g);
            for (std::size_t c = 0; c < n; ++c) {
                int v = m[c] + m[R.pairs[c].partner];
                a.lo[c] = std::min(a.lo[c], v);
                a.hi[c] = std::max(a.hi[c], v);
                a.sum[c] += v;
            }
        }
    });
    R.genus_min = INT_MAX;
    R.genus_max = INT_MIN;
    for (std::size_t c = 0; c < n; ++c) {
        ComplementPair& p = R.pairs[c];
        p.multiplicity_min = INT_MAX;
        p.multiplicity_max = INT_MIN;
        double sum = 0;
        for (const Acc& a : part) {
            p.multiplicity_min = std::min(p.multiplicity_min, a.lo[c]);
            p.multiplicity_max = std::max(p.multiplicity_max, a.hi[c]);
            sum += a.sum[c];
        }
        p.sampled_sum_over_unit = sum / static_cast<double>(samples);
    }
    for (const Acc& a : part) {
        R.genus_min = std::min(R.genus_min, a.glo);
        R.genus_max = std::max(R.genus_max, a.ghi);
    }
    return R;
}

// ---------------------------------------------------------------------------------------------------------------
// SVG rendering

struct RenderOptions {
    bool polygon{true};     // sides of P(q)
    bool domain{true};      // boundary pieces of the domain
    bool projection{false}; // shade the part of P(q) left of each frame's axis
    double width{800};
};

namespace detail {

struct Pt {
    bool inf{false};
    double x{}, y{};
};

inline Pt to_pt(const HPoint& z) {
    if (z.inf) return {true, 0, 0};
    return {false, static_cast<double>(z.x.approx()), std::sqrt(to_double(z.y2))};
}

inline Pt apply_pt(const Mat2& m, const Pt& p) {
    double a = to_double(m.a), b = to_double(m.b), c = to_double(m.c), d = to_double(m.d);
    if (p.inf) return c == 0 ? Pt{true, 0, 0} : Pt{false, a / c, 0};
    Cpx z(p.x, p.y), den = c * z + d;
    if (std::abs(den) == 0) return {true, 0, 0};
    Cpx w = (a * z + b) / den;
    return {false, w.real(), std::max(w.imag(), 0.0)};
}

inline double form_value(const Form& f, const Pt& p) {
    if (p.inf) return static_cast<double>(sgn(f.a));
    return to_double(f.a) * (p.x * p.x + p.y * p.y) + to_double(f.b) * p.x + to_double(f.c);
}

/// Point of the geodesic from p to q at parameter s in [0, 1] (by angle on a circle, by log height on a vertical line).
inline Pt geodesic_point(const Pt& p, const Pt& q, double s, double top) {
    if (p.inf || q.inf || std::abs(p.x - q.x) < 1e-12) {
        const Pt& f = p.inf ? q : p;
        double y0 = p.inf ? top : std::max(p.y, 1e-12), y1 = q.inf ? top : std::max(q.y, 1e-12);
        return {false, f.x, std::exp(std::log(y0) + s * (std::log(y1) - std::log(y0)))};
    }
    double c = (p.x * p.x + p.y * p.y - q.x * q.x - q.y * q.y) / (2 * (p.x - q.x));
    double R = std::hypot(p.x - c, p.y);
    double t0 = std::atan2(p.y, p.x - c), t1 = std::atan2(q.y, q.x - c);
    double t = t0 + s * (t1 - t0);
    return {false, c + R * std::cos(t), R * std::sin(t)};
}

struct Canvas {
    double xmin{}, xmax{}, ymax{}, scale{}, height{};
    double sx(double x) const { return (x - xmin) * scale; }
    double sy(double y) const { return height - y * scale; }
    std::string num(double v) const {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        std::string s = buf;
        return s == "-0.000" ? "0.000" : s;
    }
    std::string move(const Pt& p) const { return "M " + num(sx(p.x)) + " " + num(sy(p.inf ? ymax : p.y)); }

    /// Path data of the geodesic segment from p to q.
    std::string segment(const Pt& p, const Pt& q) const {
        if (p.inf && q.inf) return "";
        if (p.inf || q.inf || std::abs(p.x - q.x) < 1e-12) {
            double x = p.inf ? q.x : p.x;
            double y0 = p.inf ? ymax : p.y, y1 = q.inf ? ymax : q.y;
            return "M " + num(sx(x)) + " " + num(sy(y0)) + " L " + num(sx(x)) + " " + num(sy(y1));
        }
        double c = (p.x * p.x + p.y * p.y - q.x * q.x - q.y * q.y) / (2 * (p.x - q.x));
        double R = std::hypot(p.x - c, p.y) * scale;
        return "M " + num(sx(p.x)) + " " + num(sy(p.y)) + " A " + num(R) + " " + num(R) + " 0 0 " + (p.x < q.x ? "1" : "0") + " " +
               num(sx(q.x)) + " " + num(sy(q.y));
    }
};

/// Ideal endpoints of the full geodesic of f.
inline std::pair<Pt, Pt> form_ends(const Form& f) {
    double a = to_double(f.a), b = to_double(f.b), c = to_double(f.c);
    if (a == 0) return {{false, -c / b, 0}, {true, 0, 0}};
    double s = std::sqrt(b * b - 4 * a * c);
    return {{false, (-b - s) / (2 * a), 0}, {false, (-b + s) / (2 * a), 0}};
}

}  // namespace detail

/// Deterministic SVG of P(q), the closed geodesic S of gamma and the boundary of its domain F(q).
/// Complete pieces carry class="complete", the two pieces cut by the geodesic class="partial" and the axis class="geodesic".
inline std::string render_svg(const Mat2& gamma, const SpecialPolygon& P, const RenderOptions& opt = {}) {
    using detail::Pt;
    OrbifoldDomain O = fundamental_domain(gamma, P);
    const Mat2& g = O.code.gamma;
    Form axis = axis_form(g);
    auto [a1, a2] = detail::form_ends(axis);

    auto side_ends = [&](const Mat2& W, int j) {
        return std::pair{detail::apply_pt(W, detail::to_pt(P.sides[j].v1)), detail::apply_pt(W, detail::to_pt(P.sides[j].v2))};
    };
    std::vector<Pt> pts{a1, a2};
    for (const Side& s : P.sides) pts.insert(pts.end(), {detail::to_pt(s.v1), detail::to_pt(s.v2)});
    if (opt.domain)
        for (const BoundaryPiece& b : O.pieces) {
            auto [p, q] = side_ends(b.prefix, b.side);
            pts.insert(pts.end(), {p, q});
        }
    detail::Canvas cv;
    cv.xmin = 1e300;
    cv.xmax = -1e300;
    double yfin = 0;
    for (const Pt& p : pts)
        if (!p.inf) {
            cv.xmin = std::min(cv.xmin, p.x);
            cv.xmax = std::max(cv.xmax, p.x);
            yfin = std::max(yfin, p.y);
        }
    double span = cv.xmax - cv.xmin;
    cv.xmin -= 0.05 * span;
    cv.xmax += 0.05 * span;
    span = cv.xmax - cv.xmin;
    cv.ymax = std::max({0.6 * span, 1.15 * yfin, 1.0});
    cv.scale = opt.width / span;
    cv.height = cv.ymax * cv.scale;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cv.num(opt.width) << "\" height=\"" << cv.num(cv.height + 10)
       << "\" viewBox=\"0 0 " << cv.num(opt.width) << " " << cv.num(cv.height + 10) << "\">\n";
    os << "<title>level " << P.q << " gamma [[" << gamma.a << "," << gamma.b << "],[" << gamma.c << "," << gamma.d << "]]</title>\n";
    os << "<line class=\"real-axis\" x1=\"0\" y1=\"" << cv.num(cv.height) << "\" x2=\"" << cv.num(opt.width) << "\" y2=\""
       << cv.num(cv.height) << "\" stroke=\"#888\" stroke-width=\"0.5\"/>\n";

    if (opt.projection) {
        // closed outline of P(q) for clipping: vertices in order, joined by arcs
        std::string clip;
        for (int j = 0; j < P.N(); ++j) {
            auto [p, q] = side_ends(Mat2{}, j);
            std::string seg = cv.segment(p, q);
            if (seg.empty()) continue;
            clip += j == 0 || clip.empty() ? seg : "L" + seg.substr(1);
        }
        os << "<defs><clipPath id=\"polygon\"><path d=\"" << clip << " Z\"/></clipPath></defs>\n";
        for (std::size_t k = 0; k < O.frames.size(); ++k) {
            Form l = axis_form(O.frames[k].local);
            auto [e1, e2] = detail::form_ends(l);
            std::string d;
            if (l.a == 0) {
                // vertical axis: left is the half plane on the side where b x + c > 0
                double x0 = e1.x, right = sgn(l.b) > 0 ? cv.sx(cv.xmax) : cv.sx(cv.xmin);
                d = "M " + cv.num(cv.sx(x0)) + " 0 L " + cv.num(right) + " 0 L " + cv.num(right) + " " + cv.num(cv.height) + " L " +
                    cv.num(cv.sx(x0)) + " " + cv.num(cv.height) + " Z";
            } else {
                double c = (e1.x + e2.x) / 2, R = std::abs(e2.x - e1.x) / 2 * cv.scale;
                std::string disk = "M " + cv.num(cv.sx(c) - R) + " " + cv.num(cv.height) + " A " + cv.num(R) + " " + cv.num(R) +
                                   " 0 0 1 " + cv.num(cv.sx(c) + R) + " " + cv.num(cv.height) + " Z";
                d = l.a < 0 ? disk
                            : "M 0 0 L " + cv.num(opt.width) + " 0 L " + cv.num(opt.width) + " " + cv.num(cv.height) + " L 0 " +
                                  cv.num(cv.height) + " Z " + disk;
            }
            os << "<path class=\"projection\" clip-path=\"url(#polygon)\" fill-rule=\"evenodd\" fill=\"#4a7ab5\" fill-opacity=\"0.25\" d=\""
               << d << "\"/>\n";
        }
    }
    if (opt.polygon)
        for (int j = 0; j < P.N(); ++j) {
            auto [p, q] = side_ends(Mat2{}, j);
            os << "<path class=\"polygon-side\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\" d=\"" << cv.segment(p, q) << "\"/>\n";
        }
    if (opt.domain) {
        for (const BoundaryPiece& b : O.pieces) {
            auto [p, q] = side_ends(b.prefix, b.side);
            os << "<path class=\"complete\" fill=\"none\" stroke=\"#222\" stroke-width=\"2\" d=\"" << cv.segment(p, q) << "\"/>\n";
        }
        for (const BoundaryPiece& b : {O.entry, O.exit}) {
            auto [p, q] = side_ends(b.prefix, b.side);
            double fp = detail::form_value(axis, p), fq = detail::form_value(axis, q);
            if (fp < 0) std::swap(p, q), std::swap(fp, fq);
            // p is on the left; bisect for the crossing with the axis
            double lo = 0, hi = 1;
            for (int it = 0; it < 200; ++it) {
                double mid = (lo + hi) / 2;
                (detail::form_value(axis, detail::geodesic_point(p, q, mid, cv.ymax)) > 0 ? lo : hi) = mid;
            }
            Pt x = detail::geodesic_point(p, q, lo, cv.ymax);
            os << "<path class=\"partial\" fill=\"none\" stroke=\"#c33\" stroke-width=\"2\" d=\"" << cv.segment(p, x) << "\"/>\n";
        }
    }
    os << "<path class=\"geodesic\" fill=\"none\" stroke=\"#1a5\" stroke-width=\"1.5\" d=\"" << cv.segment(a1, a2) << "\"/>\n";
    os << "</svg>\n";
    return os.str();
}

/// Number of elements carrying class="name".
inline std::size_t count_svg_class(const std::string& svg, const std::string& name) {
    std::string key = "class=\"" + name + "\"";
    std::size_t n = 0;
    for (std::size_t pos = svg.find(key); pos != std::string::npos; pos = svg.find(key, pos + key.size())) ++n;
    return n;
}

}  // namespace qorb

#endif
