#ifndef QORB_ANALYTIC_HPP
#define QORB_ANALYTIC_HPP

#include "orbifold.hpp"
#include "special_functions.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <atomic>
#include <functional>
#include <optional>
#include <string>

namespace qorb {

/// Reduction of a point into {|x| <= 1/2, |z| >= 1}: w = g z with g in SL2(Z) stored as doubles.
struct Reduced {
    Cpx w;
    double a, b, c, d;
};

inline Reduced reduce_to_fundamental(Cpx z) {
    if (!(z.imag() > 0)) throw std::domain_error("reduce_to_fundamental: point not in the upper half plane");
    Reduced r{z, 1, 0, 0, 1};
    for (int it = 0; it < 10000; ++it) {
        double n = std::floor(r.w.real() + 0.5);
        if (n != 0) {
            r.w -= n;
            r.a -= n * r.c;
            r.b -= n * r.d;
        }
        if (std::norm(r.w) >= 1 - 1e-14) return r;
        r.w = -1.0 / r.w;
        double a = r.a, b = r.b;
        r.a = -r.c;
        r.b = -r.d;
        r.c = a;
        r.d = b;
    }
    throw std::runtime_error("reduce_to_fundamental: no convergence");
}

/// E(z, 1/2 + it) and its raise (R_0 E)(z, 1/2 + it) for the full modular group.
class Eisenstein {
public:
    explicit Eisenstein(double t, int n_cap = 64) : t_(t), s_(0.5, t), n_cap_(n_cap) {
        Cpx x1 = xi(1.0 + 2.0 * Cpx(0, t));
        rho1_ = 1.0 / x1;
        phi_ = xi(1.0 - 2.0 * Cpx(0, t)) / x1;
        lambda_.assign(n_cap_ + 1, 0.0);
        for (int n = 1; n <= n_cap_; ++n)
            for (int d = 1; d <= n; ++d)
                if (n % d == 0) lambda_[n] += std::cos(t * std::log(static_cast<double>(n) / (static_cast<double>(d) * d)));
    }

    double t() const { return t_; }
    Cpx s() const { return s_; }
    double eigenvalue() const { return 0.25 + t_ * t_; }
    /// xi(1 - 2it) / xi(1 + 2it)
    Cpx scattering() const { return phi_; }
    /// rho(1, t) = 1 / xi(1 + 2it)
    Cpx rho1() const { return rho1_; }
    double lambda(int n) const { return lambda_.at(n); }

    Cpx constant_term(double y) const { return std::pow(y, s_) + phi_ * std::pow(y, 1.0 - s_); }
    Cpx raised_constant_term(double y) const { return s_ * std::pow(y, s_) + (1.0 - s_) * phi_ * std::pow(y, 1.0 - s_); }

    /// Number of Fourier terms making the Whittaker tail negligible at height y.
    int terms_needed(double y) const { return static_cast<int>(std::ceil(46 / (2 * std::numbers::pi * y))); }

    /// Truncated Fourier expansion without reduction; throws when y is too low for the cap.
    Cpx fourier(Cpx z) const {
        double x = z.real(), y = z.imag();
        int nmax = terms_needed(y);
        if (nmax > n_cap_) throw std::domain_error("eisenstein: Im z too small for n_cap, raise n_cap");
        Cpx v = constant_term(y);
        double sum = 0;
        for (int n = 1; n <= nmax; ++n) {
            double Y = 4 * std::numbers::pi * n * y;
            double W = std::sqrt(Y / std::numbers::pi) * bessel_K_imag(t_, Y / 2);
            sum += lambda_[n] / std::sqrt(n) * W * 2 * std::cos(2 * std::numbers::pi * n * x);
        }
        return v + rho1_ * sum;
    }

    Cpx raised_fourier(Cpx z) const {
        double x = z.real(), y = z.imag();
        int nmax = terms_needed(y);
        if (nmax > n_cap_) throw std::domain_error("raised_eisenstein: Im z too small for n_cap, raise n_cap");
        Cpx v = raised_constant_term(y), sum = 0;
        for (int n = 1; n <= nmax; ++n) {
            Whittaker w = whittaker_all(t_, 4 * std::numbers::pi * n * y);
            Cpx e = std::polar(1.0, 2 * std::numbers::pi * n * x);
            sum += lambda_[n] / std::sqrt(n) * (eigenvalue() * w.Wm1 * std::conj(e) - w.Wp1 * e);
        }
        return v + rho1_ * sum;
    }

    Cpx operator()(Cpx z) const { return fourier(reduce_to_fundamental(z).w); }

    /// Weight two: (R_0 E)(z) = (R_0 E)(g z) conj(cz + d) / (cz + d) for w = g z.
    Cpx raised(Cpx z) const {
        Reduced r = reduce_to_fundamental(z);
        Cpx j = r.c * z + r.d;
        return raised_fourier(r.w) * std::conj(j) / j;
    }

private:
    double t_;
    Cpx s_, rho1_, phi_;
    int n_cap_;
    std::vector<double> lambda_;
};

struct QuadResult {
    Cpx value;
    double error;  // quadrature error estimate
};

inline QuadResult integrate_c(const std::function<Cpx(double)>& f, double a, double b, double tol = 1e-12) {
    double err = 0;
    Cpx v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 18, tol, &err);
    return {v, err};
}

/// Oriented geodesic segment from the top z_Q of a form's semicircle, parametrised by arclength.
struct GeodesicPath {
    double center, radius, sigma;  // sigma = sign(a): travel from (-b + sqrt D)/2a towards the conjugate root
    double length;

    static GeodesicPath of(const Form& Q) {
        if (Q.a == 0) throw std::domain_error("geodesic path: a must be nonzero");
        double a = to_double(Q.a), b = to_double(Q.b), D = to_double(Q.disc());
        return {-b / (2 * a), std::sqrt(D) / (2 * std::abs(a)), a > 0 ? 1.0 : -1.0, 2 * fundamental_unit(Q.disc()).log_eps()};
    }
    Cpx at(double s) const { return {center - sigma * radius * std::tanh(s), radius / std::cosh(s)}; }
    /// dz / Im z per unit arclength.
    Cpx dz_over_y(double s) const { return {-sigma / std::cosh(s), -std::tanh(s)}; }
};

/// int_{z_Q}^{gamma_Q z_Q} (R_0 E)(l z) dz / Im z.
inline QuadResult cycle_integral(const Form& Q, const Eisenstein& E, long long ell = 1, double tol = 1e-12) {
    GeodesicPath g = GeodesicPath::of(Q);
    double l = static_cast<double>(ell);
    return integrate_c([&](double s) { return E.raised(l * g.at(s)) * g.dz_over_y(s); }, 0.0, g.length, tol);
}

namespace detail {

/// sigma in SL2(Z) with sigma(infinity) = c.
inline Mat2 scaling_matrix(const Cusp& c) {
    if (c.is_inf()) return {};
    Int u, v;
    ext_gcd(c.p, c.q, v, u);  // p v + q u = 1
    return {c.p, -u, c.q, v};
}

inline Cpx mobius_c(const Mat2& m, Cpx z) {
    double a = to_double(m.a), b = to_double(m.b), c = to_double(m.c), d = to_double(m.d);
    return (a * z + b) / (c * z + d);
}

template <int N>
struct GL {
    std::vector<double> x, w;  // nodes and weights on [0, 1]
    GL() {
        using G = boost::math::quadrature::gauss<double, N>;
        const auto& a = G::abscissa();
        const auto& wt = G::weights();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) {
                x.push_back(0.5);
                w.push_back(wt[i] / 2);
                continue;
            }
            x.push_back(0.5 - a[i] / 2);
            w.push_back(wt[i] / 2);
            x.push_back(0.5 + a[i] / 2);
            w.push_back(wt[i] / 2);
        }
    }
};

struct Rule {
    const std::vector<double>& x;
    const std::vector<double>& w;
};

inline Rule gl_rule(int n) {
    static const GL<20> g20;
    static const GL<30> g30;
    if (n == 20) return {g20.x, g20.w};
    if (n == 30) return {g30.x, g30.w};
    throw std::domain_error("gl_rule: order must be 20 or 30");
}

/// 30-point Gauss on [a, b], with the 20-point difference as error estimate. Unlike the adaptive rule this
/// terminates on integrands that vanish up to rounding.
template <class F>
QuadResult integrate_gl(const F& f, double a, double b) {
    Cpx v30 = 0, v20 = 0;
    Rule r30 = gl_rule(30), r20 = gl_rule(20);
    for (std::size_t i = 0; i < r30.x.size(); ++i) v30 += r30.w[i] * f(a + (b - a) * r30.x[i]);
    for (std::size_t i = 0; i < r20.x.size(); ++i) v20 += r20.w[i] * f(a + (b - a) * r20.x[i]);
    return {(b - a) * v30, (b - a) * std::abs(v30 - v20)};
}

inline Cusp scale_cusp(const Cusp& c, long long ell) {
    if (c.is_inf()) return c;
    Int p = c.p * ell, q = c.q, g = gcd(p, q);
    return {p / g, q / g};
}

}  // namespace detail

/// Regularised integral of (R_0 E)(l z) dz / Im z along the geodesic from cusp c1 to cusp c2.
/// Y = 0 gives the limit; Y > 0 gives the plain integral truncated at height Y in the scaling coordinates of each end.
inline QuadResult regularized_side_integral(const Cusp& c1, const Cusp& c2, const Eisenstein& E, long long ell = 1,
                                           double Y = 0) {
    Cusp b1 = detail::scale_cusp(c1, ell), b2 = detail::scale_cusp(c2, ell);
    if (b1 == b2) throw std::domain_error("regularized_side_integral: equal endpoints");
    Cpx m;
    if (b1.is_inf() || b2.is_inf()) {
        const Cusp& f = b1.is_inf() ? b2 : b1;
        m = {to_double(f.value()), 1.0};
    } else {
        double x1 = to_double(b1.value()), x2 = to_double(b2.value());
        m = {(x1 + x2) / 2, std::abs(x2 - x1) / 2};
    }
    const Cpx I(0, 1);
    auto half = [&](const Cusp& b) -> std::pair<QuadResult, double> {
        Cpx w = detail::mobius_c(detail::scaling_matrix(b).inv(), m);
        double x = w.real() - std::floor(w.real()), y0 = w.imag();
        QuadResult r{0.0, 0.0};
        // dy / y = dv with y = e^v, in chunks of length at most 1/2 in v
        auto add = [&](double lo, double hi, bool subtract) {
            if (hi <= lo) return;
            double v0 = std::log(lo), v1 = std::log(hi);
            int chunks = std::max(1, static_cast<int>(std::ceil(2 * (v1 - v0))));
            double h = (v1 - v0) / chunks;
            auto f = [&](double v) {
                double y = std::exp(v);
                Cpx val = E.raised({x, y});
                if (subtract) val -= E.raised_constant_term(y);
                return val;
            };
            for (int c = 0; c < chunks; ++c) {
                QuadResult p = detail::integrate_gl(f, v0 + c * h, v0 + (c + 1) * h);
                r.value += p.value;
                r.error += p.error;
            }
        };
        if (Y > 0) {
            add(y0, Y, false);
        } else {
            double mid = std::max(y0, 1.0);
            add(y0, mid, true);
            add(mid, mid + 12, true);
        }
        return {r, y0};
    };
    auto [h1, y1] = half(b1);
    auto [h2, y2] = half(b2);
    Cpx v = h2.value - h1.value;
    if (Y <= 0) v += E.constant_term(y1) - E.constant_term(y2);
    return {I * v, h1.error + h2.error};
}

inline QuadResult regularized_side_integral(const Side& side, const Eisenstein& E, long long ell = 1, double Y = 0) {
    return regularized_side_integral(side.end1, side.end2, E, ell, Y);
}

// ---------------------------------------------------------------------------------------------
// Area integrals over the orbifold domain

namespace detail {

/// Half of the modular domain: x in [x0, x1], y >= sqrt(1 - x^2); region where A|w|^2 + B x + C > 0.
struct HalfStripRegion {
    double x0, x1;
    double A, B, C;
};

/// int over the region of F(w) dmu, truncated at Yc, plus nothing above (callers add cusp tails).
template <class F>
Cpx integrate_region(const HalfStripRegion& R, double Yc, const F& f, int order) {
    Rule rule = gl_rule(order);
    double xc = -R.B / (2 * R.A), r2 = (R.B * R.B - 4 * R.A * R.C) / (4 * R.A * R.A), r = std::sqrt(std::max(r2, 0.0));
    std::vector<double> bp{R.x0, R.x1};
    for (double e : {xc - r, xc + r})
        if (e > R.x0 && e < R.x1) bp.push_back(e);
    if (R.B != 0) {
        double xs = -(R.A + R.C) / R.B;
        if (xs > R.x0 && xs < R.x1) bp.push_back(xs);
    }
    std::sort(bp.begin(), bp.end());
    auto ylow = [](double x) { return std::sqrt(1 - x * x); };
    auto ycirc = [&](double x) { return std::sqrt(std::max(r2 - (x - xc) * (x - xc), 0.0)); };
    // y-interval at x: outside the circle when A > 0, inside when A < 0
    auto yrange = [&](double x) -> std::pair<double, double> {
        double lo = ylow(x), hi = Yc;
        bool in_x = std::abs(x - xc) < r;
        if (R.A > 0) {
            if (in_x) lo = std::max(lo, ycirc(x));
        } else {
            if (!in_x) return {1, 0};
            hi = std::min(hi, ycirc(x));
        }
        return {lo, hi};
    };
    Cpx total = 0;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        double a = bp[k], b = bp[k + 1];
        if (b - a < 1e-15) continue;
        auto mid = yrange((a + b) / 2);
        if (mid.second <= mid.first) continue;
        // square-root behaviour of the circle at its ends is smoothed by x = a + (b - a) phi(u)
        bool sa = std::abs(a - (xc - r)) < 1e-13 || std::abs(a - (xc + r)) < 1e-13;
        bool sb = std::abs(b - (xc - r)) < 1e-13 || std::abs(b - (xc + r)) < 1e-13;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            double u = rule.x[i], phi = u, dphi = 1;
            if (sa && sb) {
                phi = u * u * (3 - 2 * u);
                dphi = 6 * u * (1 - u);
            } else if (sa) {
                phi = u * u;
                dphi = 2 * u;
            } else if (sb) {
                phi = 1 - (1 - u) * (1 - u);
                dphi = 2 * (1 - u);
            }
            double x = a + (b - a) * phi, wx = rule.w[i] * (b - a) * dphi;
            auto [lo, hi] = yrange(x);
            if (hi <= lo) continue;
            double v0 = std::log(lo), v1 = std::log(hi);
            int chunks = std::max(1, static_cast<int>(std::ceil((v1 - v0) / 0.6)));
            double h = (v1 - v0) / chunks;
            Cpx sx = 0;
            for (int c = 0; c < chunks; ++c)
                for (std::size_t j = 0; j < rule.x.size(); ++j) {
                    double y = std::exp(v0 + h * (c + rule.x[j]));
                    sx += rule.w[j] * h * f(Cpx(x, y)) / y;  // dy / y^2 = dv / y
                }
            total += wx * sx;
        }
    }
    return total;
}

/// E(l g w) = E(U w) with U = [[g0, beta], [0, l / g0]] upper triangular.
struct UpperForm {
    double g0, beta, delta;
};

inline UpperForm upper_part(const Mat2& g, long long ell) {
    Int a = g.a * ell, c = g.c, x, y;
    Int g0 = ext_gcd(a, c, x, y);  // x a + y c = g0
    if (g0 < 0) {
        g0 = -g0;
        x = -x;
        y = -y;
    }
    // row (x, y) of sigma^{-1} applied to l g = [[l a, l b], [c, d]]
    Int beta = x * g.b * ell + y * g.d;
    Int delta = Int(ell) / g0;
    return {to_double(g0), to_double(beta), to_double(delta)};
}

}  // namespace detail

struct AreaIntegral {
    Cpx value;        // finer rule
    Cpx value_coarse; // coarser rule, for the double-grid check
    double grid_diff() const { return std::abs(value - value_coarse); }
};

/// int over the domain of E(l z, 1/2 + it) dmu: each frame is P intersected with the left of its local axis,
/// and P is tiled by halves of the modular domain through its sector translates.
inline AreaIntegral orbifold_integral(const OrbifoldDomain& O, const SpecialPolygon& P, const Eisenstein& E, long long ell = 1,
                                      unsigned threads = 8) {
    if (ell < 1 || (P.q % ell) != 0) throw std::domain_error("orbifold_integral: l must divide q");
    struct Piece {
        Mat2 g;
        bool right;
    };
    std::vector<Piece> pieces;
    for (const Mat2& h : sector_translates(P)) {
        pieces.push_back({h, true});
        pieces.push_back({h * Mat2::S(), false});
    }
    struct Task {
        std::size_t piece;
        Form f;
    };
    std::vector<Task> tasks;
    for (const Frame& fr : O.frames) {
        Form Q = axis_form(fr.local);
        for (std::size_t i = 0; i < pieces.size(); ++i) tasks.push_back({i, act(Q, pieces[i].g)});
    }
    std::vector<std::array<Cpx, 2>> out(tasks.size());
    auto run = [&](std::size_t k) {
        const Task& T = tasks[k];
        const Piece& p = pieces[T.piece];
        detail::UpperForm U = detail::upper_part(p.g, ell);
        double kappa = U.g0 * U.g0 / static_cast<double>(ell);
        detail::HalfStripRegion R{p.right ? 0.0 : -0.5, p.right ? 0.5 : 0.0, to_double(T.f.a), to_double(T.f.b), to_double(T.f.c)};
        double r = std::sqrt(to_double(T.f.disc())) / (2 * std::abs(R.A));
        double Yc = std::max({7.5 / kappa, r * 1.0001, 1.0});
        auto F = [&](Cpx w) { return E((U.g0 * w + U.beta) / U.delta); };
        Cpx tail = 0;
        if (R.A > 0) {
            // constant term of E(U w) = E(kappa w + shift) above Yc; the rest is below e^{-15 pi}
            Cpx s = E.s();
            tail = 0.5 * (std::pow(kappa, s) * std::pow(Yc, s - 1.0) / (1.0 - s) +
                          E.scattering() * std::pow(kappa, 1.0 - s) * std::pow(Yc, -s) / s);
        }
        out[k] = {detail::integrate_region(R, Yc, F, 30) + tail, detail::integrate_region(R, Yc, F, 20) + tail};
    };
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned i = 0; i < std::max(1u, threads); ++i)
        pool.emplace_back([&] {
            for (std::size_t k; (k = next++) < tasks.size();) run(k);
        });
    for (auto& th : pool) th.join();
    AreaIntegral A{0.0, 0.0};
    for (const auto& o : out) {
        A.value += o[0];
        A.value_coarse += o[1];
    }
    return A;
}

// ---------------------------------------------------------------------------------------------
// Weyl sums

/// A level-q form for each narrow class, with the class of its own ideal (the labelling used by the Weyl sums).
struct ClassForm {
    Form f;
    std::size_t cls;
};

inline std::vector<ClassForm> class_forms(const NarrowClassGroup& G, long long q, std::optional<Int> r = std::nullopt) {
    std::vector<ClassForm> out;
    if (q == 1) {
        for (std::size_t i = 0; i < G.order(); ++i) out.push_back({G.rep(i), i});
        return out;
    }
    Int rr = r ? *r : residues_r(G.D(), Int(q)).front();
    for (const HeegnerForm& h : heegner_forms_for_classes(G, Int(q), rr)) out.push_back({h.f, G.class_of(h.f)});
    return out;
}

/// Sum over the domain's boundary of the regularised side integrals, weighted by multiplicity.
inline QuadResult topological_term(const OrbifoldDomain& O, const SpecialPolygon& P, const Eisenstein& E, long long ell,
                                   std::map<int, QuadResult>* cache = nullptr) {
    BoundaryChain B = boundary_chain(O, P);
    QuadResult T{0.0, 0.0};
    for (int j : B.basis) {
        long long m = B.multiplicity[j];
        if (m == 0) continue;
        QuadResult s;
        if (cache && cache->count(j)) {
            s = cache->at(j);
        } else {
            s = regularized_side_integral(P.sides[j], E, ell);
            if (cache) (*cache)[j] = s;
        }
        T.value += static_cast<double>(m) * s.value;
        T.error += std::abs(static_cast<double>(m)) * s.error;
    }
    return T;
}

struct ClassIntegrals {
    std::size_t cls;
    Form f;
    Cpx cycle, topological;
    std::optional<AreaIntegral> area;
};

/// Per-class cycle and topological integrals, and optionally the area integral of E(l z).
inline std::vector<ClassIntegrals> class_integrals(const NarrowClassGroup& G, long long q, const Eisenstein& E, long long ell,
                                                   bool with_area, std::optional<Int> r = std::nullopt) {
    SpecialPolygon P = polygon_for_level(q);
    std::map<int, QuadResult> cache;
    std::vector<ClassIntegrals> out;
    for (const ClassForm& cf : class_forms(G, q, r)) {
        ClassIntegrals ci{cf.cls, cf.f, cycle_integral(cf.f, E, ell).value, 0.0, std::nullopt};
        OrbifoldDomain O = fundamental_domain(gamma_Q(cf.f), P);
        if (q > 1) ci.topological = topological_term(O, P, E, ell, &cache).value;
        if (with_area) ci.area = orbifold_integral(O, P, E, ell);
        out.push_back(std::move(ci));
    }
    return out;
}

/// sum_A chi(A) [cycle + topological] / (1/4 + t^2).
inline Cpx weyl_sum_numeric(const NarrowClassGroup& G, const ClassCharacter& chi, const Eisenstein& E, long long q = 1,
                            long long ell = 1, std::optional<Int> r = std::nullopt) {
    Cpx W = 0;
    for (const ClassIntegrals& c : class_integrals(G, q, E, ell, false, r)) W += chi(c.cls) * (c.cycle + c.topological);
    return W / E.eigenvalue();
}

/// sum_A chi(A) int_{F_A(q)} E(l z) dmu by area quadrature.
inline AreaIntegral weyl_sum_area(const NarrowClassGroup& G, const ClassCharacter& chi, const Eisenstein& E, long long q = 1,
                                  long long ell = 1, std::optional<Int> r = std::nullopt) {
    SpecialPolygon P = polygon_for_level(q);
    AreaIntegral W{0.0, 0.0};
    for (const ClassForm& cf : class_forms(G, q, r)) {
        AreaIntegral a = orbifold_integral(fundamental_domain(gamma_Q(cf.f), P), P, E, ell);
        W.value += chi(cf.cls) * a.value;
        W.value_coarse += chi(cf.cls) * a.value_coarse;
    }
    return W;
}

/// (1 - chi(J)) D^{1/4 + it/2} / (1/4 + t^2) Gamma(3/4 + it/2)^2 / Gamma(1/2 + it) L(1/2 + it, chi_D1) L(1/2 + it, chi_D2) / zeta(1 + 2it).
inline Cpx weyl_sum_closed_form(const NarrowClassGroup& G, const ClassCharacter& chi, double t) {
    if (!chi.genus_pair) throw std::domain_error("weyl_sum_closed_form: only genus characters are supported");
    auto [D1, D2] = *chi.genus_pair;
    const Cpx it(0, t);
    Cpx s = 0.5 + it;
    Cpx g = gamma_c(0.75 + it / 2.0);
    double D = to_double(G.D());
    Cpx L = dirichlet_L(s, D1.convert_to<long long>()) * dirichlet_L(s, D2.convert_to<long long>());
    return (1.0 - chi(G.class_J())) * std::pow(D, 0.25 + it / 2.0) / (0.25 + t * t) * g * g / gamma_c(s) * L / zeta(1.0 + 2.0 * it);
}

inline std::string character_name(const ClassCharacter& chi) {
    if (chi.genus_pair) return "genus:" + chi.genus_pair->first.str() + "," + chi.genus_pair->second.str();
    std::string s = "exps:";
    for (std::size_t i = 0; i < chi.exps.size(); ++i) s += (i ? "," : "") + str(chi.exps[i]);
    return s;
}

struct WeylReport {
    long long D{}, q{1}, ell{1};
    std::string character;
    double t{};
    Cpx lhs_numeric, rhs_closed;
    double abs_err{}, rel_err{};
    double quadrature_diff{};  // double-grid or error-estimate diagnostic
    void finish() {
        abs_err = std::abs(lhs_numeric - rhs_closed);
        rel_err = abs_err / std::max({std::abs(lhs_numeric), std::abs(rhs_closed), 1e-300});
    }
    /// Relative error with the denominator floored at one, for sides that may vanish.
    double rel_err_floored() const { return abs_err / std::max({std::abs(lhs_numeric), std::abs(rhs_closed), 1.0}); }
    /// Relative error against the negated closed form.
    double rel_err_negated() const {
        return std::abs(lhs_numeric + rhs_closed) / std::max({std::abs(lhs_numeric), std::abs(rhs_closed), 1e-300});
    }
};

/// Level-one Weyl sum by cycle integrals against the L-function closed form.
inline WeylReport weyl_report(const NarrowClassGroup& G, const ClassCharacter& chi, double t) {
    Eisenstein E(t);
    WeylReport R;
    R.D = G.D().convert_to<long long>();
    R.character = character_name(chi);
    R.t = t;
    R.lhs_numeric = weyl_sum_numeric(G, chi, E);
    R.rhs_closed = weyl_sum_closed_form(G, chi, t);
    R.finish();
    return R;
}

/// W^{l,q} by area quadrature against chi(A_l) times the level-one Weyl sum (cycle integrals) plus, for l = q,
/// the topological sum.
inline WeylReport oldform_weyl_relation(const NarrowClassGroup& G, const ClassCharacter& chi, double t, long long q, long long ell,
                                        std::optional<Int> r = std::nullopt) {
    if (ell != 1 && ell != q) throw std::domain_error("oldform_weyl_relation: l must be 1 or q");
    Eisenstein E(t);
    Int rr = r ? *r : residues_r(G.D(), Int(q)).front();
    WeylReport R;
    R.D = G.D().convert_to<long long>();
    R.q = q;
    R.ell = ell;
    R.character = character_name(chi);
    R.t = t;
    AreaIntegral lhs = weyl_sum_area(G, chi, E, q, ell, rr);
    R.lhs_numeric = lhs.value;
    R.quadrature_diff = lhs.grid_diff();
    Cpx rhs = chi(class_of_l(G, Int(q), rr, Int(ell))) * weyl_sum_numeric(G, chi, E);
    if (ell == q && q > 1) {
        SpecialPolygon P = polygon_for_level(q);
        std::map<int, QuadResult> cache;
        for (const ClassForm& cf : class_forms(G, q, rr))
            rhs += chi(cf.cls) * topological_term(fundamental_domain(gamma_Q(cf.f), P), P, E, ell, &cache).value / E.eigenvalue();
    }
    R.rhs_closed = rhs;
    R.finish();
    return R;
}

}  // namespace qorb

#endif
