#ifndef QORB_SHC_HPP
#define QORB_SHC_HPP

#include "analytic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qorb {

/// u(z, w) = |z - w|^2 / (4 Im z Im w) = sinh^2(rho / 2).
inline double point_pair_u(Cpx z, Cpx w) { return std::norm(z - w) / (4 * z.imag() * w.imag()); }

/// Hyperbolic distance.
inline double hyperbolic_distance(Cpx z, Cpx w) { return 2 * std::asinh(std::sqrt(point_pair_u(z, w))); }

inline double ball_volume(double R) {
    double s = std::sinh(R / 2);
    return 4 * std::numbers::pi * s * s;
}

/// Normalised indicator of the ball of radius R, as a function of u.
inline double ball_kernel(double R, double u) {
    double s = std::sinh(R / 2);
    return u <= s * s ? 1 / ball_volume(R) : 0.0;
}

namespace detail {

inline double sinhc(double x) { return std::abs(x) < 1e-8 ? 1 + x * x / 6 : std::sinh(x) / x; }

}  // namespace detail

/// Conical function P_{-1/2 + it}(cosh rho) from the Mehler integral
/// (sqrt 2 / pi) int_0^rho cos(t u) / sqrt(cosh rho - cosh u) du, with u = rho - tau^2 removing the endpoint singularity.
inline Cpx conical_p(Cpx t, double rho) {
    if (rho < 0) throw std::domain_error("conical_p: rho must be nonnegative");
    if (rho == 0) return 1.0;
    // cosh rho - cosh(rho - tau^2) = 2 sinh(rho - tau^2/2) sinh(tau^2/2)
    auto f = [&](double tau) {
        double h = tau * tau / 2;
        return std::cos(t * (rho - tau * tau)) * (2 / std::sqrt(std::sinh(rho - h) * detail::sinhc(h)));
    };
    Cpx v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, std::sqrt(rho), 15, 1e-14);
    return std::numbers::sqrt2 / std::numbers::pi * v;
}

/// Selberg/Harish-Chandra transform of the ball kernel: (2 pi / vol B_R) int_0^R P_{-1/2+it}(cosh rho) sinh rho drho.
inline Cpx shc_transform(double R, Cpx t) {
    if (!(R > 0 && R <= 10)) throw std::domain_error("shc_transform: need 0 < R <= 10");
    auto f = [&](double rho) { return conical_p(t, rho) * std::sinh(rho); };
    Cpx v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, R, 15, 1e-14);
    return 2 * std::numbers::pi / ball_volume(R) * v;
}

/// k_R * k_rho at distance d: area of B_R(z) intersected with B_rho(w), over vol B_R vol B_rho.
inline double ball_convolution(double R, double rho, double d) {
    if (!(R > 0 && rho > 0 && d >= 0)) throw std::domain_error("ball_convolution: need R, rho > 0 and d >= 0");
    double norm = ball_volume(R) * ball_volume(rho);
    if (d >= R + rho) return 0.0;
    if (d + rho <= R) return ball_volume(rho) / norm;
    if (d + R <= rho) return ball_volume(R) / norm;
    // angular measure of the circle of radius r about w lying inside B_R(z)
    auto angle = [&](double r) {
        if (r == 0) return d <= R ? 2 * std::numbers::pi : 0.0;
        double c = (std::cosh(d) * std::cosh(r) - std::cosh(R)) / (std::sinh(d) * std::sinh(r));
        return 2 * std::acos(std::clamp(c, -1.0, 1.0));
    };
    std::vector<double> bp{0.0, rho};
    for (double b : {R - d, d - R})
        if (b > 0 && b < rho) bp.push_back(b);
    std::sort(bp.begin(), bp.end());
    double area = 0;
    // acos has square-root ends where the circle about w becomes tangent to the boundary of B_R(z);
    // r = a + (b - a) u^2 (3 - 2u) makes them smooth
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        double a = bp[i], b = bp[i + 1];
        area += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double u) {
                double r = a + (b - a) * u * u * (3 - 2 * u);
                return angle(r) * std::sinh(r) * (b - a) * 6 * u * (1 - u);
            },
            0.0, 1.0, 10, 1e-13);
    }
    return area / norm;
}

/// Ht(w) = max over the modular group of Im(gamma w), attained in the standard domain.
inline double ht(Cpx w) { return reduce_to_fundamental(w).w.imag(); }

/// Points gamma z (gamma in PSL2(Z)) with hyperbolic distance to w at most radius.
inline std::vector<Cpx> orbit_points_near(Cpx z, Cpx w, double radius) {
    if (!(z.imag() > 0 && w.imag() > 0)) throw std::domain_error("orbit_points_near: points must lie in the upper half plane");
    std::vector<Cpx> out;
    double x = z.real(), y = z.imag();
    // Im(gamma z) >= Im(w) e^{-radius} bounds |c z + d|^2
    double bound = y * std::exp(radius) / w.imag();
    double xspan = w.imag() * std::sinh(radius);
    long long cmax = static_cast<long long>(std::floor(std::sqrt(bound) / y)) + 1;
    for (long long c = 0; c <= cmax; ++c) {
        double half = std::sqrt(std::max(bound - (c * y) * (c * y), 0.0));
        long long dlo = static_cast<long long>(std::ceil(-c * x - half)), dhi = static_cast<long long>(std::floor(-c * x + half));
        for (long long d = dlo; d <= dhi; ++d) {
            if (c == 0 && d != 1) continue;
            if (std::gcd(c, d) != 1) continue;
            Int a, b;
            if (c == 0) {
                a = 1;
                b = 0;
            } else {
                Int u, v;
                ext_gcd(Int(d), Int(c), u, v);  // d u + c v = 1: a = u, b = -v
                a = u;
                b = -v;
            }
            Cpx g = detail::mobius_c(Mat2{a, b, Int(c), Int(d)}, z);
            // translate by integers so that Re lies within xspan of Re w
            long long nlo = static_cast<long long>(std::ceil(w.real() - xspan - g.real()));
            long long nhi = static_cast<long long>(std::floor(w.real() + xspan - g.real()));
            for (long long n = nlo; n <= nhi; ++n) {
                Cpx p = g + static_cast<double>(n);
                if (hyperbolic_distance(p, w) <= radius) out.push_back(p);
            }
        }
    }
    return out;
}

/// K_R(z, w) = sum over gamma of k_R(u(gamma z, w)).
inline double automorphic_ball_kernel(double R, Cpx z, Cpx w) {
    return static_cast<double>(orbit_points_near(z, w, R).size()) / ball_volume(R);
}

/// K_R * K_rho(z, w) = sum over gamma of (k_R * k_rho)(u(gamma z, w)).
inline double automorphic_convolution(double R, double rho, Cpx z, Cpx w) {
    double s = 0;
    for (Cpx p : orbit_points_near(z, w, R + rho)) s += ball_convolution(R, rho, hyperbolic_distance(p, w));
    return s;
}

struct Sandwich {
    double lower, middle, upper;
    bool holds(double tol = 1e-12) const { return lower <= middle + tol * (1 + middle) && middle <= upper + tol * (1 + upper); }
};

/// (vol B_{R-rho}/vol B_R) k_{R-rho} * k_rho <= k_R <= (vol B_{R+rho}/vol B_R) k_{R+rho} * k_rho at distance d.
inline Sandwich ball_sandwich(double R, double rho, double d) {
    double u = std::sinh(d / 2) * std::sinh(d / 2), v = ball_volume(R);
    return {ball_volume(R - rho) / v * ball_convolution(R - rho, rho, d), ball_kernel(R, u),
            ball_volume(R + rho) / v * ball_convolution(R + rho, rho, d)};
}

/// The same bounds for the automorphic kernels.
inline Sandwich automorphic_sandwich(double R, double rho, Cpx z, Cpx w) {
    double v = ball_volume(R);
    return {ball_volume(R - rho) / v * automorphic_convolution(R - rho, rho, z, w), automorphic_ball_kernel(R, z, w),
            ball_volume(R + rho) / v * automorphic_convolution(R + rho, rho, z, w)};
}

}  // namespace qorb

#endif
