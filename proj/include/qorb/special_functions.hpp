#ifndef QORB_SPECIAL_FUNCTIONS_HPP
#define QORB_SPECIAL_FUNCTIONS_HPP

#include "quad_arith.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bernoulli.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace qorb {

using Cpx = std::complex<double>;

/// log Gamma(z) by the g = 7 Lanczos series, with reflection for Re z < 1/2.
inline Cpx lgamma_c(Cpx z) {
    constexpr double pi = std::numbers::pi;
    if (z.real() < 0.5) {
        if (z.imag() == 0 && z.real() == std::floor(z.real())) throw std::domain_error("gamma: pole");
        return std::log(pi / std::sin(pi * z)) - lgamma_c(1.0 - z);
    }
    static constexpr double c[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                   771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                   -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    z -= 1.0;
    Cpx x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
    Cpx t = z + 7.5;
    return 0.5 * std::log(2 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline Cpx gamma_c(Cpx z) { return std::exp(lgamma_c(z)); }

namespace detail {

/// Euler-Maclaurin for zeta(s, a) with N terms, without the pole term (N + a)^{1-s} / (s - 1).
inline Cpx hurwitz_regular(Cpx s, double a, int N) {
    Cpx sum = 0;
    for (int k = 0; k < N; ++k) sum += std::pow(k + a, -s);
    double Na = N + a;
    sum += 0.5 * std::pow(Na, -s);
    // B_{2j}/(2j)! s(s+1)...(s+2j-2) Na^{-s-2j+1}
    Cpx rising = s, term_pow = std::pow(Na, -s - 1.0);
    double fact = 2;
    for (int j = 1; j <= 16; ++j) {
        sum += boost::math::bernoulli_b2n<double>(j) / fact * rising * term_pow;
        rising *= (s + static_cast<double>(2 * j - 1)) * (s + static_cast<double>(2 * j));
        term_pow /= Na * Na;
        fact *= (2 * j + 1) * (2 * j + 2);
    }
    return sum;
}

inline int em_terms(Cpx s) { return 24 + static_cast<int>(std::ceil(std::abs(s))); }

}  // namespace detail

/// Hurwitz zeta by Euler-Maclaurin summation, 0 < a <= 1.
inline Cpx hurwitz_zeta(Cpx s, double a) {
    if (s == Cpx(1.0, 0.0)) throw std::domain_error("hurwitz_zeta: pole at s = 1");
    if (!(a > 0 && a <= 1)) throw std::domain_error("hurwitz_zeta: need 0 < a <= 1");
    int N = detail::em_terms(s);
    return detail::hurwitz_regular(s, a, N) + std::pow(N + a, 1.0 - s) / (s - 1.0);
}

inline Cpx zeta(Cpx s) { return hurwitz_zeta(s, 1.0); }

/// L(s, chi_{D1}) for a fundamental discriminant D1 (D1 = 1 gives zeta).
inline Cpx dirichlet_L(Cpx s, long long D1) {
    if (D1 == 1) return zeta(s);
    if (!is_fundamental_discriminant(Int(D1))) throw std::domain_error("dirichlet_L: D1 is not a fundamental discriminant");
    long long m = std::llabs(D1);
    int N = detail::em_terms(s);
    Cpx w = 1.0 - s, sum = 0;
    for (long long a = 1; a <= m; ++a) {
        int chi = kronecker(Int(D1), Int(a));
        if (chi == 0) continue;
        double x = static_cast<double>(a) / static_cast<double>(m);
        // the pole terms cancel since sum chi(a) = 0: use (X^w - 1) / (-w), finite at s = 1
        double L = std::log(N + x);
        Cpx pole = std::abs(w) < 1e-8 ? -L * (1.0 + w * L / 2.0) : (std::exp(w * L) - 1.0) / (-w);
        sum += static_cast<double>(chi) * (detail::hurwitz_regular(s, x, N) + pole);
    }
    return std::pow(static_cast<double>(m), -s) * sum;
}

/// Completed zeta pi^{-s/2} Gamma(s/2) zeta(s).
inline Cpx xi(Cpx s) { return std::pow(std::numbers::pi, -s / 2.0) * gamma_c(s / 2.0) * zeta(s); }

struct BesselK {
    double K, dK;  // K_{it}(x) and its x-derivative
};

/// K_{it}(x) = int_0^inf exp(-x cosh u) cos(t u) du, with the derivative from the differentiated integrand.
inline BesselK bessel_K_imag_d(double t, double x) {
    if (!(x > 0)) throw std::domain_error("bessel_K_imag: x must be positive");
    if (std::abs(t) > 50) throw std::domain_error("bessel_K_imag: |t| > 50 unsupported");
    if (x > 700) return {0.0, 0.0};
    double umax = std::acosh(1 + 42 / x);
    // scaled by e^x; real part K, imaginary part K'
    auto f = [&](double u) {
        double s = std::sinh(u / 2), e = std::exp(-2 * x * s * s) * std::cos(t * u);
        return Cpx(e, -std::cosh(u) * e);
    };
    Cpx r = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, umax, 15, 1e-14);
    double ex = std::exp(-x);
    return {ex * r.real(), ex * r.imag()};
}

inline double bessel_K_imag(double t, double x) { return bessel_K_imag_d(t, x).K; }

struct Whittaker {
    double W0, Wp1, Wm1;  // W_{0,it}, W_{1,it}, W_{-1,it} at the same argument
};

/// W_{k,it}(y) for k = 0, 1, -1 from W_{0,it}(y) = sqrt(y/pi) K_{it}(y/2) and the derivative relations.
inline Whittaker whittaker_all(double t, double y) {
    if (!(y > 0)) throw std::domain_error("whittaker_W: y must be positive");
    BesselK k = bessel_K_imag_d(t, y / 2);
    double r = std::sqrt(y / std::numbers::pi);
    double W0 = r * k.K;
    double yW0p = 0.5 * W0 + r * (y / 2) * k.dK;  // y W0'(y)
    return {W0, 0.5 * y * W0 - yW0p, (yW0p + 0.5 * y * W0) / (0.25 + t * t)};
}

inline double whittaker_W(int k, double t, double y) {
    Whittaker w = whittaker_all(t, y);
    switch (k) {
        case 0: return w.W0;
        case 1: return w.Wp1;
        case -1: return w.Wm1;
        default: throw std::domain_error("whittaker_W: k must be 0, 1 or -1");
    }
}

}  // namespace qorb

#endif
