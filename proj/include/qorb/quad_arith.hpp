#ifndef QORB_QUAD_ARITH_HPP
#define QORB_QUAD_ARITH_HPP

#include "exact.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace qorb {

/// Squarefree test by trial division; fine for the discriminant sizes used here.
inline bool is_squarefree(Int n) {
    n = iabs(n);
    if (n == 0) return false;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return false;
        }
    }
    return true;
}

inline bool is_fundamental_discriminant(const Int& D) {
    if (D == 0 || D == 1) return false;
    Int m4 = mod(D, 4);
    if (m4 == 1) return is_squarefree(D);
    if (m4 == 0) {
        Int m = D / 4;
        Int r = mod(m, 4);
        return (r == 2 || r == 3) && is_squarefree(m);
    }
    return false;
}

/// Distinct prime factors of |n|.
inline std::vector<Int> prime_factors(Int n) {
    std::vector<Int> ps;
    n = iabs(n);
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

/// Kronecker symbol (a|b).
inline int kronecker(Int a, Int b) {
    static const int tab[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    if (b == 0) return iabs(a) == 1 ? 1 : 0;
    if (mod(a, 2) == 0 && mod(b, 2) == 0) return 0;
    int v = 0;
    while (mod(b, 2) == 0) {
        ++v;
        b /= 2;
    }
    int k = (v % 2 == 0) ? 1 : tab[static_cast<int>(mod(a, 8))];
    if (b < 0) {
        b = -b;
        if (a < 0) k = -k;
    }
    while (true) {
        if (a == 0) return b > 1 ? 0 : k;
        v = 0;
        while (mod(a, 2) == 0) {
            ++v;
            a /= 2;
        }
        if (v % 2 == 1) k *= tab[static_cast<int>(mod(b, 8))];
        if (mod(a, 4) == 3 && mod(b, 4) == 3) k = -k;
        Int r = iabs(a);
        a = mod(b, r);
        b = r;
    }
}

/// Exact element a + b sqrt(D) of Q(sqrt D). D == 0 marks a plain rational compatible with any field.
struct QuadIrr {
    Rat a{0}, b{0};
    Int D{0};

    QuadIrr() = default;
    QuadIrr(Rat a_) : a(std::move(a_)) {}
    QuadIrr(Rat a_, Rat b_, Int D_) : a(std::move(a_)), b(std::move(b_)), D(std::move(D_)) {
        if (b == 0) D = 0;
    }
    static QuadIrr sqrt_of(const Int& D) { return {0, 1, D}; }

    bool is_rational() const { return b == 0; }
    QuadIrr conj() const { return {a, -b, D}; }
    Rat norm() const { return a * a - b * b * Rat(D); }
    Rat trace() const { return 2 * a; }

    static Int join(const Int& x, const Int& y) {
        if (x == 0) return y;
        if (y == 0 || x == y) return x;
        throw std::domain_error("QuadIrr from different fields");
    }
    friend QuadIrr operator+(const QuadIrr& x, const QuadIrr& y) { return {x.a + y.a, x.b + y.b, join(x.D, y.D)}; }
    friend QuadIrr operator-(const QuadIrr& x, const QuadIrr& y) { return {x.a - y.a, x.b - y.b, join(x.D, y.D)}; }
    QuadIrr operator-() const { return {-a, -b, D}; }
    friend QuadIrr operator*(const QuadIrr& x, const QuadIrr& y) {
        Int d = join(x.D, y.D);
        return {x.a * y.a + x.b * y.b * Rat(d), x.a * y.b + x.b * y.a, d};
    }
    QuadIrr inv() const {
        Rat n = norm();
        if (n == 0) throw std::domain_error("QuadIrr division by zero");
        return {a / n, -b / n, D};
    }
    friend QuadIrr operator/(const QuadIrr& x, const QuadIrr& y) { return x * y.inv(); }
    friend bool operator==(const QuadIrr& x, const QuadIrr& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const QuadIrr& x, const QuadIrr& y) { return !(x == y); }

    /// Exact sign.
    int sign() const {
        int sa = sgn(a), sb = sgn(b);
        if (sb == 0) return sa;
        if (sa == 0 || sa == sb) return sb;
        int d = sgn(a * a - b * b * Rat(D));
        return sa > 0 ? d : -d;
    }
    friend bool operator<(const QuadIrr& x, const QuadIrr& y) { return (x - y).sign() < 0; }

    long double approx() const {
        return to_ldouble(a) + to_ldouble(b) * std::sqrt(static_cast<long double>(D.convert_to<long double>()));
    }

    Int floor() const {
        long double e = approx();
        Int n = (std::isfinite(e) && std::fabs(e) < 1e18L) ? Int(static_cast<long long>(std::floor(e))) : floor_rat(a);
        while ((*this - QuadIrr(Rat(n))).sign() < 0) n -= 1;
        while ((*this - QuadIrr(Rat(n + 1))).sign() >= 0) n += 1;
        return n;
    }
};

inline std::ostream& operator<<(std::ostream& os, const QuadIrr& x) {
    os << x.a;
    if (x.b != 0) os << (x.b > 0 ? "+" : "-") << (x.b > 0 ? x.b : Rat(-x.b)) << "*sqrt(" << x.D << ")";
    return os;
}

/// eps = u + v sqrt(D), the least totally positive unit > 1 of the maximal order.
struct PellUnit {
    Rat u, v;
    Int D;
    QuadIrr eps() const { return {u, v, D}; }
    double log_eps() const { return std::log(static_cast<double>(eps().approx())); }
};

/// Continued fraction of a reduced generator of the maximal order; the product of complete
/// quotients over one period is a unit, squared if its norm is -1.
inline PellUnit fundamental_unit(const Int& D) {
    if (D <= 1 || !(mod(D, 4) == 0 || mod(D, 4) == 1) || is_square(D))
        throw std::domain_error("fundamental_unit: need a nonsquare discriminant > 1");
    Rat sigma = mod(D, 2) == 1 ? Rat(1, 2) : Rat(0);
    QuadIrr omega(sigma, Rat(1, 2), D);
    Int k = (-omega.conj()).floor();
    QuadIrr xi0 = omega + QuadIrr(Rat(k));
    QuadIrr xi = xi0, eps(Rat(1));
    do {
        Int f = xi.floor();
        xi = (xi - QuadIrr(Rat(f))).inv();
        eps = eps * xi;
    } while (xi != xi0);
    if (eps.norm() < 0) eps = eps * eps;
    if (eps.sign() < 0) eps = -eps;
    if ((eps - QuadIrr(Rat(1))).sign() < 0) eps = eps.inv();
    return {eps.a, eps.b, D};
}

/// Binary quadratic form a x^2 + b x y + c y^2.
struct Form {
    Int a, b, c;
    Int disc() const { return b * b - 4 * a * c; }
    Int content() const { return gcd(gcd(a, b), c); }
    friend bool operator==(const Form& x, const Form& y) { return x.a == y.a && x.b == y.b && x.c == y.c; }
    friend bool operator!=(const Form& x, const Form& y) { return !(x == y); }
    friend bool operator<(const Form& x, const Form& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return x.c < y.c;
    }
};

inline std::ostream& operator<<(std::ostream& os, const Form& f) {
    return os << "[" << f.a << "," << f.b << "," << f.c << "]";
}

/// Point of the closed upper half plane: x + i sqrt(y2), or infinity. Boundary points have y2 == 0.
struct HPoint {
    bool inf{false};
    QuadIrr x;
    Rat y2{0};

    static HPoint infinity() { return {true, {}, 0}; }
    static HPoint real(QuadIrr x) { return {false, std::move(x), 0}; }
    static HPoint cusp(const Cusp& c) { return c.is_inf() ? infinity() : real(QuadIrr(c.value())); }
    static HPoint interior(Rat x, Rat y2) { return {false, QuadIrr(std::move(x)), std::move(y2)}; }
};

/// Exact sign of a|z|^2 + b Re z + c; at infinity the sign of a.
inline int form_sign_at(const Form& f, const HPoint& z) {
    if (z.inf) return sgn(f.a);
    QuadIrr v = QuadIrr(Rat(f.a)) * (z.x * z.x + QuadIrr(z.y2)) + QuadIrr(Rat(f.b)) * z.x + QuadIrr(Rat(f.c));
    return v.sign();
}

}  // namespace qorb

#endif
