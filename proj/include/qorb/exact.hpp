#ifndef QORB_EXACT_HPP
#define QORB_EXACT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qorb {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int den(const Rat& x) { return boost::multiprecision::denominator(x); }

inline int sgn(const Int& x) { return x.sign(); }
inline int sgn(const Rat& x) { return x.sign(); }

inline Int iabs(const Int& x) { return x < 0 ? Int(-x) : x; }

inline Int gcd(Int a, Int b) {
    a = iabs(a);
    b = iabs(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

/// Floor division for signed big integers.
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
    return q;
}

inline Int mod(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += iabs(m);
    return r;
}

inline Int floor_rat(const Rat& x) { return floor_div(num(x), den(x)); }

/// Integer square root (floor).
inline Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const Int& n) {
    if (n < 0) return false;
    Int s = isqrt(n);
    return s * s == n;
}

/// Extended gcd: returns g and sets x, y with a x + b y = g >= 0.
inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        Int q = floor_div(old_r, r);
        Int tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    x = old_s;
    y = old_t;
    return old_r;
}

/// Inverse of a modulo m (m > 1); throws if not invertible.
inline Int inv_mod(const Int& a, const Int& m) {
    Int x, y;
    Int g = ext_gcd(mod(a, m), m, x, y);
    if (g != 1) throw std::domain_error("not invertible");
    return mod(x, m);
}

inline double to_double(const Int& x) { return x.convert_to<double>(); }
inline double to_double(const Rat& x) { return x.convert_to<double>(); }
inline long double to_ldouble(const Rat& x) { return x.convert_to<long double>(); }

inline std::string str(const Rat& x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

/// 2x2 integer matrix [[a,b],[c,d]].
struct Mat2 {
    Int a{1}, b{0}, c{0}, d{1};

    Mat2() = default;
    Mat2(Int a_, Int b_, Int c_, Int d_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

    static Mat2 identity() { return {}; }
    static Mat2 T() { return {1, 1, 0, 1}; }
    static Mat2 Tinv() { return {1, -1, 0, 1}; }
    static Mat2 S() { return {0, -1, 1, 0}; }

    Int det() const { return a * d - b * c; }
    Int trace() const { return a + d; }

    /// Inverse for determinant one matrices.
    Mat2 inv() const { return {d, -b, -c, a}; }
    Mat2 neg() const { return {-a, -b, -c, -d}; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const Mat2& x, const Mat2& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
    friend bool operator!=(const Mat2& x, const Mat2& y) { return !(x == y); }

    bool is_identity_psl() const { return (a == 1 && d == 1 && b == 0 && c == 0) || (a == -1 && d == -1 && b == 0 && c == 0); }

    /// Sign normalised representative of the PSL2 class (first nonzero of (c, d) positive).
    Mat2 psl() const {
        if (c < 0 || (c == 0 && d < 0)) return neg();
        return *this;
    }

    Int abs_trace() const { return iabs(a + d); }
    bool hyperbolic() const { return abs_trace() > 2; }
    bool parabolic() const { return abs_trace() == 2 && !is_identity_psl(); }
    bool elliptic() const { return abs_trace() < 2; }

    std::array<long long, 4> to_ll() const {
        return {a.convert_to<long long>(), b.convert_to<long long>(), c.convert_to<long long>(), d.convert_to<long long>()};
    }
};

inline bool psl_equal(const Mat2& x, const Mat2& y) { return x == y || x == y.neg(); }

inline Mat2 power(const Mat2& m, long long k) {
    Mat2 base = k < 0 ? m.inv() : m;
    if (k < 0) k = -k;
    Mat2 r;
    while (k) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

inline std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << "[[" << m.a << "," << m.b << "],[" << m.c << "," << m.d << "]]";
}

/// Point of P^1(Q): p/q with q = 0 meaning infinity; stored reduced with q >= 0.
struct Cusp {
    Int p{1}, q{0};

    Cusp() = default;
    Cusp(Int p_, Int q_) : p(std::move(p_)), q(std::move(q_)) { normalise(); }
    static Cusp infinity() { return {}; }
    static Cusp of(const Rat& x) { return {num(x), den(x)}; }

    void normalise() {
        Int g = gcd(p, q);
        if (g == 0) throw std::domain_error("0/0 cusp");
        p /= g;
        q /= g;
        if (q < 0 || (q == 0 && p < 0)) {
            p = -p;
            q = -q;
        }
    }
    bool is_inf() const { return q == 0; }
    Rat value() const { return Rat(p, q); }
    friend bool operator==(const Cusp& x, const Cusp& y) { return x.p == y.p && x.q == y.q; }
};

inline Cusp apply(const Mat2& m, const Cusp& x) { return {m.a * x.p + m.b * x.q, m.c * x.p + m.d * x.q}; }

}  // namespace qorb

#endif
