#include <catch_amalgamated.hpp>

#include <qorb/quad_arith.hpp>

#include <optional>

using namespace qorb;

namespace {

// Smallest 0 < y <= ymax with x^2 - D y^2 = 4; the unit is (x + y sqrt D)/2.
std::optional<std::pair<Int, Int>> pell_brute(long long D, long long ymax) {
    for (long long y = 1; y <= ymax; ++y) {
        Int x2 = Int(D) * y * y + 4;
        if (is_square(x2)) return std::make_pair(isqrt(x2), Int(y));
    }
    return std::nullopt;
}

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

long long powmod(long long b, long long e, long long m) {
    long long r = 1;
    b %= m;
    if (b < 0) b += m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

}  // namespace

TEST_CASE("fundamental discriminant recognition") {
    CHECK(is_fundamental_discriminant(12));
    CHECK(is_fundamental_discriminant(5));
    CHECK_FALSE(is_fundamental_discriminant(2300));
    CHECK(is_fundamental_discriminant(92));
    CHECK(is_fundamental_discriminant(40));
    CHECK_FALSE(is_fundamental_discriminant(16));
    CHECK_FALSE(is_fundamental_discriminant(9));
    CHECK(is_fundamental_discriminant(-4));
    CHECK(is_fundamental_discriminant(-3));
}

TEST_CASE("fundamental unit examples") {
    auto e12 = fundamental_unit(12);
    CHECK(e12.u == 2);
    CHECK(e12.v == Rat(1, 2));
    auto e92 = fundamental_unit(92);
    CHECK(e92.u == 24);
    CHECK(e92.v == Rat(5, 2));
    auto e5 = fundamental_unit(5);
    CHECK(e5.u == Rat(3, 2));
    CHECK(e5.v == Rat(1, 2));
}

TEST_CASE("fundamental unit agrees with brute force up to 500") {
    for (long long D = 5; D <= 500; ++D) {
        if (!is_fundamental_discriminant(D)) continue;
        auto e = fundamental_unit(D);
        INFO("D = " << D);
        CHECK(e.u * e.u - Rat(D) * e.v * e.v == 1);
        CHECK(e.u > 0);
        CHECK(e.v > 0);
        // exhaustive search is affordable only when the unit is small; otherwise it must find nothing
        auto bf = pell_brute(D, 200000);
        if (bf) {
            CHECK(e.u == Rat(bf->first, 2));
            CHECK(e.v == Rat(bf->second, 2));
        } else {
            CHECK(2 * e.v > 200000);
        }
        // (2u + 2v sqrt D)/2 lies in the maximal order: 2u = 2v D mod 2
        CHECK(mod(num(2 * e.u) - num(2 * e.v) * D, 2) == 0);
    }
}

TEST_CASE("kronecker symbol examples") {
    CHECK(kronecker(92, 11) == 1);
    CHECK(kronecker(12, 3) == 0);
    CHECK(kronecker(5, 2) == -1);
    CHECK(kronecker(-4, -1) == -1);
    CHECK(kronecker(12, -1) == 1);
}

TEST_CASE("kronecker symbol matches Euler criterion at odd primes") {
    for (long long D : {5, 8, 12, 13, 40, 92, 93, -3, -4, -7}) {
        for (long long p = 3; p < 200; ++p) {
            if (!is_prime(p)) continue;
            long long e = powmod(D, (p - 1) / 2, p);
            int expect = e == 0 ? 0 : (e == 1 ? 1 : -1);
            INFO("D = " << D << " p = " << p);
            CHECK(kronecker(D, p) == expect);
        }
    }
}

TEST_CASE("kronecker symbol is multiplicative and periodic for fundamental D") {
    for (long long D : {5, 8, 12, 13, 21, 40, 92}) {
        for (long long m = 1; m < 60; ++m)
            for (long long n = 1; n < 60; ++n) CHECK(kronecker(D, m * n) == kronecker(D, m) * kronecker(D, n));
        for (long long n = 1; n < 200; ++n) CHECK(kronecker(D, n) == kronecker(D, n + D));
    }
}

TEST_CASE("quadratic irrational arithmetic") {
    QuadIrr x(Rat(3, 2), Rat(1, 2), 5);
    CHECK(x.norm() == 1);
    CHECK(x * x.conj() == QuadIrr(Rat(1)));
    CHECK(x * x.inv() == QuadIrr(Rat(1)));
    CHECK(QuadIrr(0, 1, 3).sign() == 1);
    CHECK(QuadIrr(Rat(-2), Rat(1), 3).sign() == -1);
    CHECK(QuadIrr(Rat(2), Rat(-1), 3).sign() == 1);
    CHECK(QuadIrr(Rat(1, 2), Rat(1, 2), 5).floor() == 1);
    CHECK(QuadIrr(Rat(1, 2), Rat(-1, 2), 5).floor() == -1);
}

TEST_CASE("form sign predicate examples") {
    Form Q{-11, 10, -2};
    CHECK(form_sign_at(Q, HPoint::real(QuadIrr(Rat(1, 2)))) == 1);
    CHECK(form_sign_at(Q, HPoint::infinity()) == -1);
    CHECK(form_sign_at({1, 0, -3}, HPoint::real(QuadIrr::sqrt_of(3))) == 0);
}

TEST_CASE("form sign vanishes exactly at the two roots") {
    for (long long D : {5, 12, 13, 92}) {
        for (long long a = -6; a <= 6; ++a) {
            if (a == 0) continue;
            for (long long b = -9; b <= 9; ++b) {
                if (mod(Int(b * b - D), Int(4 * a)) != 0) continue;
                Form Q{a, b, (Int(b * b) - D) / (4 * a)};
                QuadIrr r1(Rat(-b) / (2 * a), Rat(1) / (2 * a), D), r2 = r1.conj();
                CHECK(form_sign_at(Q, HPoint::real(r1)) == 0);
                CHECK(form_sign_at(Q, HPoint::real(r2)) == 0);
                for (long long k = -3; k <= 3; ++k)
                    CHECK(form_sign_at(Q, HPoint::real(QuadIrr(Rat(k, 3)))) != 0);
            }
        }
    }
}
