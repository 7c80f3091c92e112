#include <catch_amalgamated.hpp>

#include <qorb/shc.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <random>

using namespace qorb;

namespace {

// mpmath: legenp(-1/2 + it, 0, cosh r, type = 3) and its ball average
constexpr double kP = 0.197281880122509633;     // P_{-1/2+i}(cosh 2)
constexpr double kH11 = 0.851772903655199414;   // h_1(1)
constexpr double kH23 = -0.0845207278607502446; // h_2(3)

}  // namespace

TEST_CASE("ball volume and point-pair invariant") {
    CHECK(ball_volume(1.0) == 4 * std::numbers::pi * std::sinh(0.5) * std::sinh(0.5));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0, 1);
    for (int it = 0; it < 100; ++it) {
        Cpx z(U(rng) * 4 - 2, 0.1 + U(rng)), w(U(rng) * 4 - 2, 0.1 + 2 * U(rng));
        Mat2 g{2, 1, 7, 4};
        Cpx gz = detail::mobius_c(g, z), gw = detail::mobius_c(g, w);
        CHECK(std::abs(point_pair_u(gz, gw) - point_pair_u(z, w)) < 1e-9 * (1 + point_pair_u(z, w)));
        double r = hyperbolic_distance(z, w);
        CHECK(std::abs(std::sinh(r / 2) * std::sinh(r / 2) - point_pair_u(z, w)) < 1e-9 * (1 + point_pair_u(z, w)));
    }
}

TEST_CASE("transform at i/2 is one") {
    for (double R : {0.1, 1.0, 2.0, 5.0}) CHECK(std::abs(shc_transform(R, Cpx(0, 0.5)) - 1.0) < 1e-10);
}

TEST_CASE("conical function and transform against high-precision values") {
    CHECK(std::abs(conical_p(1.0, 2.0) - kP) < 1e-13);
    CHECK(std::abs(conical_p(Cpx(0, 0.5), 3.0) - 1.0) < 1e-13);
    CHECK(std::abs(shc_transform(1.0, 1.0) - kH11) < 1e-12);
    CHECK(std::abs(shc_transform(2.0, 3.0) - kH23) < 1e-12);
    CHECK_THROWS_AS(shc_transform(0, 1.0), std::domain_error);
}

TEST_CASE("ball convolution: plateau, support, bound and total mass") {
    double R = 1.0, rho = 0.3;
    CHECK(ball_convolution(R, rho, 0.5) == Catch::Approx(1 / ball_volume(R)).epsilon(1e-14));
    CHECK(ball_convolution(R, rho, R + rho) == 0.0);
    for (double d = 0; d < R + rho; d += 0.01) CHECK(ball_convolution(R, rho, d) <= 1 / ball_volume(R) * (1 + 1e-12));
    double mass = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double d) { return ball_convolution(R, rho, d) * 2 * std::numbers::pi * std::sinh(d); }, 0.0, R + rho, 12, 1e-12);
    CHECK(std::abs(mass - 1.0) < 1e-9);
}

TEST_CASE("sandwich inequality for the ball kernel at sampled pairs") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0, 1);
    for (int it = 0; it < 1000; ++it) {
        double R = 0.05 + 2.5 * U(rng), rho = (R - 1e-3) * U(rng) + 5e-4;
        Cpx w(U(rng) - 0.5, 0.3 + U(rng));
        Cpx z = w + Cpx((U(rng) - 0.5) * 2 * R, 0) * w.imag();
        z = {z.real(), w.imag() * std::exp((U(rng) - 0.5) * 3 * R)};
        Sandwich s = ball_sandwich(R, rho, hyperbolic_distance(z, w));
        INFO("R = " << R << " rho = " << rho << " " << s.lower << " " << s.middle << " " << s.upper);
        CHECK(s.holds());
    }
}

TEST_CASE("orbit enumeration against a direct search") {
    Cpx z(0.23, 0.71), w(-0.1, 1.2);
    double radius = 2.5;
    std::size_t direct = 0;
    for (long long c = 0; c <= 40; ++c)
        for (long long d = -40; d <= 40; ++d) {
            if ((c == 0 && d != 1) || std::gcd(c, d) != 1) continue;
            Int u, v;
            Mat2 g = c == 0 ? Mat2{} : (ext_gcd(Int(d), Int(c), u, v), Mat2{u, -v, Int(c), Int(d)});
            Cpx gz = detail::mobius_c(g, z);
            for (long long n = -40; n <= 40; ++n)
                if (hyperbolic_distance(gz + double(n), w) <= radius) ++direct;
        }
    CHECK(orbit_points_near(z, w, radius).size() == direct);
    CHECK(ht(Cpx(0.3, 0.1)) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(ht(Cpx(0.1, 2.0)) == Catch::Approx(2.0));
}

TEST_CASE("sandwich inequality for the automorphic kernels under the injectivity condition") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> U(0, 1);
    int tested = 0;
    for (int it = 0; it < 300; ++it) {
        Cpx w = reduce_to_fundamental(Cpx(U(rng) - 0.5, 0.5 + 2 * U(rng))).w;
        double R = std::asinh(1 / (2 * ht(w))) * (0.05 + 0.95 * U(rng));
        double rho = R * 0.9 * U(rng) + 1e-4;
        Cpx z(w.real() + (U(rng) - 0.5) * 2 * R, w.imag() * std::exp((U(rng) - 0.5) * 2 * R));
        if (2 * ht(w) * std::sinh(R) > 1) continue;
        ++tested;
        Sandwich s = automorphic_sandwich(R, rho, z, w);
        INFO("R = " << R << " rho = " << rho << " w = " << w << " z = " << z);
        CHECK(s.lower >= 0);
        CHECK(s.holds());
    }
    CHECK(tested >= 250);
}
