#include <catch_amalgamated.hpp>

#include <qorb/experiments.hpp>

#include <map>
#include <random>

using namespace qorb;

namespace {

bool in_sector(Cpx z, double eps = 1e-12) { return z.real() >= -eps && z.real() <= 0.5 + eps && std::norm(z - 1.0) >= 1 - eps; }

/// Projective point (c : d) over F_q as the lexicographically least scalar multiple.
std::pair<long long, long long> p1_canonical(long long c, long long d, long long q) {
    std::pair<long long, long long> best{q, q};
    for (long long l = 1; l < q; ++l) best = std::min(best, {((l * c) % q + q) % q, ((l * d) % q + q) % q});
    return best;
}

Mat2 random_sl2(std::mt19937_64& rng, long long range) {
    for (;;) {
        long long c = static_cast<long long>(rng() % (2 * range + 1)) - range, d = static_cast<long long>(rng() % (2 * range + 1)) - range;
        if (std::gcd(c, d) != 1) continue;
        Int u, v;
        ext_gcd(Int(d), Int(c), u, v);  // d u + c v = 1
        return {u, -v, Int(c), Int(d)};
    }
}

}  // namespace

TEST_CASE("point reduction lands in the sector and records the coset") {
    auto r = reduce_point(Cpx(5, 1), 11);
    CHECK(r.coset == coset_index(Mat2{}, 11));
    CHECK(std::abs(r.rep - Cpx(0, 1)) < 1e-14);
    CHECK(reduce_point(Cpx(0.25, 2), 11).coset == coset_index(Mat2{}, 11));
    CHECK_THROWS_AS(reduce_point(Cpx(0.1, 0), 11), std::domain_error);

    SpecialPolygon P = polygon_for_level(11);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0, 1);
    for (int it = 0; it < 2000; ++it) {
        Cpx z(4 * U(rng) - 2, 0.01 + 2 * U(rng));
        PointReduction a = reduce_point(z, 11);
        INFO("z = " << z);
        CHECK(in_sector(a.rep));
        CHECK(std::abs(detail::mobius_d(a.gamma, z) - a.rep) < 1e-9 * (1 + std::abs(a.rep)));
        // left translation by Gamma_0(11) keeps the coset
        Mat2 g;
        for (int k = 0; k < 3; ++k) g = g * P.label(static_cast<int>(rng() % P.N()));
        PointReduction b = reduce_point(detail::mobius_d(g, z), 11);
        CHECK(b.coset == a.coset);
    }
}

TEST_CASE("coset classification agrees with a projective line computed by scaling") {
    std::mt19937_64 rng(99);
    for (long long q : {7, 11, 13}) {
        std::map<long long, std::pair<long long, long long>> seen;
        std::map<std::pair<long long, long long>, long long> back;
        for (int it = 0; it < 100000; ++it) {
            Mat2 m = random_sl2(rng, 1000);
            long long idx = coset_index(m, q);
            auto canon = p1_canonical(m.c.convert_to<long long>(), m.d.convert_to<long long>(), q);
            auto [i1, new1] = seen.emplace(idx, canon);
            auto [i2, new2] = back.emplace(canon, idx);
            REQUIRE(i1->second == canon);
            REQUIRE(i2->second == idx);
        }
        CHECK(seen.size() == static_cast<std::size_t>(q + 1));
    }
}

TEST_CASE("coset masses for a split family") {
    ExperimentConfig cfg;
    cfg.D = {12, 92, 13, 188};
    cfg.samples = 100000;
    EquidistributionResult R = equidistribute(cfg);
    REQUIRE(R.tables.size() == 3);
    REQUIRE(R.warnings.size() == 1);
    CHECK(R.warnings[0].find("13") != std::string::npos);
    for (const CosetMassTable& T : R.tables) {
        INFO("D = " << T.D);
        CHECK(T.nu() == 12);
        CHECK(T.coset_ids.front() == "(0:1)");
        CHECK(T.coset_ids.back() == "(1:0)");
        CHECK(std::abs(T.mass_sum - 1) <= 3 * T.sum_sigma + 1e-12);
        CHECK(T.masses_in_unit_interval());
        // the union over the class group covers the modular surface with constant multiplicity
        CHECK(T.sum_sigma < 1e-12);
        CHECK(T.deviation >= 0);
    }
    std::string csv = mass_tables_csv(R.tables);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 12);
}

TEST_CASE("coset masses are seed-reproducible and stable under doubling the samples") {
    NarrowClassGroup G(Int(92));
    Int r = residues_r(Int(92), Int(11)).front();
    CosetMassTable a = coset_masses(G, 11, r, "all", 40000, 7), b = coset_masses(G, 11, r, "all", 40000, 7);
    CHECK(a.masses == b.masses);
    CHECK(a.sigmas == b.sigmas);
    CosetMassTable c = coset_masses(G, 11, r, "all", 80000, 8);
    for (std::size_t k = 0; k < a.masses.size(); ++k) {
        double s = std::hypot(a.sigmas[k], c.sigmas[k]);
        CHECK(std::abs(a.masses[k] - c.masses[k]) <= 3 * s + 1e-12);
    }
    CHECK(coset_masses(G, 11, r, "principal-genus", 20000, 1).classes == 1);
    CHECK_THROWS_AS(coset_masses(G, 11, r, "bogus", 10, 1), std::domain_error);
    CHECK_THROWS_AS(coset_masses(G, 11, r + 1, "all", 10, 1), std::domain_error);
}

TEST_CASE("complementary domains cover the modular surface evenly at level one") {
    for (long long D : {5, 12, 13, 40, 60, 65, 85, 92, 105, 145, 221}) {
        ComplementarityReport R = complementarity_check(D, 10000, 3);
        INFO("D = " << D);
        CHECK(R.ok());
        CHECK(R.J_in_principal_genus == !has_prime_3_mod_4(D));
        for (const ComplementPair& p : R.pairs) {
            CHECK(p.partner_is_J_over_class);
            CHECK(p.constant());
            CHECK(p.integral_within(0.01));
            CHECK(p.multiplicity_min >= 1);
        }
        if (R.J_in_principal_genus) CHECK(R.genus_cover_constant());
    }
    // J outside the principal genus: the genus sum is not constant
    CHECK_FALSE(complementarity_check(12).genus_cover_constant());
}

TEST_CASE("figure rendering is deterministic and has the expected arcs") {
    SpecialPolygon P = polygon_for_level(11);
    std::string s = render_svg(Mat2{7, -2, 11, -3}, P);
    CHECK(s == render_svg(Mat2{7, -2, 11, -3}, P));
    CHECK(count_svg_class(s, "complete") == 3);
    CHECK(count_svg_class(s, "partial") == 2);
    CHECK(count_svg_class(s, "geodesic") == 1);
    CHECK(count_svg_class(s, "polygon-side") == 6);
    CHECK(count_svg_class(render_svg(Mat2{107, -41, 154, -59}, P), "complete") == 9);
    RenderOptions opt;
    opt.projection = true;
    std::string f = render_svg(Mat2{19, 10, 55, 29}, P, opt);
    CHECK(f.find("<clipPath id=\"polygon\">") != std::string::npos);
    CHECK(count_svg_class(f, "projection") == 5);
    CHECK(f.rfind("</svg>\n") == f.size() - 7);
}
