#include <catch_amalgamated.hpp>

#include <qorb/orbifold.hpp>

#include <random>

using namespace qorb;

namespace {

const Mat2 kFig2{7, -2, 11, -3};
const Mat2 kFig3{107, -41, 154, -59};
const Mat2 kFig4{19, 10, 55, 29};

bool cyclic_equal(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t s = 0; s < a.size(); ++s) {
        bool ok = true;
        for (std::size_t i = 0; i < a.size() && ok; ++i) ok = a[(i + s) % a.size()] == b[i];
        if (ok) return true;
    }
    return a.empty();
}

Mat2 random_word(const SpecialPolygon& P, std::mt19937_64& rng, int len) {
    Mat2 g;
    for (int i = 0; i < len; ++i) g = g * P.label(static_cast<int>(rng() % P.N()));
    return g;
}

/// Random hyperbolic element of Gamma_0(q) with |trace| <= cap.
Mat2 random_hyperbolic(const SpecialPolygon& P, std::mt19937_64& rng, const Int& cap) {
    for (;;) {
        Mat2 g = random_word(P, rng, 2 + static_cast<int>(rng() % 6));
        if (g.hyperbolic() && g.abs_trace() <= cap) return g;
    }
}

bool crosses_elliptic_side(const OrbifoldDomain& O, const SpecialPolygon& P) {
    for (const Frame& f : O.frames)
        for (int s : {f.entry, f.exit})
            if (P.sides[s].kind == SideKind::Elliptic2 || P.sides[s].kind == SideKind::Elliptic3) return true;
    return false;
}

bool in_closed_polygon(const SpecialPolygon& P, const HPoint& z) {
    for (int j = 0; j < P.N(); ++j) {
        int s = form_sign_at(P.sides[j].geo, z);
        if (s != 0 && s != P.inner_sign(j)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("sector reduction is exact and lands in the sector") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 300; ++it) {
        Rat x(static_cast<long long>(rng() % 20001) - 10000, 997), y2(static_cast<long long>(rng() % 5000) + 1, 100003);
        HPoint z = HPoint::interior(x, y2), w = z;
        Mat2 g = reduce_to_sector(w);
        CHECK(g.det() == 1);
        CHECK(w.x.a >= 0);
        CHECK(w.x.a <= Rat(1, 2));
        CHECK((w.x.a - 1) * (w.x.a - 1) + w.y2 >= 1);
        HPoint gz = mobius(g, z);
        CHECK(gz.x == w.x);
        CHECK(gz.y2 == w.y2);
    }
}

TEST_CASE("sector translates are coset representatives lying in the polygon") {
    HPoint inside = HPoint::interior(Rat(1, 4), Rat(3));  // interior point of the sector
    for (long long q : {1, 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
        SpecialPolygon P = polygon_for_level(q);
        auto hs = sector_translates(P);
        INFO("q = " << q);
        REQUIRE(hs.size() == static_cast<std::size_t>(q == 1 ? 1 : q + 1));
        std::set<long long> cosets;
        for (const Mat2& h : hs) {
            cosets.insert(coset_index(h, q));
            CHECK(in_closed_polygon(P, mobius(h, inside)));
        }
        CHECK(cosets.size() == hs.size());
    }
}

TEST_CASE("reduced word length one example") {
    SpecialPolygon P = polygon_for_level(11);
    Positioned pos = position_in_polygon(kFig2, P);
    CHECK(pos.gamma == kFig2);
    CHECK(pos.delta.is_identity_psl());
    OrbifoldDomain O = fundamental_domain(kFig2, P);
    CHECK(O.code.word == std::vector<int>{3});
    CHECK(O.code.m() == 0);
    std::vector<int> sides;
    for (const auto& p : O.pieces) sides.push_back(p.side);
    CHECK(sides == std::vector<int>{4, 5, 0});
    CHECK(O.entry.side == 1);
    CHECK(O.exit.prefix == kFig2);
    CHECK(O.complete_arcs() == 3);
    CHECK(O.partial_arcs() == 2);
    CHECK(O.omega.size() == 3);
    CHECK(O.e2 == 3);
    CHECK(O.e3 == 0);
    CHECK(O.volume_over_pi() == 3);
    for (const Mat2& w : O.omega) CHECK(w.trace() == 0);
}

TEST_CASE("class J of discriminant 92 at level 11") {
    SpecialPolygon P = polygon_for_level(11);
    OrbifoldDomain O = fundamental_domain(kFig4, P);
    CHECK(O.delta.is_identity_psl());
    // alpha_3 T alpha_2 alpha_3^{-1} T in the 1-based labelling
    CHECK(cyclic_equal(O.code.word, {2, 5, 1, 4, 5}));
    CHECK(psl_equal(word_product(O.code, P), kFig4));
    BoundaryChain B = boundary_chain(O, P);
    CHECK(B.basis == std::vector<int>{1, 2});
    CHECK(B.homology == std::vector<long long>{0, -1});
    CHECK(B.multiplicity[1] == 0);
    CHECK(B.multiplicity[2] == 1);
    CHECK(B.null_homologous());
    CHECK(O.volume_over_pi() == 17);
}

TEST_CASE("reduced word length three example") {
    SpecialPolygon P = polygon_for_level(11);
    OrbifoldDomain O = fundamental_domain(kFig3, P);
    CHECK(O.delta.is_identity_psl());
    CHECK(cyclic_equal(O.code.word, {4, 3, 4}));
    CHECK(O.complete_arcs() == 9);
    CHECK(O.partial_arcs() == 2);
    CHECK(O.volume_over_pi() == 9);
    BoundaryChain B = boundary_chain(O, P);
    CHECK(B.homology == std::vector<long long>{-2, 1});
    CHECK(B.null_homologous());
}

TEST_CASE("Morse words multiply back to the element") {
    std::mt19937_64 rng(2024);
    for (long long q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 1}) {
        SpecialPolygon P = polygon_for_level(q);
        for (int it = 0; it < 40; ++it) {
            Mat2 g = random_hyperbolic(P, rng, Int(1000000));
            Positioned pos = position_in_polygon(g, P);
            MorseCode mc = morse_code(pos.gamma, P);
            INFO("q = " << q << " gamma = " << g);
            CHECK(pos.delta.det() == 1);
            if (q > 1) CHECK(mod(pos.delta.c, Int(q)) == 0);
            CHECK(pos.delta * pos.gamma * pos.delta.inv() == g);
            CHECK(psl_equal(word_product(mc, P), pos.gamma));
            CHECK(crossing_sides(P, pos.gamma).size() == 2);
        }
    }
}

TEST_CASE("conjugate elements give rotated Morse words") {
    std::mt19937_64 rng(7);
    for (long long q : {5, 11, 13, 19}) {
        SpecialPolygon P = polygon_for_level(q);
        for (int it = 0; it < 25; ++it) {
            Mat2 g = random_hyperbolic(P, rng, Int(100000));
            Mat2 d = random_word(P, rng, 1 + static_cast<int>(rng() % 4));
            MorseCode a = morse_code(position_in_polygon(g, P).gamma, P);
            MorseCode b = morse_code(position_in_polygon(d * g * d.inv(), P).gamma, P);
            INFO("q = " << q << " gamma = " << g << " delta = " << d);
            CHECK(cyclic_equal(a.word, b.word));
        }
    }
}

TEST_CASE("arc indices") {
    CHECK(arc(3, 1, 6) == std::vector<int>{4, 5, 0});
    CHECK(arc(1, 3, 6) == std::vector<int>{2});
    CHECK(arc(2, 3, 6).empty());
    CHECK(arc(4, 4, 6).empty());
}

TEST_CASE("omega elements are elliptic of order two or three") {
    std::mt19937_64 rng(99);
    for (long long q : {2, 3, 5, 7, 11, 13, 17, 19, 1}) {
        SpecialPolygon P = polygon_for_level(q);
        for (int it = 0; it < 20; ++it) {
            OrbifoldDomain O = fundamental_domain(random_hyperbolic(P, rng, Int(100000)), P);
            for (const Mat2& w : O.omega) {
                CHECK(w.det() == 1);
                CHECK((w.trace() == 0 || w.abs_trace() == 1));
            }
            CHECK(O.e2 + O.e3 == static_cast<int>(O.omega.size()));
        }
    }
}

TEST_CASE("boundary of the domain is null-homologous and misses elliptic and parabolic sides") {
    std::mt19937_64 rng(5);
    auto check = [](const OrbifoldDomain& O, const SpecialPolygon& P) {
        BoundaryChain B = boundary_chain(O, P);
        CHECK(B.null_homologous());
        for (int j = 0; j < P.N(); ++j)
            if (P.sides[j].kind != SideKind::Hyperbolic) CHECK(B.multiplicity[j] == 0);
    };
    for (long long q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 1}) {
        SpecialPolygon P = polygon_for_level(q);
        for (int it = 0; it < 30; ++it) check(fundamental_domain(random_hyperbolic(P, rng, Int(1000000)), P), P);
    }
    for (auto [D, q] : std::vector<std::pair<long long, long long>>{{12, 11}, {92, 11}, {40, 13}}) {
        NarrowClassGroup G(D);
        SpecialPolygon P = polygon_for_level(q);
        for (const Int& r : residues_r(D, q))
            for (const HeegnerForm& h : heegner_forms_for_classes(G, q, r)) {
                INFO("D = " << D << " r = " << r << " form " << h.f);
                check(fundamental_domain(gamma_Q(h.f), P), P);
            }
    }
}

TEST_CASE("volume formula against sampled area of the worked examples", "[montecarlo]") {
    SpecialPolygon P = polygon_for_level(11);
    for (const Mat2& g : {kFig2, kFig3, kFig4}) {
        OrbifoldDomain O = fundamental_domain(g, P);
        AreaEstimate A = monte_carlo_area(O, P, 1000000, 17);
        INFO("gamma = " << g << " area " << A.area << " +- " << A.stderr_);
        CHECK(std::abs(A.area - O.volume()) / O.volume() < 0.01);
    }
}

TEST_CASE("volume formula against sampled area when no elliptic side is crossed", "[montecarlo]") {
    std::mt19937_64 rng(31);
    int tested = 0;
    for (long long q : {5, 7, 11, 13, 17, 19, 23}) {
        SpecialPolygon P = polygon_for_level(q);
        for (int it = 0; it < 60; ++it) {
            OrbifoldDomain O = fundamental_domain(random_hyperbolic(P, rng, Int(100000)), P);
            if (crosses_elliptic_side(O, P)) continue;
            ++tested;
            AreaEstimate A = monte_carlo_area(O, P, 100000, static_cast<std::uint64_t>(it));
            INFO("q = " << q << " area " << A.area << " +- " << A.stderr_ << " formula " << O.volume());
            CHECK(std::abs(A.area - O.volume()) < 5 * A.stderr_ + 1e-9);
        }
    }
    CHECK(tested >= 60);
}

TEST_CASE("volume is positive and grows with the regulator") {
    SpecialPolygon P = polygon_for_level(11);
    double worst = 1e9;
    for (long long D : {12, 60, 92, 105, 124, 136, 165, 177, 201, 221, 232, 237}) {
        if (!is_fundamental_discriminant(D) || kronecker(D, 11) != 1) continue;
        NarrowClassGroup G(D);
        auto rs = residues_r(D, 11);
        for (const HeegnerForm& h : heegner_forms_for_classes(G, 11, rs.front())) {
            OrbifoldDomain O = fundamental_domain(gamma_Q(h.f), P);
            double ratio = O.volume() / (fundamental_unit(D).log_eps() / std::log(11.0 * D));
            worst = std::min(worst, ratio);
            CHECK(O.volume() >= std::numbers::pi);
        }
    }
    CHECK(worst > 1.0);
}
