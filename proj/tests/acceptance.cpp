// One line per acceptance criterion with the measured values.
// Exit status: 0 when every failing criterion is listed in --known-failures, 1 otherwise.

#include <qorb/analytic.hpp>
#include <qorb/experiments.hpp>
#include <qorb/shc.hpp>

#include <chrono>
#include <cstring>
#include <iostream>
#include <set>
#include <sstream>

using namespace qorb;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double x, int digits = 3) { return format_double(x, digits); }

Outcome golden_level_11() {
    FareySymbol F = farey_symbol(11);
    SpecialPolygon P = special_polygon(F);
    std::vector<std::string> verts;
    for (const Side& s : P.sides) {
        std::ostringstream os;
        if (s.v1.inf)
            os << "inf";
        else
            os << s.v1.x;
        verts.push_back(os.str());
    }
    bool v = verts == std::vector<std::string>{"inf", "0", "1/3", "1/2", "2/3", "1"};
    std::vector<Mat2> expect{{1, -1, 0, 1}, {-3, 2, -11, 7}, {4, -3, 11, -8}, {7, -2, 11, -3}, {-8, 3, -11, 4}, {1, 1, 0, 1}};
    int match = 0;
    for (int j = 0; j < P.N() && j < 6; ++j) match += psl_equal(P.label(j), expect[j]);
    return {v && P.N() == 6 && match == 6, "vertices " + std::string(v ? "match" : "differ") + ", labels " + std::to_string(match) + "/6 exact"};
}

Outcome automorph_reproduction() {
    NarrowClassGroup G12(12), G92(92);
    Form f12 = heegner_forms_for_classes(G12, 11, 10)[G12.class_J()].f;
    Form f92 = heegner_forms_for_classes(G92, 11, -2)[G92.class_J()].f;
    Mat2 g12 = gamma_Q(f12), g92 = gamma_Q(f92);
    bool traces = Rat(g12.trace()) == 2 * fundamental_unit(12).u && Rat(g92.trace()) == 2 * fundamental_unit(92).u;
    bool ok = g12 == Mat2(7, -2, 11, -3) && g92 == Mat2(19, 10, 55, 29) && traces;
    std::ostringstream os;
    os << "D=12 " << f12 << " -> " << g12 << ", D=92 " << f92 << " -> " << g92 << ", traces 2u: " << (traces ? "yes" : "no");
    return {ok, os.str()};
}

Outcome stabiliser_products() {
    std::string d;
    bool ok = true;
    for (long long q : {5, 7, 11, 13, 17}) {
        TOrbit o = t_orbit_of(special_polygon(farey_symbol(q)), 0);
        bool e = psl_equal(o.product, Mat2(1, 0, -q, 1));
        ok = ok && e;
        d += "q=" + std::to_string(q) + (e ? " ok " : " FAIL ");
    }
    return {ok, d};
}

Outcome morse_exactness() {
    SpecialPolygon P = polygon_for_level(11);
    std::mt19937_64 rng(4);
    int good = 0, n = 0;
    while (n < 100) {
        Mat2 g;
        int len = 2 + static_cast<int>(rng() % 8);
        for (int i = 0; i < len; ++i) g = g * P.label(static_cast<int>(rng() % P.N()));
        if (!g.hyperbolic() || g.abs_trace() > 1000000) continue;
        ++n;
        Positioned pos = position_in_polygon(g, P);
        MorseCode mc = morse_code(pos.gamma, P);
        good += psl_equal(pos.delta * word_product(mc, P) * pos.delta.inv(), g);
    }
    return {good == 100, std::to_string(good) + "/100 words multiply back exactly"};
}

Outcome boundary_structure() {
    SpecialPolygon P = polygon_for_level(11);
    OrbifoldDomain f2 = fundamental_domain(Mat2{7, -2, 11, -3}, P), f3 = fundamental_domain(Mat2{107, -41, 154, -59}, P);
    std::string svg = render_svg(Mat2{7, -2, 11, -3}, P);
    bool ok = f2.complete_arcs() == 4 && f2.partial_arcs() == 2 && f3.complete_arcs() == 9;
    return {ok, "[[7,-2],[11,-3]]: " + std::to_string(f2.complete_arcs()) + " complete + " + std::to_string(f2.partial_arcs()) +
                    " partial (expected 4 + 2; SVG " + std::to_string(count_svg_class(svg, "complete")) + " + " +
                    std::to_string(count_svg_class(svg, "partial")) + " + " + std::to_string(count_svg_class(svg, "geodesic")) +
                    " geodesic); [[107,-41],[154,-59]]: " + std::to_string(f3.complete_arcs()) + " semicircles (expected 9)"};
}

Outcome homology() {
    int classes = 0, bad = 0;
    for (long long D : {12, 92}) {
        NarrowClassGroup G(D);
        SpecialPolygon P = polygon_for_level(11);
        for (const Int& r : residues_r(D, 11))
            for (const HeegnerForm& h : heegner_forms_for_classes(G, 11, r)) {
                ++classes;
                OrbifoldDomain O = fundamental_domain(gamma_Q(h.f), P);
                BoundaryChain B = boundary_chain(O, P);
                bool ok = B.null_homologous();
                for (int j = 0; j < P.N(); ++j)
                    if (P.sides[j].kind != SideKind::Hyperbolic && B.multiplicity[j] != 0) ok = false;
                bad += !ok;
            }
    }
    return {bad == 0, std::to_string(classes - bad) + "/" + std::to_string(classes) + " classes (all residues) null-homologous, no elliptic/parabolic multiplicity"};
}

Outcome volumes() {
    SpecialPolygon P = polygon_for_level(11);
    std::string d;
    bool ok = true;
    for (const Mat2& g : {Mat2{7, -2, 11, -3}, Mat2{107, -41, 154, -59}, Mat2{19, 10, 55, 29}}) {
        OrbifoldDomain O = fundamental_domain(g, P);
        AreaEstimate A = monte_carlo_area(O, P, 1000000, 17);
        double rel = std::abs(A.area - O.volume()) / O.volume();
        ok = ok && rel < 0.01;
        d += str(O.volume_over_pi()) + "pi vs " + fmt(A.area, 6) + " (rel " + fmt(rel, 2) + ") ";
    }
    return {ok, d};
}

Outcome level_one_identity() {
    double worst = 0;
    for (auto [D, t] : std::vector<std::pair<long long, double>>{{5, 1.0}, {12, 0.5}, {12, 1.0}}) {
        NarrowClassGroup G(D);
        Eisenstein E(t);
        for (const ClassIntegrals& c : class_integrals(G, 1, E, 1, true)) {
            Cpx lhs = E.eigenvalue() * c.area->value;
            worst = std::max(worst, std::abs(lhs - c.cycle) / std::max({std::abs(lhs), std::abs(c.cycle), 1.0}));
        }
    }
    return {worst < 1e-4, "max rel err " + fmt(worst, 2) + " over all classes (denominator floored at 1)"};
}

Outcome closed_form() {
    double worst = 0, worst_neg = 0, worst_zero = 0;
    int cases = 0, vanishing = 0;
    for (long long D : {12, 40, 92}) {
        NarrowClassGroup G(D);
        for (double t : {0.5, 1.0})
            for (const ClassCharacter& chi : genus_characters(G)) {
                WeylReport R = weyl_report(G, chi, t);
                ++cases;
                if (std::abs(chi(G.class_J()) - 1.0) < 1e-12) {
                    ++vanishing;
                    worst_zero = std::max({worst_zero, std::abs(R.lhs_numeric), std::abs(R.rhs_closed)});
                } else {
                    worst = std::max(worst, R.rel_err);
                    worst_neg = std::max(worst_neg, R.rel_err_negated());
                }
            }
    }
    bool ok = worst < 1e-5 && worst_zero < 1e-6;
    return {ok, std::to_string(cases) + " cases: chi(J)=-1 max rel err " + fmt(worst) + " (against the negated closed form " +
                    fmt(worst_neg, 2) + "); chi(J)=1 (" + std::to_string(vanishing) + ") max |side| " + fmt(worst_zero, 2)};
}

Outcome oldform_relation() {
    NarrowClassGroup G(12);
    double worst = 0;
    for (long long ell : {1, 11})
        for (const ClassCharacter& chi : genus_characters(G)) worst = std::max(worst, oldform_weyl_relation(G, chi, 1.0, 11, ell).rel_err_floored());
    return {worst < 1e-3, "D=12 q=11 t=1 l in {1,11}, all genus characters: max rel err " + fmt(worst, 2) + " (denominator floored at 1)"};
}

Outcome shc() {
    double worst = 0;
    for (double R : {0.1, 1.0, 2.0}) worst = std::max(worst, std::abs(shc_transform(R, Cpx(0, 0.5)) - 1.0));
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0, 1);
    int held = 0;
    for (int it = 0; it < 1000; ++it) {
        double R = 0.05 + 2.5 * U(rng), rho = (R - 1e-3) * U(rng) + 5e-4;
        Cpx w(U(rng) - 0.5, 0.3 + U(rng));
        Cpx z(w.real() + (U(rng) - 0.5) * 2 * R * w.imag(), w.imag() * std::exp((U(rng) - 0.5) * 3 * R));
        held += ball_sandwich(R, rho, hyperbolic_distance(z, w)).holds();
    }
    return {worst < 1e-10 && held == 1000, "max |h_R(i/2) - 1| " + fmt(worst, 2) + ", sandwich holds at " + std::to_string(held) + "/1000 pairs"};
}

Outcome equidistribution() {
    ExperimentConfig cfg;
    cfg.samples = 200000;
    EquidistributionResult R = equidistribute(cfg);
    bool ok = !R.tables.empty();
    std::string d = "D:deviation";
    for (const CosetMassTable& T : R.tables) {
        ok = ok && std::abs(T.mass_sum - 1) <= 3 * T.sum_sigma + 1e-12 && T.masses_in_unit_interval() && T.nu() == 12;
        d += " " + std::to_string(T.D) + ":" + fmt(T.deviation, 3);
    }
    return {ok, std::to_string(R.tables.size()) + " tables of 12 cosets, sums = 1 within 3 sigma, masses in [0,1]; " + d};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> known;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--known-failures") == 0) {
            std::stringstream ss(argv[i + 1]);
            for (std::string t; std::getline(ss, t, ',');) known.insert(std::stoi(t));
        }

    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "level 11 golden data", 1, golden_level_11},
        {2, "automorph reproduction", 1, automorph_reproduction},
        {3, "stabiliser product", 5, stabiliser_products},
        {4, "Morse code exactness", 30, morse_exactness},
        {5, "boundary structure", 5, boundary_structure},
        {6, "homology", 5, homology},
        {7, "volume", 60, volumes},
        {8, "level one Weyl identity", 120, level_one_identity},
        {9, "closed form", 300, closed_form},
        {10, "oldform relation", 600, oldform_relation},
        {11, "Selberg/Harish-Chandra transform", 30, shc},
        {12, "equidistribution demo", 300, equidistribution},
    };
    std::set<int> failed;
    for (const Criterion& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.pass && s <= c.budget_s;
        if (!pass) failed.insert(c.id);
        std::cout << (pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail << " [" << fmt(s, 2) << " s of "
                  << c.budget_s << " s]" << std::endl;
    }
    std::cout << (12 - failed.size()) << "/12 criteria pass" << std::endl;
    for (int id : failed)
        if (!known.count(id)) return 1;
    return 0;
}
