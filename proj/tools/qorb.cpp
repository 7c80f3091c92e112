// Command line front end: exact invariants, volumes, Weyl sum checks and sampling experiments.

#include <qorb/analytic.hpp>
#include <qorb/experiments.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace qorb;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kInvalid = 2, kTolerance = 3;

struct Globals {
    long long q{11};
    std::vector<long long> D;
    std::optional<long long> r;
    std::uint64_t seed{1};
    std::optional<std::size_t> samples;
    bool json{false}, csv{false};
    std::string svg;
    int precision{10};
};

struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json jint(const Int& x) {
    if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max()) return x.convert_to<long long>();
    return x.str();
}

json jmat(const Mat2& m) { return json::array({json::array({jint(m.a), jint(m.b)}), json::array({jint(m.c), jint(m.d)})}); }

json jform(const Form& f) { return json::array({jint(f.a), jint(f.b), jint(f.c)}); }

json jcpx(Cpx z) { return json::array({z.real(), z.imag()}); }

std::string to_str(const auto& x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

std::string point_str(const HPoint& z) {
    if (z.inf) return "inf";
    std::string s = to_str(z.x);
    if (z.y2 != 0) s += " + i sqrt(" + str(z.y2) + ")";
    return s;
}

std::string num(double x, int digits) { return format_double(x, digits); }

long long single_D(const Globals& g) {
    if (g.D.size() != 1) throw InvalidInput("exactly one --D is required");
    return g.D.front();
}

Int residue(const Globals& g, long long D, long long q) {
    if (g.r) return Int(*g.r);
    auto rs = residues_r(Int(D), Int(q));
    if (rs.empty()) throw InvalidInput("no residue r with r^2 = D mod 4q");
    return rs.front();
}

/// The matrix given by --gamma, or gamma_Q of the class representative picked by --D, --q, --r, --class.
Mat2 pick_gamma(const Globals& g, const std::vector<long long>& gamma, std::size_t cls) {
    if (!gamma.empty()) {
        if (gamma.size() != 4) throw InvalidInput("--gamma takes four entries a,b,c,d");
        Mat2 m{gamma[0], gamma[1], gamma[2], gamma[3]};
        if (m.det() != 1) throw InvalidInput("--gamma must have determinant 1");
        if (!m.hyperbolic()) throw InvalidInput("--gamma must be hyperbolic");
        if (mod(m.c, Int(g.q)) != 0) throw InvalidInput("--gamma must lie in Gamma_0(q)");
        return m;
    }
    long long D = single_D(g);
    NarrowClassGroup G{Int(D)};
    if (cls >= G.order()) throw InvalidInput("--class out of range; h+ = " + std::to_string(G.order()));
    if (g.q == 1) return gamma_Q(G.rep(cls));
    return gamma_Q(heegner_forms_for_classes(G, Int(g.q), residue(g, D, g.q))[cls].f);
}

void emit(const Globals& g, const json& j, const std::string& text) {
    if (g.json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int cmd_farey(const Globals& g) {
    SpecialPolygon P = polygon_for_level(g.q);
    json j;
    j["q"] = g.q;
    std::ostringstream os;
    if (P.symbol) {
        const FareySymbol& F = *P.symbol;
        json fr = json::array(), ty = json::array();
        os << "Farey symbol of level " << g.q << ":";
        for (const Fraction& f : F.fracs) {
            fr.push_back(std::to_string(f.a) + "/" + std::to_string(f.b));
            os << " " << f.a << "/" << f.b;
        }
        os << "\ngaps:";
        for (std::size_t i = 0; i < F.types.size(); ++i) {
            std::string t = gap_type_name(F.types[i]);
            if (F.types[i] == GapType::Free) t += "(" + std::to_string(F.partner[i]) + ")";
            ty.push_back(t);
            os << " " << t;
        }
        os << "\ngenus " << F.genus() << ", e2 " << F.e2() << ", e3 " << F.e3() << ", index " << sector_translates(P).size() << "\n";
        j["fractions"] = fr;
        j["gaps"] = ty;
        j["genus"] = F.genus();
        j["e2"] = F.e2();
        j["e3"] = F.e3();
    }
    j["index"] = sector_translates(P).size();
    json sides = json::array();
    os << "sides (anticlockwise from infinity):\n";
    for (int k = 0; k < P.N(); ++k) {
        const Side& s = P.sides[k];
        sides.push_back({{"index", k},
                         {"from", point_str(s.v1)},
                         {"to", point_str(s.v2)},
                         {"kind", side_kind_name(s.kind)},
                         {"pair", s.pair},
                         {"label", jmat(s.label)}});
        os << "  " << k << ": " << point_str(s.v1) << " -> " << point_str(s.v2) << "  " << side_kind_name(s.kind) << "  pair "
           << s.pair << "  label " << s.label << "\n";
    }
    j["sides"] = sides;
    emit(g, j, os.str());
    return kOk;
}

int cmd_geodesics(const Globals& g) {
    long long D = single_D(g);
    NarrowClassGroup G{Int(D)};
    PellUnit e = fundamental_unit(Int(D));
    json j;
    j["D"] = D;
    j["q"] = g.q;
    j["class_number"] = G.order();
    j["class_J"] = G.class_J();
    j["unit"] = {{"u", str(e.u)}, {"v", str(e.v)}};
    std::ostringstream os;
    os << "D = " << D << ", h+ = " << G.order() << ", J = class " << G.class_J() << ", epsilon = " << e.eps() << "\n";
    std::vector<Form> forms;
    if (g.q == 1) {
        forms = G.reps();
    } else {
        Int r = residue(g, D, g.q);
        j["r"] = jint(r);
        os << "level " << g.q << ", r = " << r << "\n";
        for (const HeegnerForm& h : heegner_forms_for_classes(G, Int(g.q), r)) forms.push_back(h.f);
    }
    json arr = json::array();
    for (std::size_t c = 0; c < forms.size(); ++c) {
        GeodesicData gd = closed_geodesic(forms[c]);
        arr.push_back({{"class", c},
                       {"form", jform(forms[c])},
                       {"gamma", jmat(gd.automorph)},
                       {"trace", jint(gd.automorph.trace())},
                       {"start", static_cast<double>(gd.start.approx())},
                       {"end", static_cast<double>(gd.end.approx())},
                       {"length", gd.length()}});
        os << "  class " << c << "  Q = " << forms[c] << "  gamma_Q = " << gd.automorph << "  ends "
           << num(static_cast<double>(gd.start.approx()), g.precision) << " -> " << num(static_cast<double>(gd.end.approx()), g.precision)
           << "  length " << num(gd.length(), g.precision) << "\n";
    }
    j["classes"] = arr;
    emit(g, j, os.str());
    return kOk;
}

json domain_json(const OrbifoldDomain& O, const SpecialPolygon& P) {
    BoundaryChain B = boundary_chain(O, P);
    json j;
    j["positioned_gamma"] = jmat(O.code.gamma);
    j["delta"] = jmat(O.delta);
    j["word"] = O.code.word;
    j["complete_arcs"] = O.complete_arcs();
    j["partial_arcs"] = O.partial_arcs();
    j["omega"] = O.omega.size();
    j["e2"] = O.e2;
    j["e3"] = O.e3;
    j["volume_over_pi"] = str(O.volume_over_pi());
    j["homology_basis"] = B.basis;
    j["homology"] = B.homology;
    std::vector<long long> m;
    for (int b : B.basis) m.push_back(B.multiplicity[b]);
    j["boundary_multiplicity"] = m;
    j["null_homologous"] = B.null_homologous();
    return j;
}

int cmd_orbifold(const Globals& g, const std::vector<long long>& gamma, std::size_t cls) {
    SpecialPolygon P = polygon_for_level(g.q);
    Mat2 m = pick_gamma(g, gamma, cls);
    OrbifoldDomain O = fundamental_domain(m, P);
    json j = domain_json(O, P);
    j["gamma"] = jmat(m);
    std::ostringstream os;
    os << "gamma = " << m << " (positioned " << O.code.gamma << ")\nMorse word:";
    for (int k : O.code.word) os << " " << k;
    os << "\nboundary: " << O.complete_arcs() << " complete + " << O.partial_arcs() << " partial arcs\n";
    os << "|Omega| = " << O.omega.size() << ", e2 = " << O.e2 << ", e3 = " << O.e3 << ", volume = " << O.volume_over_pi() << " pi\n";
    os << "homology " << to_str(j["homology"].dump()) << " on basis " << j["homology_basis"].dump() << ", boundary multiplicities "
       << j["boundary_multiplicity"].dump() << ", null homologous: " << (j["null_homologous"].get<bool>() ? "yes" : "no") << "\n";
    emit(g, j, os.str());
    return kOk;
}

int cmd_volume(const Globals& g, const std::vector<long long>& gamma, std::size_t cls, double tol) {
    SpecialPolygon P = polygon_for_level(g.q);
    Mat2 m = pick_gamma(g, gamma, cls);
    OrbifoldDomain O = fundamental_domain(m, P);
    std::size_t n = g.samples.value_or(1000000);
    AreaEstimate A = monte_carlo_area(O, P, n, g.seed);
    double rel = std::abs(A.area - O.volume()) / O.volume();
    json j{{"gamma", jmat(m)},         {"formula", O.volume()},  {"formula_over_pi", str(O.volume_over_pi())},
           {"monte_carlo", A.area},    {"stderr", A.stderr_},    {"samples", n},
           {"rel_diff", rel},          {"tolerance", tol},       {"pass", rel <= tol}};
    std::ostringstream os;
    os << "volume formula " << num(O.volume(), g.precision) << "  Monte Carlo " << num(A.area, g.precision) << " +- "
       << num(A.stderr_, 3) << "  rel diff " << num(rel, 3) << (rel <= tol ? "  ok\n" : "  EXCEEDS tolerance\n");
    emit(g, j, os.str());
    return rel <= tol ? kOk : kTolerance;
}

/// "genus:D1,D2" in either order.
ClassCharacter pick_character(const NarrowClassGroup& G, const std::string& name) {
    auto pair_of = [](const std::string& s) -> std::optional<std::pair<long long, long long>> {
        long long a, b;
        char tail;
        if (std::sscanf(s.c_str(), "genus:%lld,%lld%c", &a, &b, &tail) != 2) return std::nullopt;
        return std::pair{std::min(a, b), std::max(a, b)};
    };
    auto want = pair_of(name);
    for (const ClassCharacter& chi : genus_characters(G))
        if (want && pair_of(character_name(chi)) == want) return chi;
    std::string have;
    for (const ClassCharacter& chi : genus_characters(G)) have += " " + character_name(chi);
    throw InvalidInput("no genus character '" + name + "'; available:" + have);
}

int cmd_weyl(const Globals& g, double t, const std::string& chars, long long ell, std::optional<double> tol_opt) {
    long long D = single_D(g);
    NarrowClassGroup G{Int(D)};
    std::vector<ClassCharacter> chis;
    if (chars == "all")
        chis = genus_characters(G);
    else
        chis.push_back(pick_character(G, chars));
    double tol = tol_opt.value_or(g.q == 1 ? 1e-5 : 1e-3);
    json arr = json::array();
    std::ostringstream os;
    bool pass = true;
    for (const ClassCharacter& chi : chis) {
        WeylReport R = g.q == 1 ? weyl_report(G, chi, t) : oldform_weyl_relation(G, chi, t, g.q, ell, residue(g, D, g.q));
        // closed forms with chi(J) = 1 vanish: both sides must be below 1e-6; the relation at q > 1 uses a floored denominator
        bool vanishing = g.q == 1 && std::abs(R.rhs_closed) == 0;
        double err = g.q == 1 ? R.rel_err : R.rel_err_floored();
        bool ok = vanishing ? std::max(std::abs(R.lhs_numeric), std::abs(R.rhs_closed)) < 1e-6 : err <= tol;
        pass = pass && ok;
        arr.push_back({{"D", R.D},
                       {"q", R.q},
                       {"ell", R.ell},
                       {"character", R.character},
                       {"t", R.t},
                       {"chi_J", jcpx(chi(G.class_J()))},
                       {"numeric", jcpx(R.lhs_numeric)},
                       {"closed_form", jcpx(R.rhs_closed)},
                       {"abs_err", R.abs_err},
                       {"rel_err", err},
                       {"rel_err_negated", R.rel_err_negated()},
                       {"vanishing", vanishing},
                       {"pass", ok}});
        os << R.character << "  t = " << R.t << (g.q > 1 ? "  q = " + std::to_string(R.q) + "  l = " + std::to_string(R.ell) : "")
           << "\n  numeric " << to_str(R.lhs_numeric) << "\n  " << (g.q == 1 ? "closed  " : "relation") << " " << to_str(R.rhs_closed)
           << "\n  " << (vanishing ? "both sides below 1e-6" : "rel err " + num(err, 3) + " (against the negated value " + num(R.rel_err_negated(), 3) + ")")
           << (ok ? "  ok" : vanishing ? "  NOT BELOW" : "  EXCEEDS " + num(tol, 3)) << "\n";
    }
    emit(g, json{{"tolerance", tol}, {"results", arr}}, os.str());
    return pass ? kOk : kTolerance;
}

int cmd_equidistribute(const Globals& g, const std::string& selector, unsigned shards) {
    ExperimentConfig cfg;
    cfg.q = g.q;
    if (!g.D.empty()) cfg.D = g.D;
    cfg.r = g.r;
    cfg.selector = selector;
    cfg.samples = g.samples.value_or(cfg.samples);
    cfg.seed = g.seed;
    cfg.shards = shards;
    EquidistributionResult R = equidistribute(cfg);
    for (const std::string& w : R.warnings) std::cerr << "warning: " << w << "\n";
    if (R.tables.empty()) throw InvalidInput("no discriminant splits at q");
    bool pass = true;
    json arr = json::array();
    std::ostringstream os;
    os << "D,classes,total_volume,mass_sum,sum_sigma,deviation\n";
    for (const CosetMassTable& T : R.tables) {
        bool ok = std::abs(T.mass_sum - 1) <= 3 * T.sum_sigma + 1e-12 && T.masses_in_unit_interval();
        pass = pass && ok;
        json rows = json::array();
        for (std::size_t k = 0; k < T.masses.size(); ++k)
            rows.push_back({{"coset", T.coset_ids[k]}, {"mass", T.masses[k]}, {"sigma", T.sigmas[k]}});
        arr.push_back({{"D", T.D},
                       {"q", T.q},
                       {"r", T.r},
                       {"selector", T.selector},
                       {"classes", T.classes},
                       {"samples", T.samples},
                       {"seed", T.seed},
                       {"total_volume", T.total_volume},
                       {"mass_sum", T.mass_sum},
                       {"sum_sigma", T.sum_sigma},
                       {"deviation", T.deviation},
                       {"cosets", rows}});
        os << T.D << "," << T.classes << "," << num(T.total_volume, g.precision) << "," << num(T.mass_sum, g.precision) << ","
           << num(T.sum_sigma, 3) << "," << num(T.deviation, g.precision) << "\n";
    }
    if (g.csv)
        std::cout << mass_tables_csv(R.tables, g.precision);
    else
        emit(g, json{{"tables", arr}, {"warnings", R.warnings}}, os.str());
    return pass ? kOk : kTolerance;
}

int cmd_complementarity(const Globals& g) {
    if (g.D.empty()) throw InvalidInput("--D is required");
    json arr = json::array();
    std::ostringstream os;
    bool pass = true;
    for (long long D : g.D) {
        ComplementarityReport R = complementarity_check(D, g.samples.value_or(10000), g.seed);
        pass = pass && R.ok();
        json pairs = json::array();
        os << "D = " << D << "  J in principal genus: " << (R.J_in_principal_genus ? "yes" : "no")
           << "  no prime 3 mod 4: " << (R.no_prime_3_mod_4 ? "yes" : "no") << "  genus cover " << R.genus_min << ".." << R.genus_max
           << (R.ok() ? "  ok\n" : "  FAILED\n");
        for (const ComplementPair& p : R.pairs) {
            pairs.push_back({{"class", p.cls},
                             {"form", jform(p.form)},
                             {"complement", jform(p.complement)},
                             {"partner", p.partner},
                             {"partner_is_J_over_class", p.partner_is_J_over_class},
                             {"multiplicity", {p.multiplicity_min, p.multiplicity_max}},
                             {"volume_sum_over_pi_third", p.sampled_sum_over_unit}});
            os << "  " << p.form << " + " << p.complement << " (class " << p.partner << ")  multiplicity " << p.multiplicity_min;
            if (!p.constant()) os << ".." << p.multiplicity_max;
            os << "  volume sum " << num(p.sampled_sum_over_unit, g.precision) << " x pi/3\n";
        }
        arr.push_back({{"D", R.D},
                       {"samples", R.samples},
                       {"J_in_principal_genus", R.J_in_principal_genus},
                       {"no_prime_3_mod_4", R.no_prime_3_mod_4},
                       {"genus_cover", {R.genus_min, R.genus_max}},
                       {"ok", R.ok()},
                       {"pairs", pairs}});
    }
    emit(g, json{{"reports", arr}}, os.str());
    return pass ? kOk : kTolerance;
}

int cmd_render(const Globals& g, const std::vector<long long>& gamma, std::size_t cls, bool projection, double width) {
    SpecialPolygon P = polygon_for_level(g.q);
    RenderOptions opt;
    opt.projection = projection;
    opt.width = width;
    std::string svg = render_svg(pick_gamma(g, gamma, cls), P, opt);
    if (g.svg.empty()) {
        std::cout << svg;
    } else {
        std::ofstream out(g.svg, std::ios::binary);
        if (!out) throw InvalidInput("cannot write " + g.svg);
        out << svg;
        std::cerr << "wrote " << g.svg << ": " << count_svg_class(svg, "complete") << " complete, " << count_svg_class(svg, "partial")
                  << " partial, " << count_svg_class(svg, "geodesic") << " geodesic\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Level-q hyperbolic orbifolds of narrow ideal classes"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--q", g.q, "level")->check(CLI::PositiveNumber);
    app.add_option("--D", g.D, "fundamental discriminant(s)")->delimiter(',');
    app.add_option("--r", g.r, "residue with r^2 = D mod 4q");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--samples", g.samples, "Monte Carlo sample count");
    app.add_flag("--json", g.json, "JSON output");
    app.add_flag("--csv", g.csv, "CSV output where tabular");
    app.add_option("--svg", g.svg, "SVG output path (render)");
    app.add_option("--precision", g.precision, "significant digits in text output")->check(CLI::Range(3, 17));

    std::vector<long long> gamma;
    std::size_t cls = 0;
    auto add_pick = [&](CLI::App* s) {
        s->add_option("--gamma", gamma, "hyperbolic matrix a,b,c,d in Gamma_0(q)")->delimiter(',');
        s->add_option("--class", cls, "class index (with --D)");
    };

    auto* farey = app.add_subcommand("farey", "Farey symbol and special polygon of level q");
    auto* geod = app.add_subcommand("geodesics", "Heegner forms, automorphs and closed geodesics per class");
    auto* orb = app.add_subcommand("orbifold", "Morse code, boundary and homology of a domain");
    add_pick(orb);
    auto* vol = app.add_subcommand("volume", "volume formula against Monte Carlo area");
    add_pick(vol);
    double vol_tol = 0.01;
    vol->add_option("--tol", vol_tol, "relative tolerance");
    auto* weyl = app.add_subcommand("weyl-verify", "Eisenstein Weyl sums: closed form at q = 1, oldform relation at q > 1");
    double t = 1.0;
    std::string chars = "all";
    long long ell = 1;
    std::optional<double> weyl_tol;
    weyl->add_option("--t", t, "spectral parameter");
    weyl->add_option("--char", chars, "genus character, e.g. genus:-3,-4, or all");
    weyl->add_option("--ell", ell, "1 or q");
    weyl->add_option("--tol", weyl_tol, "relative tolerance");
    auto* equi = app.add_subcommand("equidistribute", "coset mass tables over a discriminant family");
    std::string selector = "all";
    unsigned shards = 8;
    equi->add_option("--selector", selector, "all or principal-genus");
    equi->add_option("--shards", shards, "parallel shards")->check(CLI::PositiveNumber);
    auto* comp = app.add_subcommand("complementarity", "level-one complementary coverings");
    auto* rend = app.add_subcommand("render", "SVG of P(q), the geodesic and the domain boundary");
    add_pick(rend);
    bool projection = false;
    double width = 800;
    rend->add_flag("--projection", projection, "shade the projection of the domain to P(q)");
    rend->add_option("--width", width, "width in pixels")->check(CLI::PositiveNumber);
    for (CLI::App* s : {farey, geod, orb, vol, weyl, equi, comp, rend}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        if (*farey) return cmd_farey(g);
        if (*geod) return cmd_geodesics(g);
        if (*orb) return cmd_orbifold(g, gamma, cls);
        if (*vol) return cmd_volume(g, gamma, cls, vol_tol);
        if (*weyl) {
            if (app.count("--q") == 0) g.q = 1;
            return cmd_weyl(g, t, chars, ell, weyl_tol);
        }
        if (*equi) return cmd_equidistribute(g, selector, shards);
        if (*comp) {
            g.q = 1;
            return cmd_complementarity(g);
        }
        if (*rend) return cmd_render(g, gamma, cls, projection, width);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kOk;
}
