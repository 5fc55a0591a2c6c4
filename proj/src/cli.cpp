#include "systolic/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "systolic/acceptance.hpp"
#include "systolic/boothby_wang.hpp"
#include "systolic/common.hpp"
#include "systolic/conformal_loewner.hpp"
#include "systolic/convex_bodies.hpp"
#include "systolic/flat_moduli.hpp"
#include "systolic/io.hpp"
#include "systolic/report.hpp"
#include "systolic/revolution_zoll.hpp"
#include "systolic/symplectic_core.hpp"

namespace systolic::cli {

namespace {

using Json = nlohmann::ordered_json;

struct CommandReport {
    std::string command;
    Json parameters = Json::object();
    std::vector<Entry> entries;
    Json data = Json::object();
};

struct Globals {
    std::uint64_t seed = acceptance::kDefaultSeed;
    std::optional<double> tol;
    std::string out_path;
    bool json = false;
    bool timings = false;
};

double tol_or(const Globals& g, double fallback) { return g.tol ? *g.tol : fallback; }

flat::Vec2 parse_vec2(const std::string& s)
{
    const auto v = io::parse_list(s);
    if (v.size() != 2)
        throw InputError("expected two components, got '" + s + "'");
    return {v[0], v[1]};
}

Json matrix_json(const Eigen::MatrixXd& M)
{
    Json rows = Json::array();
    for (long i = 0; i < M.rows(); ++i) {
        Json r = Json::array();
        for (long j = 0; j < M.cols(); ++j)
            r.push_back(M(i, j));
        rows.push_back(r);
    }
    return rows;
}

// ---- flat ----------------------------------------------------------------

CommandReport flat_reduce(const std::string& v1, const std::string& v2, const std::string& arith)
{
    CommandReport r{"flat reduce"};
    r.parameters = {{"v1", v1}, {"v2", v2}, {"arithmetic", arith}};
    const flat::Lattice2 lat{parse_vec2(v1), parse_vec2(v2)};
    const auto mode = arith == "double" ? flat::Arithmetic::Double : flat::Arithmetic::Exact;
    const auto mod = flat::reduce_to_gamma(lat, mode);
    const auto sv = flat::shortest_vector(lat);
    r.entries.push_back(info("x0", mod.x0));
    r.entries.push_back(info("y0", mod.y0));
    r.entries.push_back(info("scale", mod.scale));
    r.entries.push_back(info("rotation", mod.rotation));
    r.entries.push_back(check_true("modulus in fundamental domain", flat::in_gamma(mod)));
    r.entries.push_back(check_close("systole vs enumeration", mod.scale, sv.length, 1e-12 * sv.length));
    r.entries.push_back(check_le("systolic ratio", flat::torus_systolic_ratio(mod), kLoewnerBound, 1e-12));
    return r;
}

CommandReport flat_klein(double w, double h)
{
    CommandReport r{"flat klein"};
    r.parameters = {{"w", w}, {"h", h}};
    const flat::KleinParams kp{w, h};
    r.entries.push_back(info("systole", flat::klein_systole(kp), std::min(w, h)));
    r.entries.push_back(info("area", flat::klein_area(kp)));
    r.entries.push_back(check_le("systolic ratio", flat::klein_systolic_ratio(kp), kBavardBound));
    return r;
}

// ---- loewner -------------------------------------------------------------

CommandReport loewner_check(const Globals& g, double x0, double y0, int grid, const std::string& factor_csv,
                            double amplitude)
{
    CommandReport r{"loewner check"};
    r.parameters = {{"x0", x0}, {"y0", y0}, {"grid", grid}, {"factor", factor_csv}, {"amplitude", amplitude}};
    if (grid < 8)
        throw InputError("grid must be at least 8");
    const flat::TorusModulus mod{x0, y0, 1, 0};
    std::optional<loewner::ConformalTorusMetric> metric;
    if (!factor_csv.empty()) {
        const auto rows = io::read_csv(factor_csv);
        std::vector<double> f;
        for (const auto& row : rows)
            f.insert(f.end(), row.begin(), row.end());
        metric.emplace(mod, rows.size(), rows[0].size(), std::move(f));
    } else {
        // Seeded random trigonometric factor with sup deviation <= amplitude.
        if (!(amplitude >= 0.0 && amplitude < 1.0))
            throw InputError("amplitude must lie in [0, 1)");
        std::mt19937_64 rng(g.seed);
        std::uniform_real_distribution<double> u(-1, 1), ph(0, kTwoPi);
        std::vector<std::array<double, 4>> terms;
        for (int j = -2; j <= 2; ++j)
            for (int k = 0; k <= 2; ++k)
                if (j != 0 || k != 0)
                    terms.push_back({double(j), double(k), u(rng), ph(rng)});
        double total = 0;
        for (const auto& t : terms)
            total += std::abs(t[2]);
        auto f = [&](double s, double t) {
            double v = 1.0;
            for (const auto& term : terms)
                v += amplitude / total * term[2] * std::cos(kTwoPi * (term[0] * s + term[1] * t) + term[3]);
            return v;
        };
        metric.emplace(loewner::ConformalTorusMetric::sample(mod, grid, grid, f));
    }
    const auto rep = loewner::loewner_chain_check(*metric, tol_or(g, loewner::kQuadratureEps));
    r.entries.push_back(info("area", rep.area_g));
    r.entries.push_back(info("min horizontal length", rep.min_horizontal_length));
    r.entries.push_back(check_le("sigma upper bound vs flat ratio", rep.sigma_upper, rep.flat_ratio, 1e-9));
    r.entries.push_back(check_le("sigma upper bound vs Loewner constant", rep.sigma_upper, kLoewnerBound, 1e-9));
    const char* names[] = {"AM-QM gap", "min-AM gap", "flat gap"};
    for (int k = 0; k < 3; ++k)
        r.entries.push_back(check_ge(names[k], rep.stage_gaps[k], 0.0, 1e-10));
    return r;
}

// ---- zoll ----------------------------------------------------------------

CommandReport zoll_certify(const Globals& g, const std::string& h, const std::string& profile)
{
    CommandReport r{"zoll certify"};
    r.parameters = {{"h", h}, {"profile", profile}};
    if (!h.empty() && !profile.empty())
        throw InputError("give either --h or --profile");
    std::vector<double> coeffs;
    if (!h.empty())
        coeffs = io::parse_list(h);
    else if (!profile.empty())
        coeffs = io::parse_list(profile);
    const auto metric = profile.empty() ? zoll::RevolutionMetric::zoll(coeffs) : zoll::RevolutionMetric::profile(coeffs);
    const double tol = tol_or(g, zoll::kIntegratorTol);
    const auto est = zoll::weak_systolic_ratio_estimate(metric, tol);
    Json geos = Json::array();
    for (const auto& e : est.certificate.entries)
        geos.push_back({{"p_phi", e.p_phi}, {"defect", e.defect}, {"closed_length", e.closed_length}});
    r.data["geodesics"] = geos;
    r.entries.push_back(check_le("max closure defect", est.certificate.max_defect, zoll::kCloseTol));
    r.entries.push_back(info("meridian length", zoll::meridian_length(metric), kTwoPi));
    r.entries.push_back(info("shortest closed geodesic", est.shortest_closed));
    r.entries.push_back(info("area", est.area, 4 * kPi));
    if (est.zoll)
        r.entries.push_back(check_close("weak systolic ratio", est.ratio, kPi, 1e-4));
    else
        r.entries.push_back(info("weak systolic ratio", est.ratio, kPi));
    return r;
}

// ---- symplectic ----------------------------------------------------------

CommandReport symp_ellipsoid(const std::string& a)
{
    CommandReport r{"symplectic ellipsoid"};
    r.parameters = {{"a", a}};
    const symp::EllipsoidSpec e(io::parse_list(a));
    r.entries.push_back(info("capacity", symp::capacity_ellipsoid(e), kPi * e.a().front()));
    r.entries.push_back(info("volume", symp::volume_ellipsoid(e)));
    r.entries.push_back(check_le("Viterbo ratio", symp::viterbo_ratio_ellipsoid(e), 1.0));
    return r;
}

CommandReport symp_shadow(const Globals& g, const std::string& path)
{
    CommandReport r{"symplectic shadow"};
    r.parameters = {{"matrix", path}};
    const auto M = io::read_matrix_csv(path);
    const auto chk = symp::is_symplectic(M, tol_or(g, 1e-9));
    const double s = symp::shadow_area_linear(M);
    r.entries.push_back(info("symplectic residual", chk.residual));
    if (chk.symplectic)
        r.entries.push_back(check_ge("shadow area", s, kPi, 1e-9));
    else
        r.entries.push_back(info("shadow area", s, kPi));
    return r;
}

CommandReport symp_check(const Globals& g, const std::string& path)
{
    CommandReport r{"symplectic check"};
    r.parameters = {{"matrix", path}};
    const auto M = io::read_matrix_csv(path);
    const double tol = tol_or(g, 1e-12);
    r.entries.push_back(check_le("symplectic residual", symp::is_symplectic(M, tol).residual, tol));
    return r;
}

CommandReport symp_hopf(const Globals& g)
{
    CommandReport r{"symplectic hopf"};
    symp::Vector z = symp::Vector::Zero(4);
    z(0) = 1;
    const double tol = tol_or(g, 1e-12);
    r.entries.push_back(check_le("numeric return defect at t = pi", (symp::reeb_flow_numeric(z, kPi, tol) - z).norm(), 1e-9));
    return r;
}

// ---- bw ------------------------------------------------------------------

CommandReport bw_ratio(int euler, const std::string& path)
{
    CommandReport r{"bw ratio"};
    r.parameters = {{"euler", euler}, {"psi_harmonics", path}};
    const bw::BWBundle bundle(euler);
    bw::HarmonicExpansion e = path.empty() ? bw::HarmonicExpansion{1.0, {}} : io::read_harmonics(path);
    const auto d = bw::DensityOnBase::from_expansion(std::move(e));
    const auto m = bw::min_of_density(d);
    const auto res = bw::bw_systolic_ratio(d, bundle);
    r.data["minimum"] = {{"theta", m.theta}, {"phi", m.phi}};
    r.entries.push_back(info("min psi", res.min_psi));
    r.entries.push_back(info("contact volume", res.volume));
    r.entries.push_back(check_le("systolic ratio", res.ratio, bundle.rho0(), 1e-9));
    r.entries.push_back(info("constant density", res.equality ? 1.0 : 0.0));
    return r;
}

// ---- convex --------------------------------------------------------------

bool closed_under_negation(const std::vector<Eigen::VectorXd>& pts)
{
    double s = 0;
    for (const auto& p : pts)
        s = std::max(s, p.norm());
    for (const auto& p : pts) {
        bool found = false;
        for (const auto& q : pts)
            found = found || (p + q).norm() <= 1e-12 * s;
        if (!found)
            return false;
    }
    return true;
}

CommandReport convex_mahler(const std::string& path)
{
    CommandReport r{"convex mahler"};
    r.parameters = {{"vertices", path}};
    const auto pts = io::read_points_csv(path);
    const convex::PolytopeV P(pts, closed_under_negation(pts));
    if (P.n() == 2 || P.n() == 3) {
        const auto s = convex::santalo_mahler_check(P);
        r.entries.push_back(check_ge("Mahler volume vs cube", s.value, s.lower, 1e-12 * s.lower));
        r.entries.push_back(check_le("Mahler volume vs ball", s.value, s.upper, 1e-12 * s.upper));
    } else {
        r.entries.push_back(info("Mahler volume", convex::mahler_volume(P)));
    }
    r.entries.push_back(info("volume", convex::volume(P)));
    return r;
}

CommandReport convex_mvee(const Globals& g, const std::string& path)
{
    CommandReport r{"convex mvee"};
    const double tol = tol_or(g, convex::kMveeTol);
    r.parameters = {{"points", path}, {"tol", tol}};
    const auto pts = io::read_points_csv(path);
    const auto E = convex::mvee(pts, tol);
    double worst = 0;
    for (const auto& p : pts)
        worst = std::max(worst, E.level(p));
    r.data["center"] = matrix_json(E.center);
    r.data["shape"] = matrix_json(E.A);
    r.entries.push_back(check_ge("containment slack", 1.0 - worst, 0.0, tol));
    r.entries.push_back(info("volume", E.volume()));
    const int n = static_cast<int>(E.center.size());
    if ((n == 2 || n == 4) && closed_under_negation(pts)) {
        const auto c = convex::coarse_viterbo_bound(convex::PolytopeV(pts, true), tol);
        r.entries.push_back(info("c_upper", c.c_upper));
        r.entries.push_back(check_le("Viterbo proxy vs volume ratio", c.viterbo_proxy, c.volume_ratio, 1e-12 * c.volume_ratio));
        r.entries.push_back(check_le("vol(E)/vol(P)", c.volume_ratio, c.bound));
    }
    return r;
}

// ---- verify-all ----------------------------------------------------------

CommandReport verify_all(const Globals& g, std::ostream& err)
{
    CommandReport r{"verify-all"};
    Json crit = Json::array();
    acceptance::run_all(g.seed, [&](const acceptance::CriterionResult& c) {
        err << (c.passed ? "PASS " : "FAIL ") << c.id << ' ' << c.title << '\n';
        Entry e = check_true("criterion " + std::to_string(c.id) + ": " + c.title, c.passed);
        r.entries.push_back(e);
        Json j = {{"id", c.id}, {"title", c.title}, {"runtime_limit_s", c.limit_seconds},
                  {"within_time", c.within_time}, {"entries", to_json(c.entries)}};
        if (g.timings)
            j["seconds"] = c.seconds;
        crit.push_back(j);
    });
    r.data["criteria"] = crit;
    return r;
}

// ---- output --------------------------------------------------------------

Json report_json(const CommandReport& r, const Globals& g)
{
    Json j;
    j["schema"] = 1;
    j["command"] = r.command;
    j["seed"] = g.seed;
    j["parameters"] = r.parameters;
    j["entries"] = to_json(r.entries);
    if (!r.data.empty())
        j["data"] = r.data;
    j["status"] = all_pass(r.entries) ? "pass" : "fail";
    return j;
}

void print_text(const CommandReport& r, std::ostream& out)
{
    out << r.command << '\n';
    char buf[512];
    for (const auto& e : r.entries) {
        std::snprintf(buf, sizeof buf, "  %-4s  %-45s value=%.17g reference=%.17g margin=%.3g\n", to_string(e.status),
                      e.name.c_str(), e.value, e.reference, e.margin);
        out << buf;
    }
    out << (all_pass(r.entries) ? "status: pass\n" : "status: fail\n");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Systolic geometry toolkit"};
    app.set_help_flag("--help", "print help");
    app.fallthrough();
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--tol", g.tol, "tolerance override")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out_path, "write the JSON report to this file");
    app.add_flag("--json", g.json, "print the JSON report");

    std::function<CommandReport()> action;

    auto* flat = app.add_subcommand("flat", "flat tori and Klein bottles")->require_subcommand(1);
    std::string v1, v2, arith = "exact";
    auto* reduce = flat->add_subcommand("reduce", "reduce a lattice to the fundamental domain");
    reduce->add_option("--v1", v1)->required();
    reduce->add_option("--v2", v2)->required();
    reduce->add_option("--arithmetic", arith)->check(CLI::IsMember({"exact", "double"}));
    reduce->callback([&] { action = [&] { return flat_reduce(v1, v2, arith); }; });
    double kw = 1, kh = 1;
    auto* klein = flat->add_subcommand("klein", "flat Klein bottle");
    klein->add_option("--w", kw)->required();
    klein->add_option("--h", kh)->required();
    klein->callback([&] { action = [&] { return flat_klein(kw, kh); }; });

    auto* loew = app.add_subcommand("loewner", "conformal metrics on tori")->require_subcommand(1);
    double x0 = 0.5, y0 = std::sqrt(3.0) / 2, amplitude = 0.0;
    int grid = 256;
    std::string factor;
    auto* lcheck = loew->add_subcommand("check", "certify the Loewner inequality chain");
    lcheck->add_option("--x0", x0)->capture_default_str();
    lcheck->add_option("--y0", y0)->capture_default_str();
    lcheck->add_option("--grid", grid)->capture_default_str();
    lcheck->add_option("--factor", factor, "CSV grid of f, rows = t")->check(CLI::ExistingFile);
    lcheck->add_option("--amplitude", amplitude, "random trigonometric factor amplitude");
    lcheck->callback([&] { action = [&] { return loewner_check(g, x0, y0, grid, factor, amplitude); }; });

    auto* zl = app.add_subcommand("zoll", "spheres of revolution")->require_subcommand(1);
    std::string zh, zprofile;
    auto* cert = zl->add_subcommand("certify", "closure battery and weak systolic ratio");
    cert->add_option("--h", zh, "Zoll basis coefficients c_k of u - u^{2k+1}");
    cert->add_option("--profile", zprofile, "monomial coefficients of h(u)");
    cert->callback([&] { action = [&] { return zoll_certify(g, zh, zprofile); }; });

    auto* sy = app.add_subcommand("symplectic", "linear symplectic geometry")->require_subcommand(1);
    std::string ea, mpath;
    auto* ell = sy->add_subcommand("ellipsoid", "capacity, volume and Viterbo ratio");
    ell->add_option("--a", ea)->required();
    ell->callback([&] { action = [&] { return symp_ellipsoid(ea); }; });
    auto* shadow = sy->add_subcommand("shadow", "area of the (q1,p1) shadow of M(B)");
    shadow->add_option("--matrix", mpath)->required()->check(CLI::ExistingFile);
    shadow->callback([&] { action = [&] { return symp_shadow(g, mpath); }; });
    auto* scheck = sy->add_subcommand("check", "symplecticity residual");
    scheck->add_option("--matrix", mpath)->required()->check(CLI::ExistingFile);
    scheck->callback([&] { action = [&] { return symp_check(g, mpath); }; });
    auto* hopf = sy->add_subcommand("hopf", "Reeb flow return on S^3");
    hopf->callback([&] { action = [&] { return symp_hopf(g); }; });

    auto* bwc = app.add_subcommand("bw", "Boothby-Wang bundles over S^2")->require_subcommand(1);
    int euler = 1;
    std::string harm;
    auto* bwr = bwc->add_subcommand("ratio", "contact systolic ratio of (psi o p) alpha0");
    bwr->add_option("--euler", euler)->required();
    bwr->add_option("--psi-harmonics", harm)->check(CLI::ExistingFile);
    bwr->callback([&] { action = [&] { return bw_ratio(euler, harm); }; });

    auto* cv = app.add_subcommand("convex", "polytopes and ellipsoids")->require_subcommand(1);
    std::string vpath, ppath;
    auto* mah = cv->add_subcommand("mahler", "Mahler volume and bounds");
    mah->add_option("--vertices", vpath)->required()->check(CLI::ExistingFile);
    mah->callback([&] { action = [&] { return convex_mahler(vpath); }; });
    auto* mv = cv->add_subcommand("mvee", "minimum-volume enclosing ellipsoid");
    mv->add_option("--points", ppath)->required()->check(CLI::ExistingFile);
    mv->callback([&] { action = [&] { return convex_mvee(g, ppath); }; });

    auto* va = app.add_subcommand("verify-all", "run the acceptance battery");
    va->add_flag("--timings", g.timings, "include measured runtimes in the report");
    va->callback([&] { action = [&] { return verify_all(g, err); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    CommandReport report;
    try {
        report = action();
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }

    const Json j = report_json(report, g);
    const std::string text = j.dump(2) + "\n";
    if (!g.out_path.empty()) {
        std::ofstream f(g.out_path, std::ios::binary);
        if (!f) {
            err << "input error: cannot write " << g.out_path << '\n';
            return kExitInput;
        }
        f << text;
    }
    if (g.json)
        out << text;
    else
        print_text(report, out);
    return all_pass(report.entries) ? kExitOk : kExitAssertion;
}

} // namespace systolic::cli
