#include "systolic/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "systolic/boothby_wang.hpp"
#include "systolic/common.hpp"
#include "systolic/conformal_loewner.hpp"
#include "systolic/convex_bodies.hpp"
#include "systolic/flat_moduli.hpp"
#include "systolic/revolution_zoll.hpp"
#include "systolic/symplectic_core.hpp"

namespace systolic::acceptance {

namespace {

using Rng = std::mt19937_64;
using Entries = std::vector<Entry>;

struct Criterion {
    const char* title;
    double limit_seconds;
    Entries (*run)(Rng&);
};

// ---- 1. Loewner --------------------------------------------------------

// 1 + sum of low-order Fourier modes with total amplitude below 0.9.
struct RandomFourier {
    std::vector<std::array<double, 4>> terms; // j, k, amplitude, phase

    explicit RandomFourier(Rng& rng)
    {
        std::uniform_real_distribution<double> u(-1, 1), ph(0, kTwoPi);
        for (int j = -2; j <= 2; ++j)
            for (int k = 0; k <= 2; ++k)
                if (j != 0 || k != 0)
                    terms.push_back({double(j), double(k), u(rng), ph(rng)});
        double total = 0;
        for (auto& t : terms)
            total += std::abs(t[2]);
        for (auto& t : terms)
            t[2] *= 0.9 / total * std::abs(u(rng));
    }
    double operator()(double s, double t) const
    {
        double v = 1.0;
        for (const auto& term : terms)
            v += term[2] * std::cos(kTwoPi * (term[0] * s + term[1] * t) + term[3]);
        return v;
    }
};

Entries loewner_constant(Rng& rng)
{
    using namespace loewner;
    Entries out;
    const flat::TorusModulus hex{0.5, std::sqrt(3.0) / 2, 1, 0};
    const auto h = loewner_chain_check(ConformalTorusMetric::sample(hex, 256, 256, [](double, double) { return 1.0; }));
    out.push_back(check_close("hexagonal sigma", h.sigma_upper, kLoewnerBound, 1e-12));

    std::uniform_real_distribution<double> ux(0, 0.5), uy(0, 1);
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        const double x = ux(rng);
        const flat::TorusModulus mod{x, std::sqrt(1 - x * x) + uy(rng), 1, 0};
        const RandomFourier f(rng);
        const auto r = loewner_chain_check(ConformalTorusMetric::sample(mod, 256, 256, std::cref(f)));
        worst_excess = std::max(worst_excess, r.sigma_upper - 1 / mod.y0);
        for (double g : r.stage_gaps)
            worst_gap = std::min(worst_gap, g);
    }
    out.push_back(check_le("max sigma_upper - 1/y0 over 100 factors", worst_excess, 1e-9));
    out.push_back(check_ge("min stage gap over 100 factors", worst_gap, 0.0, 1e-10));
    return out;
}

// ---- 2. Flat moduli ----------------------------------------------------

double dot(const flat::Vec2& a, const flat::Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

// Exhaustive enumeration of lattice points in the disc of radius
// min(|v1|, |v2|, |v1 +- v2|), row by row in m.
double enumerate_systole(const flat::Lattice2& lat)
{
    const auto& a = lat.v1;
    const auto& b = lat.v2;
    const double aa = dot(a, a), bb = dot(b, b), ab = dot(a, b);
    const double r2 = std::min({aa, bb, aa + bb + 2 * ab, aa + bb - 2 * ab});
    const double det = aa * bb - ab * ab;
    const long mmax = static_cast<long>(std::ceil(std::sqrt(r2 * bb / det))) + 1;
    double best = r2;
    for (long m = -mmax; m <= mmax; ++m) {
        // |m a + n b|^2 = bb n^2 + 2 m ab n + m^2 aa <= r2
        const double c = m * ab / bb;
        const double disc = c * c - (m * m * aa - r2) / bb;
        if (disc < 0)
            continue;
        const long lo = static_cast<long>(std::floor(-c - std::sqrt(disc))) - 1;
        const long hi = static_cast<long>(std::ceil(-c + std::sqrt(disc))) + 1;
        for (long n = lo; n <= hi; ++n) {
            if (m == 0 && n == 0)
                continue;
            const double x = m * a[0] + n * b[0], y = m * a[1] + n * b[1];
            best = std::min(best, x * x + y * y);
        }
    }
    return std::sqrt(best);
}

// Gram matrix of a Lagrange-reduced basis, computed in plain double.
std::array<double, 3> reduced_gram(flat::Lattice2 lat)
{
    auto& u = lat.v1;
    auto& v = lat.v2;
    for (int it = 0; it < 1000; ++it) {
        if (dot(u, u) > dot(v, v))
            std::swap(u, v);
        const double k = std::round(dot(u, v) / dot(u, u));
        if (k == 0)
            break;
        v = {v[0] - k * u[0], v[1] - k * u[1]};
    }
    if (dot(u, u) > dot(v, v))
        std::swap(u, v);
    return {dot(u, u), std::abs(dot(u, v)), dot(v, v)};
}

Entries flat_moduli(Rng& rng)
{
    using namespace flat;
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double gram_err = 0, sys_err = 0;
    int outside = 0;
    for (int i = 0; i < 10000; ++i) {
        Lattice2 lat;
        do
            lat = {{u(rng), u(rng)}, {u(rng), u(rng)}};
        while (std::abs(lat.v1[0] * lat.v2[1] - lat.v1[1] * lat.v2[0]) <= 0.2);
        const auto mod = reduce_to_gamma(lat);
        outside += in_gamma(mod) ? 0 : 1;
        const auto back = reconstruct(mod);
        const auto g0 = reduced_gram(lat);
        const auto g1 = reduced_gram(back);
        const double s2 = mod.scale * mod.scale;
        for (int k = 0; k < 3; ++k)
            gram_err = std::max(gram_err, std::abs(g0[k] - g1[k]) / s2);
        sys_err = std::max(sys_err, std::abs(mod.scale - enumerate_systole(lat)) / mod.scale);
    }
    return {check_le("moduli outside the domain", outside, 0),
            check_le("max relative Gram mismatch", gram_err, 1e-10),
            check_le("max relative systole mismatch vs enumeration", sys_err, 1e-12)};
}

// ---- 3. Klein bottles --------------------------------------------------

struct Affine {
    std::array<double, 4> l; // row-major 2x2
    std::array<double, 2> c;
};

Affine compose(const Affine& f, const Affine& g)
{
    return {{f.l[0] * g.l[0] + f.l[1] * g.l[2], f.l[0] * g.l[1] + f.l[1] * g.l[3],
             f.l[2] * g.l[0] + f.l[3] * g.l[2], f.l[2] * g.l[1] + f.l[3] * g.l[3]},
            {f.l[0] * g.c[0] + f.l[1] * g.c[1] + f.c[0], f.l[2] * g.c[0] + f.l[3] * g.c[1] + f.c[1]}};
}

// Deck elements are translations or glide reflections along the x axis
// direction; the minimal displacement is the component of c in ker(L - I).
double min_displacement(const Affine& f)
{
    if (f.l[3] > 0)
        return std::hypot(f.c[0], f.c[1]);
    return std::abs(f.c[0]);
}

double klein_words(double w, double h)
{
    const std::array<Affine, 4> gens{Affine{{1, 0, 0, 1}, {0, h}}, Affine{{1, 0, 0, 1}, {0, -h}},
                                     Affine{{1, 0, 0, -1}, {w, h}}, Affine{{1, 0, 0, -1}, {-w, h}}};
    std::vector<Affine> frontier{{{1, 0, 0, 1}, {0, 0}}};
    double best = std::numeric_limits<double>::infinity();
    for (int len = 1; len <= 4; ++len) {
        std::vector<Affine> next;
        for (const auto& f : frontier)
            for (const auto& s : gens) {
                const Affine e = compose(s, f);
                const bool identity = e.l[3] > 0 && std::hypot(e.c[0], e.c[1]) < 1e-12;
                if (!identity)
                    best = std::min(best, min_displacement(e));
                next.push_back(e);
            }
        frontier = std::move(next);
    }
    return best;
}

Entries klein_bottles(Rng&)
{
    using namespace flat;
    double sys_err = 0, worst_ratio = 0;
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) {
            const double w = 0.1 * std::pow(50.0, i / 49.0), h = 0.1 * std::pow(50.0, j / 49.0);
            sys_err = std::max(sys_err, std::abs(klein_systole({w, h}) - klein_words(w, h)) / std::min(w, h));
            worst_ratio = std::max(worst_ratio, klein_systolic_ratio({w, h}));
        }
    return {check_le("max relative systole mismatch vs deck words", sys_err, 1e-12),
            check_le("max flat Klein ratio", worst_ratio, 1.0),
            check_le("one below the Klein ceiling", 1.0, kBavardBound)};
}

// ---- 4. Zoll surfaces --------------------------------------------------

Entries weinstein(Rng&)
{
    using namespace zoll;
    Entries out;
    struct Case {
        const char* name;
        std::vector<double> coeffs;
    };
    for (const auto& c : {Case{"h=0", {}}, Case{"h=0.3(u-u^3)", {0.3}}, Case{"h=0.15u-0.15u^3", {0.15}}}) {
        const auto est = weak_systolic_ratio_estimate(RevolutionMetric::zoll(c.coeffs));
        const std::string p = c.name;
        out.push_back(check_true(p + " closure battery", est.zoll && est.certificate.entries.size() == 21));
        out.push_back(check_le(p + " max closure defect", est.certificate.max_defect, 1e-6));
        out.push_back(check_close(p + " area", est.area, 4 * kPi, 1e-10));
        out.push_back(check_close(p + " ratio", est.ratio, kPi, 1e-4));
    }
    const double mono[] = {0.3, 0.0, -0.3};
    const auto bad = certify_zoll(RevolutionMetric::profile(mono));
    out.push_back(check_ge("even control max defect", bad.max_defect, 1e-2));
    out.push_back(check_true("even control rejected", !bad.zoll));
    return out;
}

// ---- 5. Ellipsoids -----------------------------------------------------

Entries ellipsoid_viterbo(Rng& rng)
{
    using namespace symp;
    std::uniform_real_distribution<double> ua(0.1, 10.0);
    std::uniform_int_distribution<int> um(1, 6), upow(-4, 4);
    double worst = 0;
    int equality_violations = 0, rule_violations = 0;
    for (int k = 0; k < 10000; ++k) {
        const int m = um(rng);
        std::vector<double> a(m);
        for (auto& x : a)
            x = ua(rng);
        const EllipsoidSpec e(a);
        const double r = viterbo_ratio_ellipsoid(e);
        worst = std::max(worst, r);
        const bool all_equal = std::all_of(a.begin(), a.end(), [&](double x) { return x == a[0]; });
        if (!all_equal && r > 1 - 1e-12)
            ++equality_violations;
        const double c = ua(rng);
        if (viterbo_ratio_ellipsoid(EllipsoidSpec(std::vector<double>(m, c))) != 1.0)
            ++equality_violations;

        if (capacity_ellipsoid(e) != kPi * e.a().front())
            ++rule_violations;
        const double r2 = std::ldexp(1.0, upow(rng));
        std::vector<double> scaled(a);
        for (auto& x : scaled)
            x *= r2;
        if (capacity_ellipsoid(EllipsoidSpec(scaled)) != r2 * capacity_ellipsoid(e))
            ++rule_violations;
    }
    return {check_le("max Viterbo ratio over 1e4 ellipsoids", worst, 1.0),
            check_le("equality-case violations", equality_violations, 0),
            check_le("pi a_1 / conformality violations", rule_violations, 0),
            check_close("capacity of the unit ball", capacity_ellipsoid(EllipsoidSpec({1, 1, 1})), kPi, 0.0),
            check_close("capacity of the cylinder Z(1)", capacity_ellipsoid(EllipsoidSpec({1, 1e300})), kPi, 0.0)};
}

// ---- 6. Linear non-squeezing -------------------------------------------

Entries non_squeezing(Rng& rng)
{
    using namespace symp;
    Entries out;
    for (int m : {2, 3}) {
        double lo = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 1000; ++k)
            lo = std::min(lo, shadow_area_linear(random_symplectic(m, rng)));
        out.push_back(check_ge("min shadow area, dimension " + std::to_string(2 * m), lo, kPi, 1e-9));
    }
    const Matrix C = squeeze_control(2);
    out.push_back(check_close("control determinant", C.determinant(), 1.0, 1e-15));
    out.push_back(check_true("control is not symplectic", !is_symplectic(C).symplectic));
    out.push_back(check_le("control shadow area", shadow_area_linear(C), kPi, -1e-9));
    return out;
}

// ---- 7. Hopf flow ------------------------------------------------------

Entries hopf(Rng&)
{
    using namespace symp;
    Vector z = Vector::Zero(4);
    z(0) = 1;
    return {check_le("numeric Reeb return defect at t = pi", (reeb_flow_numeric(z, kPi) - z).norm(), 1e-9),
            check_le("closed-form return defect at t = pi", (hopf_flow(z, kPi) - z).norm(), 1e-15)};
}

// ---- 8. Stokes consistency ---------------------------------------------

Entries stokes(Rng& rng)
{
    using namespace symp;
    Entries out;
    const auto one = RadialHypersurfaceS3::sample([](const Vec4&) { return 1.0; });
    out.push_back(check_close("contact volume of the unit sphere", contact_volume_radial_S3(one), kPi * kPi, 1e-12));
    double worst_z = 0;
    std::uniform_int_distribution<std::uint64_t> useed;
    for (int k = 0; k < 10; ++k) {
        const auto psi = QuadraticDensity::random(rng);
        const double cv = contact_volume_radial_S3(RadialHypersurfaceS3::sample(psi));
        const auto mc = star_volume_monte_carlo(psi, QuadraticDensity::kRandomBound, 1'000'000, useed(rng));
        worst_z = std::max(worst_z, std::abs(cv - 2 * mc.value) / (2 * mc.std_error));
    }
    out.push_back(check_le("max |contact - 2 vol| in standard errors", worst_z, 3.0));
    return out;
}

// ---- 9. Boothby-Wang ---------------------------------------------------

Entries boothby_wang(Rng& rng)
{
    using namespace bw;
    double excess = -std::numeric_limits<double>::infinity();
    int false_equal = 0;
    for (int k = 0; k < 200; ++k) {
        const BWBundle bundle(1 + k % 3);
        const auto r = bw_systolic_ratio(DensityOnBase::from_expansion(HarmonicExpansion::random(rng)), bundle);
        excess = std::max(excess, r.ratio - bundle.rho0());
        false_equal += r.equality ? 1 : 0;
    }
    int missed_equal = 0;
    for (int e = 1; e <= 3; ++e)
        for (double c : {0.5, 1.0, 2.5})
            missed_equal += bw_systolic_ratio(DensityOnBase::from_expansion({c, {}}), BWBundle(e)).equality ? 0 : 1;
    const auto anchor = bw_systolic_ratio(DensityOnBase::from_expansion({1.0, {}}), BWBundle(2));
    return {check_le("max ratio - 1/euler over 200 densities", excess, 1e-9),
            check_le("equality flag on non-constant densities", false_equal, 0),
            check_le("equality flag missed on constants", missed_equal, 0),
            check_close("euler 2, psi = 1 anchor", anchor.ratio, 0.5, 1e-12)};
}

// ---- 10. Mahler --------------------------------------------------------

Entries mahler(Rng& rng)
{
    using namespace convex;
    Entries out;
    for (int m = 2; m <= 4; ++m) {
        const double ref = std::pow(4.0, m) / std::tgamma(m + 1.0);
        out.push_back(check_close("cube Mahler volume, m = " + std::to_string(m), mahler_volume(cube(m)), ref,
                                  1e-12 * ref));
    }
    std::uniform_int_distribution<int> h2(3, 8), h3(4, 10);
    std::normal_distribution<double> nd;
    int outside = 0;
    double invariance = 0;
    for (int k = 0; k < 500; ++k) {
        const int n = k < 250 ? 2 : 3;
        const auto P = random_symmetric_polytope(n, n == 2 ? h2(rng) : h3(rng), rng);
        const auto r = santalo_mahler_check(P);
        outside += r.within ? 0 : 1;
        Matrix T(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                T(i, j) = nd(rng);
        invariance = std::max(invariance, std::abs(mahler_volume(P.transformed(T)) - r.value) / r.value);
    }
    out.push_back(check_le("polytopes outside [4^n/n!, vol(B^n)^2]", outside, 0));
    out.push_back(check_le("max relative change under linear maps", invariance, 1e-9));
    return out;
}

// ---- 11. MVEE chain ----------------------------------------------------

Entries mvee_chain(Rng& rng)
{
    using namespace convex;
    double slack = std::numeric_limits<double>::infinity();
    double worst = 0;
    int chain_fail = 0;
    auto run = [&](const PolytopeV& P) {
        const auto r = coarse_viterbo_bound(P);
        for (const auto& v : P.vertices())
            slack = std::min(slack, 1.0 - r.ellipsoid.level(v));
        worst = std::max(worst, r.volume_ratio);
        chain_fail += r.holds ? 0 : 1;
        return r;
    };
    const auto c4 = run(cube(4));
    for (int k = 0; k < 100; ++k)
        run(random_symmetric_polytope(4, 10, rng));
    return {check_ge("min containment slack", slack, 0.0, 1e-7),
            check_le("max vol(E)/vol(P) over 100 polytopes", worst, 64.0),
            check_le("bound chain failures", chain_fail, 0),
            check_close("cube vol(E)/vol(P)", c4.volume_ratio, kPi * kPi / 2, 1e-6)};
}

const std::array<Criterion, 11> kCriteria{{
    {"Loewner constant", 10, loewner_constant},
    {"Flat moduli", 5, flat_moduli},
    {"Klein bottles", 2, klein_bottles},
    {"Zoll spheres of revolution", 60, weinstein},
    {"Ellipsoid Viterbo ratio", 1, ellipsoid_viterbo},
    {"Linear non-squeezing", 5, non_squeezing},
    {"Hopf flow", 1, hopf},
    {"Stokes consistency", 30, stokes},
    {"Boothby-Wang battery", 10, boothby_wang},
    {"Mahler suite", 20, mahler},
    {"MVEE bound chain", 60, mvee_chain},
}};

} // namespace

int criterion_count() { return static_cast<int>(kCriteria.size()); }

CriterionResult run_criterion(int id, std::uint64_t seed)
{
    if (id < 1 || id > criterion_count())
        throw InputError("no acceptance criterion " + std::to_string(id));
    const Criterion& s = kCriteria[id - 1];
    Rng rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(id));
    CriterionResult r;
    r.id = id;
    r.title = s.title;
    r.limit_seconds = s.limit_seconds;
    const auto t0 = std::chrono::steady_clock::now();
    r.entries = s.run(rng);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.within_time = r.seconds < r.limit_seconds;
    r.passed = r.within_time && all_pass(r.entries);
    return r;
}

std::vector<CriterionResult> run_all(std::uint64_t seed, const std::function<void(const CriterionResult&)>& on_done)
{
    std::vector<CriterionResult> out;
    for (int id = 1; id <= criterion_count(); ++id) {
        out.push_back(run_criterion(id, seed));
        if (on_done)
            on_done(out.back());
    }
    return out;
}

} // namespace systolic::acceptance
