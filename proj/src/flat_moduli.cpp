#include "systolic/flat_moduli.hpp"

#include <algorithm>
#include <cmath>
#include <gmpxx.h>
#include <limits>
#include <utility>

#include "systolic/common.hpp"

namespace systolic::flat {

namespace {

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }
double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

Vec2 combine(const Lattice2& lat, long m, long n)
{
    const double dm = static_cast<double>(m);
    const double dn = static_cast<double>(n);
    return {dm * lat.v1[0] + dn * lat.v2[0], dm * lat.v1[1] + dn * lat.v2[1]};
}

// Integer change of basis: reduced b1 = u[0][0] v1 + u[0][1] v2, b2 = u[1][0] v1 + u[1][1] v2.
using Unimodular = std::array<std::array<long, 2>, 2>;

struct ReducedGram {
    double a = 0.0;   // |b1|^2
    double b = 0.0;   // b1 . b2
    double det = 0.0; // a c - b^2
    Unimodular u{};
};

ReducedGram gauss_reduce_exact(const Lattice2& lat)
{
    const mpq_class x1(lat.v1[0]), y1(lat.v1[1]), x2(lat.v2[0]), y2(lat.v2[1]);
    mpq_class a = x1 * x1 + y1 * y1;
    mpq_class b = x1 * x2 + y1 * y2;
    mpq_class c = x2 * x2 + y2 * y2;
    Unimodular u{{{1, 0}, {0, 1}}};
    const mpq_class half(1, 2);
    for (;;) {
        if (c < a) {
            std::swap(a, c);
            std::swap(u[0], u[1]);
        }
        mpq_class q = b / a + half;
        mpz_class mu;
        mpz_fdiv_q(mu.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
        if (mu == 0)
            break;
        const mpq_class muq(mu);
        c = c - 2 * muq * b + muq * muq * a;
        b = b - muq * a;
        const long m = mu.get_si();
        u[1][0] -= m * u[0][0];
        u[1][1] -= m * u[0][1];
    }
    const mpq_class det = a * c - b * b;
    return {a.get_d(), b.get_d(), det.get_d(), u};
}

ReducedGram gauss_reduce_double(const Lattice2& lat)
{
    double a = dot(lat.v1, lat.v1);
    double b = dot(lat.v1, lat.v2);
    double c = dot(lat.v2, lat.v2);
    Unimodular u{{{1, 0}, {0, 1}}};
    for (int iter = 0; iter < 10000; ++iter) {
        if (c < a) {
            std::swap(a, c);
            std::swap(u[0], u[1]);
        }
        const double mu = std::floor(b / a + 0.5);
        if (mu == 0.0)
            break;
        c = c - 2.0 * mu * b + mu * mu * a;
        b = b - mu * a;
        const long m = static_cast<long>(mu);
        u[1][0] -= m * u[0][0];
        u[1][1] -= m * u[0][1];
    }
    const double cr = cross(lat.v1, lat.v2);
    // Gram determinant is invariant under unimodular changes of basis.
    return {a, b, cr * cr, u};
}

} // namespace

void validate(const Lattice2& lat)
{
    for (double x : {lat.v1[0], lat.v1[1], lat.v2[0], lat.v2[1]})
        if (!std::isfinite(x))
            throw InputError("lattice generators must be finite");
    const double n1 = norm(lat.v1);
    const double n2 = norm(lat.v2);
    if (n1 == 0.0 || n2 == 0.0 || std::abs(cross(lat.v1, lat.v2)) <= kDegeneracyEps * n1 * n2)
        throw InputError("degenerate lattice: generators are linearly dependent");
}

ShortestVector shortest_vector(const Lattice2& lat)
{
    validate(lat);
    const double det = std::abs(cross(lat.v1, lat.v2));
    const double len2 = norm(lat.v2);

    ShortestVector best;
    best.length = std::numeric_limits<double>::infinity();
    auto consider = [&](long m, long n) {
        if (m == 0 && n == 0)
            return;
        const Vec2 v = combine(lat, m, n);
        const double len = norm(v);
        if (len < best.length)
            best = {v, len, m, n};
    };
    consider(1, 0);
    consider(0, 1);
    consider(1, 1);
    consider(1, -1);

    // Index bound from the dual basis: |m| <= R |v2| / |det| for |x| <= R.
    const double radius = 2.0 * best.length;
    const long mmax = static_cast<long>(std::floor(radius * len2 / det)) + 1;
    for (long m = -mmax; m <= mmax; ++m) {
        const double dm = static_cast<double>(m);
        // Distance from m*v1 to the line spanned by v2.
        const double dist = std::abs(dm) * det / len2;
        if (dist > best.length)
            continue;
        const Vec2 p{dm * lat.v1[0], dm * lat.v1[1]};
        const double center = -dot(p, lat.v2) / (len2 * len2);
        const double halfwidth = std::sqrt(std::max(0.0, best.length * best.length - dist * dist)) / len2;
        const long lo = static_cast<long>(std::floor(center - halfwidth)) - 1;
        const long hi = static_cast<long>(std::ceil(center + halfwidth)) + 1;
        for (long n = lo; n <= hi; ++n)
            consider(m, n);
    }
    return best;
}

TorusModulus reduce_to_gamma(const Lattice2& lat, Arithmetic arith)
{
    validate(lat);
    const ReducedGram g = arith == Arithmetic::Exact ? gauss_reduce_exact(lat) : gauss_reduce_double(lat);
    const Vec2 b1 = combine(lat, g.u[0][0], g.u[0][1]);
    TorusModulus mod;
    mod.scale = std::sqrt(g.a);
    // Reflection (b2 -> -b2) puts x0 into [0, 1/2]; on the unit arc this is
    // also the representative with the smaller x0.
    mod.x0 = std::abs(g.b) / g.a;
    mod.y0 = std::sqrt(std::max(0.0, g.det)) / g.a;
    mod.rotation = std::atan2(b1[1], b1[0]);
    return mod;
}

Lattice2 reconstruct(const TorusModulus& mod)
{
    const double c = std::cos(mod.rotation) * mod.scale;
    const double s = std::sin(mod.rotation) * mod.scale;
    return {{c, s}, {c * mod.x0 - s * mod.y0, s * mod.x0 + c * mod.y0}};
}

bool in_gamma(const TorusModulus& mod, double eps)
{
    return mod.x0 * mod.x0 + mod.y0 * mod.y0 >= 1.0 - eps && mod.x0 >= -eps && mod.x0 <= 0.5 + eps &&
           mod.y0 > 0.0 && mod.scale > 0.0;
}

double torus_systolic_ratio(const TorusModulus& mod)
{
    if (!in_gamma(mod))
        throw InputError("torus modulus outside the canonical domain");
    return 1.0 / mod.y0;
}

void validate(const KleinParams& kp)
{
    if (!(kp.w > 0.0) || !(kp.h > 0.0) || !std::isfinite(kp.w) || !std::isfinite(kp.h))
        throw InputError("Klein bottle sides must be positive and finite");
}

double klein_systole(const KleinParams& kp)
{
    validate(kp);
    // Deck elements are g^a t^b. Even a: translation by (a w, b h).
    // Odd a: glide reflection along x with translation part a w; its minimal
    // displacement is |a| w, attained on the axis y = (1 - b) h / 2.
    auto displacement = [&](long a, long b) {
        if (a % 2 == 0)
            return std::hypot(static_cast<double>(a) * kp.w, static_cast<double>(b) * kp.h);
        return static_cast<double>(std::abs(a)) * kp.w;
    };
    double best = std::min(displacement(1, 0), displacement(0, 1));
    const long amax = static_cast<long>(std::ceil(best / kp.w));
    const long bmax = static_cast<long>(std::ceil(best / kp.h));
    for (long a = -amax; a <= amax; ++a)
        for (long b = -bmax; b <= bmax; ++b)
            if (a != 0 || b != 0)
                best = std::min(best, displacement(a, b));
    return best;
}

double klein_area(const KleinParams& kp)
{
    validate(kp);
    return kp.w * kp.h;
}

double klein_systolic_ratio(const KleinParams& kp)
{
    const double s = klein_systole(kp);
    return s * s / klein_area(kp);
}

} // namespace systolic::flat
