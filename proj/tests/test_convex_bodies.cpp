#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "systolic/common.hpp"
#include "systolic/convex_bodies.hpp"

using namespace systolic;
using namespace systolic::convex;

namespace {

Vector vec(std::initializer_list<double> xs)
{
    Vector v(static_cast<long>(xs.size()));
    long i = 0;
    for (double x : xs)
        v(i++) = x;
    return v;
}

PolytopeV regular_polygon(int N, double r, double phase = 0.0)
{
    std::vector<Vector> pts;
    for (int k = 0; k < N; ++k)
        pts.push_back(vec({r * std::cos(phase + kTwoPi * k / N), r * std::sin(phase + kTwoPi * k / N)}));
    return PolytopeV(pts, N % 2 == 0);
}

// Every point of `a` has a partner in `b` and vice versa.
bool same_point_set(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol)
{
    auto covered = [tol](const std::vector<Vector>& x, const std::vector<Vector>& y) {
        return std::all_of(x.begin(), x.end(), [&](const Vector& p) {
            return std::any_of(y.begin(), y.end(), [&](const Vector& q) { return (p - q).norm() <= tol; });
        });
    };
    return covered(a, b) && covered(b, a);
}

// Shoelace area of the hull of 2D points (monotone chain).
double shoelace_hull(std::vector<Vector> pts)
{
    std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
        return a(0) < b(0) || (a(0) == b(0) && a(1) < b(1));
    });
    auto cross = [](const Vector& o, const Vector& a, const Vector& b) {
        return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
    };
    std::vector<Vector> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0)
            --k;
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0)
            --k;
        h[k++] = pts[i];
    }
    double a = 0;
    for (std::size_t i = 0; i + 1 < k; ++i)
        a += h[i](0) * h[i + 1](1) - h[i + 1](0) * h[i](1);
    return 0.5 * std::abs(a);
}

double factorial(int n) { return std::tgamma(n + 1.0); }

Matrix random_matrix(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    Matrix T(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            T(i, j) = nd(rng);
    return T;
}

} // namespace

TEST_CASE("polytope validation")
{
    CHECK_THROWS_AS(PolytopeV({vec({0, 0}), vec({1, 1}), vec({2, 2})}, false), InputError);
    CHECK_THROWS_AS(PolytopeV({vec({1, 0}), vec({0, 1}), vec({-1, 0})}, true), InputError);
    CHECK_THROWS_AS(PolytopeV({vec({1, 0}), vec({0, 1, 0})}, false), InputError);
    CHECK_THROWS_AS(PolytopeV({}, false), InputError);
    CHECK_THROWS_AS(PolytopeV({Vector::Zero(5)}, false), InputError);
    CHECK_NOTHROW(PolytopeV({vec({1, 0}), vec({0, 1}), vec({-1, 0}), vec({0, -1})}, true));
}

TEST_CASE("volume")
{
    CHECK(volume(cube(2)) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(volume(cross_polytope(3)) == doctest::Approx(4.0 / 3).epsilon(1e-14));
    for (int n = 1; n <= 4; ++n) {
        CHECK(volume(cube(n)) == doctest::Approx(std::pow(2.0, n)).epsilon(1e-13));
        CHECK(volume(cross_polytope(n)) == doctest::Approx(std::pow(2.0, n) / factorial(n)).epsilon(1e-13));
    }

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 50; ++k) {
        std::vector<Vector> pts;
        for (int i = 0; i < 12; ++i)
            pts.push_back(vec({u(rng), u(rng)}));
        CHECK(volume(PolytopeV(pts, false)) == doctest::Approx(shoelace_hull(pts)).epsilon(1e-12));
    }
    // Simplices: |det| / n!, unchanged by added interior points.
    for (int n = 2; n <= 4; ++n)
        for (int k = 0; k < 10; ++k) {
            std::vector<Vector> pts{Vector::Zero(n)};
            Matrix E(n, n);
            for (int i = 0; i < n; ++i) {
                Vector v(n);
                for (int j = 0; j < n; ++j)
                    v(j) = u(rng);
                pts.push_back(v);
                E.col(i) = v;
            }
            const double ref = std::abs(E.determinant()) / factorial(n);
            CHECK(volume(PolytopeV(pts, false)) == doctest::Approx(ref).epsilon(1e-10));
            Vector c = Vector::Zero(n);
            for (const auto& p : pts)
                c += p / (n + 1.0);
            pts.push_back(c);
            CHECK(volume(PolytopeV(pts, false)) == doctest::Approx(ref).epsilon(1e-10));
        }
}

TEST_CASE("polar bodies")
{
    for (int n = 2; n <= 4; ++n)
        CHECK(same_point_set(polar(cube(n)).vertices(), cross_polytope(n).vertices(), 1e-12));

    const auto hex = regular_polygon(6, 1.0);
    const auto hp = polar(hex);
    CHECK(same_point_set(hp.vertices(), regular_polygon(6, 2 / std::sqrt(3.0), kPi / 6).vertices(), 1e-12));

    std::mt19937_64 rng(4);
    for (int n = 2; n <= 4; ++n)
        for (int k = 0; k < 5; ++k) {
            const auto P = random_symmetric_polytope(n, 6 + 2 * n, rng);
            const auto PP = polar(polar(P));
            CHECK(same_point_set(PP.vertices(), hull_vertices(P), 1e-10));
        }

    // Origin on the boundary or outside.
    const PolytopeV shifted({vec({0, 0}), vec({1, 0}), vec({0, 1})}, false);
    try {
        polar(shifted);
        FAIL("expected rejection");
    } catch (const NotInteriorError& e) {
        CHECK(e.witness.norm() > 0);
        for (const auto& v : shifted.vertices())
            CHECK(e.witness.dot(v) <= 1e-12);
    }
    CHECK_THROWS_AS(polar(PolytopeV({vec({1, 1}), vec({2, 1}), vec({1, 2})}, false)), InputError);
}

TEST_CASE("Mahler volume")
{
    for (int m = 2; m <= 4; ++m)
        CHECK(mahler_volume(cube(m)) == doctest::Approx(std::pow(4.0, m) / factorial(m)).epsilon(1e-12));
    const double disc = mahler_volume(regular_polygon(64, 1.0));
    CHECK(disc == doctest::Approx(64.0 * 64.0 * std::pow(std::sin(kPi / 64), 2)).epsilon(1e-12));
    CHECK(disc < kPi * kPi);
    CHECK(disc > kPi * kPi - 0.01);

    Matrix shear = Matrix::Identity(2, 2);
    shear(0, 1) = 0.7;
    CHECK(mahler_volume(cube(2).transformed(shear)) == doctest::Approx(8.0).epsilon(1e-10));

    std::mt19937_64 rng(9);
    for (int n = 2; n <= 4; ++n)
        for (int k = 0; k < 5; ++k) {
            const auto P = random_symmetric_polytope(n, 5 + n, rng);
            const Matrix T = random_matrix(n, rng);
            const double v = mahler_volume(P);
            CHECK(std::abs(mahler_volume(P.transformed(T)) - v) <= 1e-9 * v);
        }
    CHECK_THROWS_AS(mahler_volume(PolytopeV({vec({1, 0}), vec({0, 1}), vec({-1, -1})}, false)), InputError);
}

TEST_CASE("Santalo and Mahler sandwich")
{
    const auto sq = santalo_mahler_check(cube(2));
    CHECK(sq.value == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(sq.lower == 8.0);
    CHECK(sq.upper == doctest::Approx(kPi * kPi).epsilon(1e-15));
    CHECK(sq.within);
    const auto oct = santalo_mahler_check(cross_polytope(3));
    CHECK(oct.value == doctest::Approx(32.0 / 3).epsilon(1e-13));
    CHECK(oct.within);
    CHECK(santalo_mahler_check(cube(3)).within);

    std::mt19937_64 rng(12);
    for (int k = 0; k < 60; ++k) {
        const auto hex = random_symmetric_polytope(2, 3, rng);
        const auto r = santalo_mahler_check(hex);
        CHECK(r.within);
        CHECK(r.value < r.upper);
        const auto r3 = santalo_mahler_check(random_symmetric_polytope(3, 8, rng));
        CHECK(r3.within);
        CHECK(r3.value < r3.upper);
    }
    CHECK_THROWS_AS(santalo_mahler_check(cube(4)), InputError);
}

TEST_CASE("minimum-volume enclosing ellipsoid")
{
    for (int n = 2; n <= 4; ++n) {
        const auto E = mvee(cube(n).vertices());
        CHECK(E.center.norm() < 1e-12);
        CHECK((E.A - Matrix::Identity(n, n) / n).cwiseAbs().maxCoeff() < 1e-9);
    }

    // Images of +-e_i and extra unit-sphere points under an affine map: the
    // enclosing ellipsoid is the image of the unit ball.
    std::mt19937_64 rng(21);
    std::normal_distribution<double> nd;
    for (int n = 2; n <= 4; ++n) {
        Matrix T = random_matrix(n, rng);
        T += 3 * Matrix::Identity(n, n);
        Vector c(n);
        for (int i = 0; i < n; ++i)
            c(i) = nd(rng);
        std::vector<Vector> pts;
        for (int i = 0; i < n; ++i)
            for (double s : {1.0, -1.0})
                pts.push_back(T * (s * Vector::Unit(n, i)) + c);
        for (int k = 0; k < 30; ++k) {
            Vector w(n);
            for (int i = 0; i < n; ++i)
                w(i) = nd(rng);
            pts.push_back(T * w.normalized() + c);
        }
        const auto E = mvee(pts);
        const Matrix target = (T * T.transpose()).inverse();
        CHECK((E.center - c).norm() < 1e-5 * c.norm() + 1e-6);
        CHECK((E.A - target).norm() < 1e-5 * target.norm());
        const EllipsoidBody truth{c, target};
        CHECK(E.volume() <= truth.volume() * (1 + n * kMveeTol));
        CHECK(E.volume() >= truth.volume() * (1 - 1e-5));
    }

    // Random clouds: containment, and no random containing competitor is smaller.
    std::uniform_real_distribution<double> u(-1, 1);
    for (int n = 2; n <= 4; ++n)
        for (int k = 0; k < 5; ++k) {
            std::vector<Vector> pts;
            for (int i = 0; i < 40; ++i) {
                Vector v(n);
                for (int j = 0; j < n; ++j)
                    v(j) = u(rng) * (1 + j);
                pts.push_back(v);
            }
            const auto E = mvee(pts);
            for (const auto& p : pts)
                CHECK(E.level(p) <= 1 + kMveeTol);
            for (int t = 0; t < 100; ++t) {
                Matrix L = random_matrix(n, rng);
                Matrix A = L * L.transpose() + 0.1 * Matrix::Identity(n, n);
                Vector c = E.center;
                for (int j = 0; j < n; ++j)
                    c(j) += 0.3 * u(rng);
                EllipsoidBody F{c, A};
                double worst = 0;
                for (const auto& p : pts)
                    worst = std::max(worst, F.level(p));
                F.A /= worst;
                CHECK(E.volume() <= F.volume() * (1 + 1e-9));
            }
        }

    CHECK_THROWS_AS(mvee({vec({0, 0}), vec({1, 1}), vec({2, 2})}), InputError);
    CHECK_THROWS_AS(mvee({}), InputError);
}

TEST_CASE("symplectic eigenvalues")
{
    Matrix D = Matrix::Zero(4, 4);
    D.diagonal() << 2.0, 0.5, 2.0, 0.5;
    auto nu = symplectic_eigenvalues(D);
    CHECK(nu[0] == doctest::Approx(0.5));
    CHECK(nu[1] == doctest::Approx(2.0));

    // Invariance under congruence by a symplectic shear.
    Matrix S = Matrix::Identity(4, 4);
    S(0, 2) = S(2, 0) = 0.0;
    S.block(0, 2, 2, 2) << 0.4, -0.3, -0.3, 1.1;
    const Matrix A = S.transpose() * D * S;
    nu = symplectic_eigenvalues(A);
    CHECK(nu[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nu[1] == doctest::Approx(2.0).epsilon(1e-12));
    // Diagonal (a, b) in one pair: nu = sqrt(a b).
    Matrix B = Matrix::Zero(2, 2);
    B.diagonal() << 4.0, 9.0;
    CHECK(symplectic_eigenvalues(B)[0] == doctest::Approx(6.0));
}

TEST_CASE("coarse Viterbo bound")
{
    const auto c4 = coarse_viterbo_bound(cube(4));
    CHECK(c4.volume_p == doctest::Approx(16.0));
    CHECK(c4.volume_ratio == doctest::Approx(kPi * kPi * 8 / 16).epsilon(1e-6));
    CHECK(c4.bound == 64.0);
    CHECK(c4.holds);
    // E is the ball of radius 2, capacity 4 pi.
    CHECK(c4.c_upper == doctest::Approx(4 * kPi).epsilon(1e-6));

    const auto disc = coarse_viterbo_bound(regular_polygon(64, 1.0));
    CHECK(disc.volume_ratio == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(disc.volume_ratio <= 4.0);
    CHECK(disc.holds);

    std::vector<Vector> cell24;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (double s : {1.0, -1.0})
                for (double t : {1.0, -1.0}) {
                    Vector v = Vector::Zero(4);
                    v(i) = s;
                    v(j) = t;
                    cell24.push_back(v);
                }
    const PolytopeV c24(cell24, true);
    CHECK(volume(c24) == doctest::Approx(8.0).epsilon(1e-12));
    const auto r24 = coarse_viterbo_bound(c24);
    CHECK(r24.volume_ratio == doctest::Approx(2 * kPi * kPi / 8).epsilon(1e-6));
    CHECK(r24.holds);

    std::mt19937_64 rng(33);
    for (int k = 0; k < 10; ++k) {
        const auto P = random_symmetric_polytope(4, 10, rng);
        const auto r = coarse_viterbo_bound(P);
        CHECK(r.holds);
        CHECK(r.volume_ratio <= r.bound);
        for (const auto& v : P.vertices())
            CHECK(r.ellipsoid.level(v) <= 1 + kMveeTol);
    }
    CHECK_THROWS_AS(coarse_viterbo_bound(cube(3)), InputError);
}
