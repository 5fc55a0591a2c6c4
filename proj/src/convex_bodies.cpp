#include "systolic/convex_bodies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace systolic::convex {

namespace {

double max_norm(const std::vector<Vector>& pts)
{
    double s = 0;
    for (const auto& p : pts)
        s = std::max(s, p.norm());
    return s;
}

int affine_rank(const std::vector<Vector>& pts, int n)
{
    if (pts.size() < 2)
        return 0;
    Matrix D(n, static_cast<long>(pts.size() - 1));
    for (std::size_t i = 1; i < pts.size(); ++i)
        D.col(static_cast<long>(i - 1)) = pts[i] - pts[0];
    Eigen::FullPivLU<Matrix> lu(D);
    lu.setThreshold(1e-10);
    return static_cast<int>(lu.rank());
}

bool subset_of(const std::vector<int>& small, const std::vector<int>& big)
{
    return std::all_of(small.begin(), small.end(),
                       [&](int i) { return std::binary_search(big.begin(), big.end(), i); });
}

// Facets of the hull of full-dimensional points in R^d by enumeration of
// d-subsets.
std::vector<Facet> hull_facets(const std::vector<Vector>& pts, int d)
{
    const int N = static_cast<int>(pts.size());
    const double eps = 1e-9 * std::max(1.0, max_norm(pts));
    std::vector<Facet> out;
    if (d == 1) {
        int lo = 0, hi = 0;
        for (int i = 0; i < N; ++i) {
            if (pts[i](0) < pts[lo](0))
                lo = i;
            if (pts[i](0) > pts[hi](0))
                hi = i;
        }
        Facet f1{Vector::Constant(1, 1.0), pts[hi](0), {}}, f0{Vector::Constant(1, -1.0), -pts[lo](0), {}};
        for (int i = 0; i < N; ++i) {
            if (std::abs(pts[i](0) - pts[hi](0)) <= eps)
                f1.vertices.push_back(i);
            if (std::abs(pts[i](0) - pts[lo](0)) <= eps)
                f0.vertices.push_back(i);
        }
        return {f1, f0};
    }
    std::vector<int> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    Matrix S(d, d + 1);
    while (true) {
        bool known = false;
        for (const auto& f : out)
            if (subset_of(idx, f.vertices)) {
                known = true;
                break;
            }
        if (!known) {
            for (int r = 0; r < d; ++r) {
                S.row(r).head(d) = pts[idx[r]].transpose();
                S(r, d) = -1.0;
            }
            Eigen::FullPivLU<Matrix> lu(S);
            lu.setThreshold(1e-10);
            if (lu.dimensionOfKernel() == 1) {
                Vector k = lu.kernel().col(0);
                Vector a = k.head(d);
                double b = k(d);
                const double na = a.norm();
                if (na > 0) {
                    a /= na;
                    b /= na;
                    bool above = false, below = false;
                    for (int i = 0; i < N && !(above && below); ++i) {
                        const double s = a.dot(pts[i]) - b;
                        above = above || s > eps;
                        below = below || s < -eps;
                    }
                    if (!(above && below)) {
                        if (above) {
                            a = -a;
                            b = -b;
                        }
                        Facet f{a, b, {}};
                        for (int i = 0; i < N; ++i)
                            if (std::abs(a.dot(pts[i]) - b) <= eps)
                                f.vertices.push_back(i);
                        bool dup = false;
                        for (const auto& g : out)
                            if ((g.a - f.a).norm() <= 1e-9 && std::abs(g.b - f.b) <= eps) {
                                dup = true;
                                break;
                            }
                        if (!dup)
                            out.push_back(std::move(f));
                    }
                }
            }
        }
        // next combination
        int i = d - 1;
        while (i >= 0 && idx[i] == N - d + i)
            --i;
        if (i < 0)
            break;
        ++idx[i];
        for (int j = i + 1; j < d; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return out;
}

double volume_rec(const std::vector<Vector>& pts, int d);

double cone_volume(const std::vector<Vector>& pts, int d, const std::vector<Facet>& fs)
{
    Vector c = Vector::Zero(d);
    for (const auto& p : pts)
        c += p;
    c /= static_cast<double>(pts.size());
    double vol = 0;
    for (const auto& f : fs) {
        // Orthonormal basis of the facet hyperplane: columns 1..d-1 of Q.
        Eigen::HouseholderQR<Matrix> qr(f.a);
        const Matrix Q = qr.householderQ();
        const Matrix B = Q.rightCols(d - 1);
        std::vector<Vector> sub;
        sub.reserve(f.vertices.size());
        for (int i : f.vertices)
            sub.push_back(B.transpose() * (pts[i] - pts[f.vertices[0]]));
        vol += (f.b - f.a.dot(c)) * volume_rec(sub, d - 1) / d;
    }
    return vol;
}

double volume_rec(const std::vector<Vector>& pts, int d)
{
    if (d == 1) {
        double lo = pts[0](0), hi = lo;
        for (const auto& p : pts) {
            lo = std::min(lo, p(0));
            hi = std::max(hi, p(0));
        }
        return hi - lo;
    }
    return cone_volume(pts, d, hull_facets(pts, d));
}

} // namespace

PolytopeV::PolytopeV(std::vector<Vector> vertices, bool symmetric) : vertices_(std::move(vertices)), symmetric_(symmetric)
{
    if (vertices_.empty())
        throw InputError("polytope needs at least one vertex");
    n_ = static_cast<int>(vertices_[0].size());
    if (n_ < 1 || n_ > kMaxDim)
        throw InputError("polytope dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    for (const auto& v : vertices_) {
        if (v.size() != n_)
            throw InputError("all vertices must have the same dimension");
        if (!v.allFinite())
            throw InputError("vertices must be finite");
    }
    if (affine_rank(vertices_, n_) < n_)
        throw InputError("affine hull of the vertices is not full-dimensional");
    if (symmetric_) {
        const double tol = 1e-12 * max_norm(vertices_);
        for (const auto& v : vertices_) {
            const bool found = std::any_of(vertices_.begin(), vertices_.end(),
                                           [&](const Vector& w) { return (v + w).norm() <= tol; });
            if (!found)
                throw InputError("symmetric flag set but the vertex set is not closed under negation");
        }
    }
}

PolytopeV PolytopeV::transformed(const Matrix& T) const
{
    if (T.rows() != n_ || T.cols() != n_)
        throw InputError("transform has the wrong shape");
    std::vector<Vector> w;
    w.reserve(vertices_.size());
    for (const auto& v : vertices_)
        w.push_back(T * v);
    return PolytopeV(std::move(w), symmetric_);
}

PolytopeV PolytopeV::with_facets(std::vector<Facet> f) const
{
    PolytopeV out = *this;
    out.facets_ = std::make_shared<const std::vector<Facet>>(std::move(f));
    return out;
}

std::vector<Facet> facets(const PolytopeV& P)
{
    if (P.known_facets())
        return *P.known_facets();
    return hull_facets(P.vertices(), P.n());
}

namespace {

// Indices of extreme points, one per distinct location.
std::vector<int> extreme_indices(const PolytopeV& P, const std::vector<Facet>& fs)
{
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(P.vertices().size()); ++i) {
        std::vector<Vector> normals;
        for (const auto& f : fs)
            if (std::binary_search(f.vertices.begin(), f.vertices.end(), i))
                normals.push_back(f.a);
        if (static_cast<int>(normals.size()) < P.n())
            continue;
        Matrix Nm(P.n(), static_cast<long>(normals.size()));
        for (std::size_t k = 0; k < normals.size(); ++k)
            Nm.col(static_cast<long>(k)) = normals[k];
        Eigen::FullPivLU<Matrix> lu(Nm);
        lu.setThreshold(1e-10);
        if (lu.rank() == P.n()) {
            const auto& v = P.vertices()[i];
            const bool dup = std::any_of(out.begin(), out.end(),
                                         [&](int k) { return (P.vertices()[k] - v).norm() <= 1e-12; });
            if (!dup)
                out.push_back(i);
        }
    }
    return out;
}

} // namespace

std::vector<Vector> hull_vertices(const PolytopeV& P)
{
    std::vector<Vector> out;
    for (int i : extreme_indices(P, facets(P)))
        out.push_back(P.vertices()[i]);
    return out;
}

PolytopeV polar(const PolytopeV& P)
{
    const double eps = 1e-12 * std::max(1.0, max_norm(P.vertices()));
    const auto fs = facets(P);
    std::vector<Vector> verts;
    for (const auto& f : fs) {
        if (f.b <= eps)
            throw NotInteriorError("origin is not an interior point of the polytope", f.a);
        verts.push_back(f.a / f.b);
    }
    std::vector<Facet> dual;
    for (int i : extreme_indices(P, fs)) {
        const Vector& v = P.vertices()[i];
        Facet g{v / v.norm(), 1.0 / v.norm(), {}};
        for (int k = 0; k < static_cast<int>(fs.size()); ++k)
            if (std::binary_search(fs[k].vertices.begin(), fs[k].vertices.end(), i))
                g.vertices.push_back(k);
        dual.push_back(std::move(g));
    }
    return PolytopeV(std::move(verts), P.symmetric()).with_facets(std::move(dual));
}

double volume(const PolytopeV& P)
{
    if (P.n() == 1)
        return volume_rec(P.vertices(), 1);
    return cone_volume(P.vertices(), P.n(), facets(P));
}

double mahler_volume(const PolytopeV& P)
{
    if (!P.symmetric())
        throw InputError("Mahler volume requires a centrally symmetric polytope");
    return volume(P) * volume(polar(P));
}

double unit_ball_volume(int n)
{
    return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

SantaloMahlerReport santalo_mahler_check(const PolytopeV& P, double eps)
{
    if (P.n() != 2 && P.n() != 3)
        throw InputError("the Mahler sandwich is checked in dimensions 2 and 3");
    SantaloMahlerReport r;
    r.value = mahler_volume(P);
    r.lower = P.n() == 2 ? 8.0 : 64.0 / 6.0;
    r.upper = unit_ball_volume(P.n()) * unit_ball_volume(P.n());
    r.within = r.lower - eps * r.lower <= r.value && r.value <= r.upper + eps * r.upper;
    return r;
}

double EllipsoidBody::volume() const
{
    return unit_ball_volume(static_cast<int>(A.rows())) / std::sqrt(A.determinant());
}

EllipsoidBody mvee(const std::vector<Vector>& points, double tol)
{
    if (points.empty())
        throw InputError("mvee needs points");
    if (!(tol > 0.0))
        throw InputError("mvee tolerance must be positive");
    const int n = static_cast<int>(points[0].size());
    const int N = static_cast<int>(points.size());
    for (const auto& p : points)
        if (p.size() != n || !p.allFinite())
            throw InputError("mvee points must be finite and of equal dimension");
    if (affine_rank(points, n) < n)
        throw InputError("mvee points do not affinely span the space");

    Matrix Qm(n + 1, N);
    for (int j = 0; j < N; ++j) {
        Qm.col(j).head(n) = points[j];
        Qm(n, j) = 1.0;
    }
    Vector u = Vector::Constant(N, 1.0 / N);
    const double d = n + 1;
    Vector M(N);
    for (int iter = 0; iter < 1'000'000; ++iter) {
        const Matrix X = Qm * u.asDiagonal() * Qm.transpose();
        const Eigen::LLT<Matrix> llt(X);
        const Matrix Y = llt.matrixL().solve(Qm);
        M = Y.colwise().squaredNorm().transpose();
        int jp = 0, jm = -1;
        for (int j = 0; j < N; ++j) {
            if (M(j) > M(jp))
                jp = j;
            if (u(j) > 0 && (jm < 0 || M(j) < M(jm)))
                jm = j;
        }
        const double eplus = M(jp) / d - 1.0;
        const double eminus = 1.0 - M(jm) / d;
        if (std::max(eplus, eminus) <= tol)
            break;
        if (eplus > eminus) {
            const double lam = (M(jp) - d) / (d * (M(jp) - 1.0));
            u *= 1.0 - lam;
            u(jp) += lam;
        } else {
            double lam = (d - M(jm)) / (d * (M(jm) - 1.0));
            lam = std::min(lam, u(jm) / (1.0 - u(jm)));
            u *= 1.0 + lam;
            u(jm) -= lam;
            if (u(jm) < 0)
                u(jm) = 0;
        }
    }
    Matrix P(n, N);
    for (int j = 0; j < N; ++j)
        P.col(j) = points[j];
    EllipsoidBody E;
    E.center = P * u;
    const Matrix cov = P * u.asDiagonal() * P.transpose() - E.center * E.center.transpose();
    E.A = cov.inverse() / n;
    E.A = 0.5 * (E.A + E.A.transpose());
    double worst = 0;
    for (const auto& p : points)
        worst = std::max(worst, E.level(p));
    if (worst > 1.0)
        E.A /= worst;
    return E;
}

std::vector<double> symplectic_eigenvalues(const Matrix& A)
{
    if (A.rows() != A.cols() || A.rows() % 2 != 0 || A.rows() == 0)
        throw InputError("symplectic eigenvalues need an even square matrix");
    const long m = A.rows() / 2;
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    if (es.eigenvalues().minCoeff() <= 0)
        throw InputError("matrix must be positive definite");
    const Matrix R = es.operatorSqrt();
    Matrix J = Matrix::Zero(2 * m, 2 * m);
    J.topRightCorner(m, m) = Matrix::Identity(m, m);
    J.bottomLeftCorner(m, m) = -Matrix::Identity(m, m);
    const Matrix K = R * J * R;
    const Matrix S = -(K * K);
    Eigen::SelfAdjointEigenSolver<Matrix> ks(0.5 * (S + S.transpose()));
    std::vector<double> nu;
    for (long i = 0; i < 2 * m; i += 2)
        nu.push_back(std::sqrt(std::max(0.0, 0.5 * (ks.eigenvalues()(i) + ks.eigenvalues()(i + 1)))));
    return nu;
}

CoarseViterboReport coarse_viterbo_bound(const PolytopeV& P, double tol)
{
    if (P.n() != 2 && P.n() != 4)
        throw InputError("coarse Viterbo bound needs dimension 2 or 4");
    if (!P.symmetric())
        throw InputError("coarse Viterbo bound needs a centrally symmetric body");
    const int m = P.n() / 2;
    CoarseViterboReport r;
    r.ellipsoid = mvee(P.vertices(), tol);
    r.volume_p = volume(P);
    r.volume_e = r.ellipsoid.volume();
    const auto nu = symplectic_eigenvalues(r.ellipsoid.A);
    r.c_upper = kPi / nu.back();
    r.viterbo_proxy = std::pow(r.c_upper, m) / (std::tgamma(m + 1.0) * r.volume_p);
    r.volume_ratio = r.volume_e / r.volume_p;
    r.bound = std::pow(4.0 * m, m);
    r.holds = r.viterbo_proxy <= r.volume_ratio * (1 + 1e-12) && r.volume_ratio <= r.bound;
    return r;
}

PolytopeV random_symmetric_polytope(int n, int half, std::mt19937_64& rng)
{
    if (half < n)
        throw InputError("need at least n point pairs");
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    std::vector<Vector> pts;
    for (int k = 0; k < half; ++k) {
        Vector v(n);
        for (int i = 0; i < n; ++i)
            v(i) = nd(rng);
        v *= std::pow(ur(rng), 1.0 / n) / v.norm();
        pts.push_back(v);
        pts.push_back(-v);
    }
    return PolytopeV(std::move(pts), true);
}

PolytopeV cube(int n)
{
    std::vector<Vector> pts;
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vector v(n);
        for (int i = 0; i < n; ++i)
            v(i) = (mask >> i) & 1 ? 1.0 : -1.0;
        pts.push_back(v);
    }
    return PolytopeV(std::move(pts), true);
}

PolytopeV cross_polytope(int n)
{
    std::vector<Vector> pts;
    for (int i = 0; i < n; ++i)
        for (double s : {1.0, -1.0}) {
            Vector v = Vector::Zero(n);
            v(i) = s;
            pts.push_back(v);
        }
    return PolytopeV(std::move(pts), true);
}

} // namespace systolic::convex
