#include "systolic/symplectic_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "systolic/common.hpp"
#include "systolic/quadrature.hpp"

namespace systolic::symp {

namespace {

int half_dimension(const Matrix& M)
{
    if (M.rows() != M.cols())
        throw InputError("matrix must be square");
    if (M.rows() == 0 || M.rows() % 2 != 0)
        throw InputError("matrix dimension must be even and positive, got " + std::to_string(M.rows()));
    return static_cast<int>(M.rows() / 2);
}

Matrix random_symmetric(int m, std::mt19937_64& rng, double sd)
{
    std::normal_distribution<double> nd(0.0, sd);
    Matrix S(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j)
            S(i, j) = S(j, i) = nd(rng);
    return S;
}

Eigen::MatrixXcd random_unitary(int m, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXcd G(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            G(i, j) = {nd(rng), nd(rng)};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(m, m);
}

} // namespace

Matrix standard_j(int m)
{
    if (m < 1)
        throw InputError("half-dimension must be >= 1");
    Matrix J = Matrix::Zero(2 * m, 2 * m);
    J.topRightCorner(m, m) = Matrix::Identity(m, m);
    J.bottomLeftCorner(m, m) = -Matrix::Identity(m, m);
    return J;
}

SymplecticCheck is_symplectic(const Matrix& M, double tol)
{
    const int m = half_dimension(M);
    const Matrix J = standard_j(m);
    SymplecticCheck out;
    out.residual = (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
    out.symplectic = out.residual <= tol;
    return out;
}

EllipsoidSpec::EllipsoidSpec(std::vector<double> a) : a_(std::move(a))
{
    if (a_.empty())
        throw InputError("ellipsoid needs at least one factor");
    for (double x : a_)
        if (!(x > 0.0) || !std::isfinite(x))
            throw InputError("ellipsoid factors must be positive and finite");
    std::sort(a_.begin(), a_.end());
}

double capacity_ellipsoid(const EllipsoidSpec& e) { return kPi * e.a().front(); }

double volume_ellipsoid(const EllipsoidSpec& e)
{
    double v = 1.0;
    for (int i = 1; i <= e.m(); ++i)
        v *= kPi * e.a()[i - 1] / i;
    return v;
}

double viterbo_ratio_ellipsoid(const EllipsoidSpec& e)
{
    double r = 1.0;
    for (double x : e.a())
        r *= e.a().front() / x;
    return r;
}

Matrix oscillator_normal_form(const std::vector<double>& a)
{
    const EllipsoidSpec check(a);
    (void)check;
    const int m = static_cast<int>(a.size());
    Matrix M = Matrix::Zero(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
        M(i, i) = 1.0 / std::sqrt(a[i]);
        M(m + i, m + i) = std::sqrt(a[i]);
    }
    return M;
}

Vector hopf_flow(const Vector& z, double t)
{
    if (z.size() == 0 || z.size() % 2 != 0)
        throw InputError("point must lie in an even-dimensional space");
    if (std::abs(z.norm() - 1.0) > 1e-9)
        throw InputError("point must lie on the unit sphere");
    const long m = z.size() / 2;
    const double c = std::cos(2 * t), s = std::sin(2 * t);
    Vector out(z.size());
    for (long j = 0; j < m; ++j) {
        out(j) = c * z(j) + s * z(m + j);
        out(m + j) = -s * z(j) + c * z(m + j);
    }
    return out;
}

Vector reeb_flow_numeric(const Vector& z, double t, double tol)
{
    if (z.size() == 0 || z.size() % 2 != 0)
        throw InputError("point must lie in an even-dimensional space");
    const long m = z.size() / 2;
    using State = std::vector<double>;
    State x(z.data(), z.data() + z.size());
    auto rhs = [m](const State& y, State& dy, double) {
        for (long j = 0; j < m; ++j) {
            dy[j] = 2 * y[m + j];
            dy[m + j] = -2 * y[j];
        }
    };
    namespace odeint = boost::numeric::odeint;
    odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(tol, tol), rhs, x, 0.0,
                               t, t / 64);
    return Eigen::Map<Vector>(x.data(), z.size());
}

double shadow_area_linear(const Matrix& M)
{
    const int m = half_dimension(M);
    Eigen::FullPivLU<Matrix> lu(M);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
        throw InputError("shadow area needs an invertible matrix");
    const Matrix Minv = lu.inverse();
    const Matrix Q = Minv.transpose() * Minv; // M(B) = { x : x^T Q x <= 1 }

    // Move (q_1, p_1) to the front.
    const int n = 2 * m;
    std::vector<int> order{0, m};
    for (int i = 0; i < n; ++i)
        if (i != 0 && i != m)
            order.push_back(i);
    Matrix P(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            P(i, j) = Q(order[i], order[j]);

    Eigen::Matrix2d S = P.topLeftCorner(2, 2);
    if (n > 2) {
        const Matrix B = P.topRightCorner(2, n - 2);
        S -= B * P.bottomRightCorner(n - 2, n - 2).ldlt().solve(B.transpose());
    }
    return kPi / std::sqrt(S.determinant());
}

Matrix realify(const Eigen::MatrixXcd& U)
{
    const long m = U.rows();
    Matrix R(2 * m, 2 * m);
    R.topLeftCorner(m, m) = U.real();
    R.topRightCorner(m, m) = U.imag();
    R.bottomLeftCorner(m, m) = -U.imag();
    R.bottomRightCorner(m, m) = U.real();
    return R;
}

Matrix random_symplectic(int m, std::mt19937_64& rng, int factors)
{
    Matrix M = Matrix::Identity(2 * m, 2 * m);
    std::uniform_int_distribution<int> kind(0, 2);
    for (int k = 0; k < factors; ++k) {
        Matrix F = Matrix::Identity(2 * m, 2 * m);
        switch (kind(rng)) {
        case 0:
            F.topRightCorner(m, m) = random_symmetric(m, rng, 0.7);
            break;
        case 1:
            F.bottomLeftCorner(m, m) = random_symmetric(m, rng, 0.7);
            break;
        default:
            F = realify(random_unitary(m, rng));
        }
        M = F * M;
    }
    return M;
}

Matrix squeeze_control(int m)
{
    if (m < 2)
        throw InputError("the squeeze control needs m >= 2");
    Matrix D = Matrix::Identity(2 * m, 2 * m);
    D(0, 0) = D(m, m) = 0.5;
    D(1, 1) = D(m + 1, m + 1) = 2.0;
    return D;
}

RadialHypersurfaceS3 RadialHypersurfaceS3::sample(const std::function<double(const Vec4&)>& psi, int nu, int nxi1,
                                                  int nxi2)
{
    if (nu < 1 || nxi1 < 1 || nxi2 < 1)
        throw InputError("S^3 grid sizes must be positive");
    RadialHypersurfaceS3 h;
    h.nu_ = nu;
    h.nxi1_ = nxi1;
    h.nxi2_ = nxi2;
    const auto gl = quadrature::gauss_legendre(static_cast<std::size_t>(nu));
    h.u_ = gl.nodes;
    h.w_ = gl.weights;
    h.values_.resize(static_cast<std::size_t>(nu) * nxi1 * nxi2);
    std::size_t k = 0;
    for (int iu = 0; iu < nu; ++iu)
        for (int i1 = 0; i1 < nxi1; ++i1)
            for (int i2 = 0; i2 < nxi2; ++i2) {
                const double v = psi(point(h.u_[iu], kTwoPi * i1 / nxi1, kTwoPi * i2 / nxi2));
                if (!(v > 0.0) || !std::isfinite(v))
                    throw InputError("psi must be positive and finite on S^3");
                h.values_[k++] = v;
            }
    return h;
}

Vec4 RadialHypersurfaceS3::point(double u, double xi1, double xi2)
{
    const double ce = std::sqrt(std::max(0.0, 0.5 * (1 + u)));
    const double se = std::sqrt(std::max(0.0, 0.5 * (1 - u)));
    return {ce * std::cos(xi1), se * std::cos(xi2), ce * std::sin(xi1), se * std::sin(xi2)};
}

double RadialHypersurfaceS3::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double RadialHypersurfaceS3::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double contact_volume_radial_S3(const RadialHypersurfaceS3& h)
{
    // dsigma = (1/4) du dxi1 dxi2.
    std::vector<double> rows(static_cast<std::size_t>(h.nu()));
    std::vector<double> cell(static_cast<std::size_t>(h.nxi1()) * h.nxi2());
    for (int iu = 0; iu < h.nu(); ++iu) {
        std::size_t k = 0;
        for (int i1 = 0; i1 < h.nxi1(); ++i1)
            for (int i2 = 0; i2 < h.nxi2(); ++i2) {
                const double v = h.at(iu, i1, i2);
                cell[k++] = (v * v) * (v * v);
            }
        rows[iu] = h.u_weights()[iu] * quadrature::pairwise_sum(cell);
    }
    const double dxi = (kTwoPi / h.nxi1()) * (kTwoPi / h.nxi2());
    return 0.5 * 0.25 * dxi * quadrature::pairwise_sum(rows);
}

MonteCarloEstimate star_volume_monte_carlo(const std::function<double(const Vec4&)>& psi, double r_max,
                                           std::uint64_t samples, std::uint64_t seed)
{
    if (!(r_max > 0.0) || samples == 0)
        throw InputError("Monte-Carlo needs r_max > 0 and a positive sample count");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(-r_max, r_max);
    std::uint64_t hits = 0;
    for (std::uint64_t k = 0; k < samples; ++k) {
        const Vec4 x(ud(rng), ud(rng), ud(rng), ud(rng));
        const double r = x.norm();
        if (r == 0.0) {
            ++hits;
            continue;
        }
        const double bound = psi(x / r);
        if (bound > r_max)
            throw InputError("psi exceeds the Monte-Carlo sampling radius");
        hits += r <= bound ? 1 : 0;
    }
    const double cube = std::pow(2 * r_max, 4);
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    return {cube * p, cube * std::sqrt(p * (1 - p) / static_cast<double>(samples))};
}

QuadraticDensity QuadraticDensity::random(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> ub(-0.15, 0.15), uc(-0.1, 0.1);
    QuadraticDensity d;
    for (int i = 0; i < 4; ++i)
        d.b(i) = ub(rng);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j)
            d.C(i, j) = d.C(j, i) = uc(rng);
    return d;
}

} // namespace systolic::symp
