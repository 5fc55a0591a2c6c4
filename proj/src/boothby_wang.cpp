#include "systolic/boothby_wang.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "systolic/common.hpp"
#include "systolic/quadrature.hpp"

namespace systolic::bw {

namespace {

double legendre(int l, int m, double x) { return std::assoc_legendre(static_cast<unsigned>(l), static_cast<unsigned>(m), x); }

// max |P_l^m| on [-1, 1], sampled.
double legendre_bound(int l, int m)
{
    double b = 0;
    for (int k = 0; k <= 2000; ++k)
        b = std::max(b, std::abs(legendre(l, m, -1.0 + k / 1000.0)));
    return b;
}

Eigen::Vector3d to_vec(double theta, double phi)
{
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

void to_angles(const Eigen::Vector3d& v, double& theta, double& phi)
{
    theta = std::acos(std::clamp(v.z(), -1.0, 1.0));
    phi = std::atan2(v.y(), v.x());
    if (phi < 0)
        phi += kTwoPi;
}

// Local minimisation on S^2 by quadratic fits on a 3x3 stencil in
// gnomonic tangent coordinates.
BasePoint refine(const HarmonicExpansion& e, BasePoint start, double h)
{
    Eigen::Vector3d p = to_vec(start.theta, start.phi);
    auto chart = [&](const Eigen::Vector3d& base, const Eigen::Vector3d& e1, const Eigen::Vector3d& e2, double x,
                     double y) { return (base + x * e1 + y * e2).normalized(); };
    auto eval = [&](const Eigen::Vector3d& v) {
        double t, f;
        to_angles(v, t, f);
        return e(t, f);
    };
    double fp = eval(p);
    for (int iter = 0; iter < 200 && h > 1e-7; ++iter) {
        const Eigen::Vector3d a = std::abs(p.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
        const Eigen::Vector3d e1 = (a - a.dot(p) * p).normalized();
        const Eigen::Vector3d e2 = p.cross(e1);
        double f[3][3];
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                f[i + 1][j + 1] = (i == 0 && j == 0) ? fp : eval(chart(p, e1, e2, i * h, j * h));
        const Eigen::Vector2d g((f[2][1] - f[0][1]) / (2 * h), (f[1][2] - f[1][0]) / (2 * h));
        Eigen::Matrix2d H;
        H(0, 0) = (f[2][1] - 2 * fp + f[0][1]) / (h * h);
        H(1, 1) = (f[1][2] - 2 * fp + f[1][0]) / (h * h);
        H(0, 1) = H(1, 0) = (f[2][2] - f[2][0] - f[0][2] + f[0][0]) / (4 * h * h);
        if (g.norm() == 0.0 && H(0, 0) > 0 && H.determinant() > 0)
            break;
        Eigen::Vector2d s;
        if (H(0, 0) > 0 && H.determinant() > 0)
            s = -H.inverse() * g;
        else
            s = g.norm() > 0 ? Eigen::Vector2d(-g.normalized() * h) : Eigen::Vector2d(h, 0);
        if (s.norm() > 2 * h)
            s *= 2 * h / s.norm();
        const Eigen::Vector3d q = chart(p, e1, e2, s.x(), s.y());
        const double fq = eval(q);
        if (fq < fp) {
            p = q;
            fp = fq;
            h = std::max(std::min(h, s.norm()), 1e-6);
            if (s.norm() < 1e-12)
                break;
        } else {
            h *= 0.5;
        }
    }
    if (fp < start.value) {
        start.value = fp;
        to_angles(p, start.theta, start.phi);
    }
    return start;
}

} // namespace

BWBundle::BWBundle(int e) : euler(e)
{
    if (e < 1)
        throw InputError("Euler number must be a positive integer, got " + std::to_string(e));
}

double BWBundle::kappa0_density() const { return euler / (4 * kPi); }

double HarmonicExpansion::operator()(double theta, double phi) const
{
    const double x = std::cos(theta);
    double v = offset;
    for (const auto& t : terms) {
        const int am = std::abs(t.m);
        const double trig = t.m >= 0 ? std::cos(am * phi) : std::sin(am * phi);
        v += t.coeff * legendre(t.l, am, x) * trig;
    }
    return v;
}

void HarmonicExpansion::validate() const
{
    if (!std::isfinite(offset))
        throw InputError("harmonic offset must be finite");
    for (const auto& t : terms) {
        if (t.l < 0 || t.l > 64 || std::abs(t.m) > t.l)
            throw InputError("harmonic term needs 0 <= |m| <= l <= 64");
        if (!std::isfinite(t.coeff))
            throw InputError("harmonic coefficient must be finite");
    }
}

HarmonicExpansion HarmonicExpansion::random(std::mt19937_64& rng, int lmax)
{
    HarmonicExpansion e;
    e.offset = 1.0;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int count = (lmax + 1) * (lmax + 1) - 1;
    for (int l = 1; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m)
            e.terms.push_back({l, m, 0.5 * u(rng) / (count * legendre_bound(l, std::abs(m)))});
    return e;
}

DensityOnBase DensityOnBase::from_expansion(HarmonicExpansion e, int ntheta, int nphi)
{
    e.validate();
    DensityOnBase d;
    d.ntheta_ = ntheta;
    d.nphi_ = nphi;
    d.fill([&e](double t, double p) { return e(t, p); });
    d.expansion_ = std::move(e);
    return d;
}

DensityOnBase DensityOnBase::from_function(const std::function<double(double, double)>& f, int ntheta, int nphi)
{
    DensityOnBase d;
    d.ntheta_ = ntheta;
    d.nphi_ = nphi;
    d.fill(f);
    return d;
}

void DensityOnBase::fill(const std::function<double(double, double)>& f)
{
    if (ntheta_ < 2 || nphi_ < 4)
        throw InputError("density grid needs ntheta >= 2 and nphi >= 4");
    const auto gl = quadrature::gauss_legendre(static_cast<std::size_t>(ntheta_));
    theta_.resize(ntheta_);
    w_ = gl.weights;
    // Nodes in cos theta are ascending; store theta ascending instead.
    for (int i = 0; i < ntheta_; ++i) {
        theta_[i] = std::acos(gl.nodes[ntheta_ - 1 - i]);
        w_[i] = gl.weights[ntheta_ - 1 - i];
    }
    values_.resize(static_cast<std::size_t>(ntheta_) * nphi_);
    for (int i = 0; i < ntheta_; ++i)
        for (int j = 0; j < nphi_; ++j) {
            const double v = f(theta_[i], phi(j));
            if (!(v > 0.0) || !std::isfinite(v))
                throw InputError("density must be positive and finite on the grid");
            values_[static_cast<std::size_t>(i) * nphi_ + j] = v;
        }
}

double DensityOnBase::phi(int j) const { return kTwoPi * j / nphi_; }

DensityOnBase DensityOnBase::scaled(double c) const
{
    if (!(c > 0.0) || !std::isfinite(c))
        throw InputError("scale must be positive");
    DensityOnBase d = *this;
    for (auto& v : d.values_)
        v *= c;
    if (d.expansion_) {
        d.expansion_->offset *= c;
        for (auto& t : d.expansion_->terms)
            t.coeff *= c;
    }
    return d;
}

BasePoint min_of_density(const DensityOnBase& psi)
{
    BasePoint best{psi.at(0, 0), psi.theta(0), psi.phi(0)};
    for (int i = 0; i < psi.ntheta(); ++i)
        for (int j = 0; j < psi.nphi(); ++j)
            if (psi.at(i, j) < best.value)
                best = {psi.at(i, j), psi.theta(i), psi.phi(j)};
    if (psi.expansion())
        best = refine(*psi.expansion(), best, kPi / psi.ntheta());
    return best;
}

double tmin_upper_bound(const DensityOnBase& psi) { return min_of_density(psi).value; }

std::vector<CriticalPoint> grid_critical_points(const DensityOnBase& psi)
{
    const int nt = psi.ntheta(), np = psi.nphi();
    std::vector<CriticalPoint> out;
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < np; ++j) {
            const double v = psi.at(i, j);
            bool is_min = true, is_max = true;
            auto visit = [&](int a, int b) {
                const double w = psi.at(a, ((b % np) + np) % np);
                is_min = is_min && v <= w;
                is_max = is_max && v >= w;
            };
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0)
                        continue;
                    const int a = i + di;
                    if (a < 0 || a >= nt)
                        visit(i, j + np / 2 + dj); // across the pole
                    else
                        visit(a, j + dj);
                }
            if (is_min || is_max)
                out.push_back({{v, psi.theta(i), psi.phi(j)}, is_min ? CriticalKind::Minimum : CriticalKind::Maximum});
        }
    return out;
}

double bw_contact_volume(const DensityOnBase& psi, const BWBundle& bundle)
{
    std::vector<double> rows(static_cast<std::size_t>(psi.ntheta()));
    std::vector<double> ring(static_cast<std::size_t>(psi.nphi()));
    for (int i = 0; i < psi.ntheta(); ++i) {
        for (int j = 0; j < psi.nphi(); ++j)
            ring[j] = psi.at(i, j) * psi.at(i, j);
        rows[i] = psi.weight(i) * quadrature::pairwise_sum(ring);
    }
    return bundle.kappa0_density() * (kTwoPi / psi.nphi()) * quadrature::pairwise_sum(rows);
}

BWRatio bw_systolic_ratio(const DensityOnBase& psi, const BWBundle& bundle)
{
    BWRatio r;
    r.min_psi = min_of_density(psi).value;
    r.volume = bw_contact_volume(psi, bundle);
    r.ratio = r.min_psi * r.min_psi / r.volume;
    r.rho0 = bundle.rho0();
    double lo = psi.at(0, 0), hi = lo;
    for (int i = 0; i < psi.ntheta(); ++i)
        for (int j = 0; j < psi.nphi(); ++j) {
            lo = std::min(lo, psi.at(i, j));
            hi = std::max(hi, psi.at(i, j));
        }
    r.equality = hi - lo < 1e-10 * hi;
    return r;
}

} // namespace systolic::bw
