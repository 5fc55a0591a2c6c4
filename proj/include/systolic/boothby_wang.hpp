#pragma once

#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace systolic::bw {

/// Circle bundle over S^2 with Euler number `euler`; kappa0 = (euler / 4 pi) dA
/// so that int kappa0 = euler and the Zoll form alpha0 has minimal period 1.
struct BWBundle {
    int euler = 1;

    explicit BWBundle(int e);
    double rho0() const { return 1.0 / euler; }
    double kappa0_density() const;
};

/// Real spherical-harmonic term coeff * P_l^{|m|}(cos theta) * trig(m phi),
/// with cos for m >= 0 and sin for m < 0. P_l^m carries no Condon-Shortley phase.
struct HarmonicTerm {
    int l = 0;
    int m = 0;
    double coeff = 0.0;
};

struct HarmonicExpansion {
    double offset = 0.0;
    std::vector<HarmonicTerm> terms;

    double operator()(double theta, double phi) const;
    void validate() const;

    /// Terms with 1 <= l <= lmax, offset 1, total deviation bounded by 1/2,
    /// so values lie in [0.5, 1.5].
    static HarmonicExpansion random(std::mt19937_64& rng, int lmax = 4);
};

/// Positive density on S^2 on a grid: Gauss-Legendre in cos theta and uniform
/// in phi. Optionally keeps the analytic expansion it was sampled from.
class DensityOnBase {
public:
    static constexpr int kDefaultNTheta = 64;
    static constexpr int kDefaultNPhi = 128;

    static DensityOnBase from_expansion(HarmonicExpansion e, int ntheta = kDefaultNTheta, int nphi = kDefaultNPhi);
    static DensityOnBase from_function(const std::function<double(double, double)>& f, int ntheta = kDefaultNTheta,
                                       int nphi = kDefaultNPhi);

    int ntheta() const { return ntheta_; }
    int nphi() const { return nphi_; }
    double theta(int i) const { return theta_[i]; }
    double phi(int j) const;
    double weight(int i) const { return w_[i]; }
    double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * nphi_ + j]; }
    const std::optional<HarmonicExpansion>& expansion() const { return expansion_; }
    DensityOnBase scaled(double c) const;

private:
    DensityOnBase() = default;
    void fill(const std::function<double(double, double)>& f);

    int ntheta_ = 0, nphi_ = 0;
    std::vector<double> theta_, w_, values_;
    std::optional<HarmonicExpansion> expansion_;
};

struct BasePoint {
    double value = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

/// Grid minimum, refined by local quadratic fits in tangent-plane
/// coordinates when the analytic expansion is known.
BasePoint min_of_density(const DensityOnBase& psi);

/// Period of the Reeb orbit over the minimising critical point: min psi.
double tmin_upper_bound(const DensityOnBase& psi);

enum class CriticalKind { Minimum, Maximum };

struct CriticalPoint {
    BasePoint point;
    CriticalKind kind = CriticalKind::Minimum;
};

/// Discrete local extrema of the grid values (8-neighbourhood, periodic in
/// phi, the first and last rings compared with their own ring through the
/// pole). Degenerate critical sets are reported point by point.
std::vector<CriticalPoint> grid_critical_points(const DensityOnBase& psi);

/// int psi^2 kappa0.
double bw_contact_volume(const DensityOnBase& psi, const BWBundle& bundle);

struct BWRatio {
    double ratio = 0.0;       ///< (min psi)^2 / volume
    bool equality = false;    ///< psi constant to 1e-10 relative on the grid
    double min_psi = 0.0;
    double volume = 0.0;
    double rho0 = 0.0;
};

BWRatio bw_systolic_ratio(const DensityOnBase& psi, const BWBundle& bundle);

} // namespace systolic::bw
