#include "systolic/conformal_loewner.hpp"

#include <algorithm>
#include <cmath>

#include "systolic/common.hpp"
#include "systolic/quadrature.hpp"

namespace systolic::loewner {

namespace {

constexpr std::size_t kMinGrid = 8;

double wrap01(double x) { return x - std::floor(x); }

} // namespace

ConformalTorusMetric::ConformalTorusMetric(flat::TorusModulus modulus, std::size_t nt, std::size_t ns,
                                           std::vector<double> f)
    : modulus_(modulus), nt_(nt), ns_(ns), f_(std::move(f))
{
    if (!flat::in_gamma(modulus_))
        throw InputError("conformal metric: modulus outside the canonical domain");
    if (nt_ < kMinGrid || ns_ < kMinGrid)
        throw InputError("conformal metric: grid must be at least 8 x 8");
    if (f_.size() != nt_ * ns_)
        throw InputError("conformal metric: grid size does not match rows * cols");
    for (double v : f_)
        if (!(v > 0.0) || !std::isfinite(v))
            throw InputError("conformal factor must be positive and finite");
}

ConformalTorusMetric ConformalTorusMetric::sample(flat::TorusModulus modulus, std::size_t nt, std::size_t ns,
                                                  const std::function<double(double, double)>& f)
{
    std::vector<double> values(nt * ns);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < ns; ++j)
            values[i * ns + j] = f(static_cast<double>(j) / static_cast<double>(ns),
                                   static_cast<double>(i) / static_cast<double>(nt));
    return {modulus, nt, ns, std::move(values)};
}

ConformalTorusMetric ConformalTorusMetric::sample_euclidean(flat::TorusModulus modulus, std::size_t nt,
                                                            std::size_t ns,
                                                            const std::function<double(double, double)>& f)
{
    return sample(modulus, nt, ns, [&](double s, double t) { return f(s + t * modulus.x0, t * modulus.y0); });
}

double ConformalTorusMetric::value_at(double s, double t) const
{
    const double u = wrap01(s) * static_cast<double>(ns_);
    const double v = wrap01(t) * static_cast<double>(nt_);
    const auto j0 = static_cast<std::size_t>(u) % ns_;
    const auto i0 = static_cast<std::size_t>(v) % nt_;
    const std::size_t j1 = (j0 + 1) % ns_;
    const std::size_t i1 = (i0 + 1) % nt_;
    const double a = u - std::floor(u);
    const double b = v - std::floor(v);
    return (1 - a) * (1 - b) * at(i0, j0) + a * (1 - b) * at(i0, j1) + (1 - a) * b * at(i1, j0) + a * b * at(i1, j1);
}

ConformalTorusMetric ConformalTorusMetric::scaled(double c) const
{
    std::vector<double> values = f_;
    for (double& v : values)
        v *= c;
    return {modulus_, nt_, ns_, std::move(values)};
}

double area(const ConformalTorusMetric& metric)
{
    const auto& f = metric.values();
    std::vector<double> sq(f.size());
    std::transform(f.begin(), f.end(), sq.begin(), [](double v) { return v * v; });
    return metric.modulus().y0 * quadrature::pairwise_sum(sq) / static_cast<double>(sq.size());
}

std::vector<double> horizontal_lengths(const ConformalTorusMetric& metric)
{
    const std::size_t ns = metric.cols();
    std::vector<double> lengths(metric.rows());
    for (std::size_t i = 0; i < metric.rows(); ++i)
        lengths[i] = quadrature::pairwise_sum(metric.values().data() + i * ns, ns) / static_cast<double>(ns);
    return lengths;
}

double horizontal_length_at(const ConformalTorusMetric& metric, double t)
{
    // Bilinear interpolation is linear in t at fixed s, so the row integral
    // interpolates linearly between the neighbouring row integrals.
    const auto lengths = horizontal_lengths(metric);
    const double v = wrap01(t) * static_cast<double>(metric.rows());
    const auto i0 = static_cast<std::size_t>(v) % metric.rows();
    const std::size_t i1 = (i0 + 1) % metric.rows();
    const double b = v - std::floor(v);
    return (1 - b) * lengths[i0] + b * lengths[i1];
}

LoewnerReport loewner_chain_check(const ConformalTorusMetric& metric, double eps)
{
    const double y0 = metric.modulus().y0;
    const std::size_t nt = metric.rows();
    const std::size_t ns = metric.cols();
    const auto lengths = horizontal_lengths(metric);

    // Per-row variance in two passes, so each row gap is non-negative up to rounding.
    std::vector<double> row_gap(nt);
    std::vector<double> dev(ns);
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < ns; ++j) {
            const double d = metric.at(i, j) - lengths[i];
            dev[j] = d * d;
        }
        row_gap[i] = quadrature::pairwise_sum(dev) / static_cast<double>(ns);
    }

    LoewnerReport r;
    r.area_g = area(metric);
    r.min_horizontal_length = *std::min_element(lengths.begin(), lengths.end());
    const double lmin2 = r.min_horizontal_length * r.min_horizontal_length;

    std::vector<double> l2(nt);
    std::vector<double> excess(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        l2[i] = lengths[i] * lengths[i];
        excess[i] = l2[i] - lmin2;
    }
    const double mean_l2 = quadrature::pairwise_sum(l2) / static_cast<double>(nt);
    r.mean_sq_bound = y0 * mean_l2;
    r.sigma_upper = lmin2 / r.area_g;
    r.flat_ratio = 1.0 / y0;
    r.stage_gaps[0] = y0 * quadrature::pairwise_sum(row_gap) / static_cast<double>(nt);
    r.stage_gaps[1] = y0 * quadrature::pairwise_sum(excess) / static_cast<double>(nt);
    r.stage_gaps[2] = r.flat_ratio - r.sigma_upper;
    r.min_row_gap = *std::min_element(row_gap.begin(), row_gap.end());
    r.certified = r.min_row_gap >= -eps && std::all_of(r.stage_gaps.begin(), r.stage_gaps.end(),
                                                       [eps](double g) { return g >= -eps; }) &&
                  r.flat_ratio <= kLoewnerBound + eps;
    return r;
}

} // namespace systolic::loewner
