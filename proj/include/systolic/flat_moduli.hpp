#pragma once

#include <array>

namespace systolic::flat {

using Vec2 = std::array<double, 2>;

/// Relative threshold for rejecting a degenerate pair of generators:
/// |v1 x v2| must exceed kDegeneracyEps * |v1| * |v2|.
inline constexpr double kDegeneracyEps = 1e-12;

/// A 2D lattice given by two generators, stored as given (not reduced).
struct Lattice2 {
    Vec2 v1{};
    Vec2 v2{};
};

/// Canonical representative of a flat torus: the torus is homothetic and
/// isometric to R^2 / <(1,0), (x0,y0)> with (x0,y0) in the domain
///   { x^2 + y^2 >= 1, 0 <= x <= 1/2, y > 0 }.
/// `scale` is the systole of the original lattice and `rotation` the angle
/// of its shortest vector.
struct TorusModulus {
    double x0 = 0.0;
    double y0 = 1.0;
    double scale = 1.0;
    double rotation = 0.0;
};

/// Flat Klein bottle R^2 / G with G generated by the translation
/// (x,y) -> (x, y + h) and the glide reflection (x,y) -> (x + w, h - y).
struct KleinParams {
    double w = 1.0;
    double h = 1.0;
};

struct ShortestVector {
    Vec2 vector{};
    double length = 0.0;
    long m = 0; ///< coefficient of v1
    long n = 0; ///< coefficient of v2
};

enum class Arithmetic {
    Exact,  ///< reduction decisions in exact rational arithmetic
    Double, ///< IEEE double throughout
};

/// Throws InputError when the generators are (numerically) dependent.
void validate(const Lattice2& lat);

/// Shortest nonzero vector by exhaustive enumeration of lattice points in a
/// disc, with per-row pruning. Independent of the Gauss reduction below.
ShortestVector shortest_vector(const Lattice2& lat);

/// Lagrange-Gauss reduction followed by normalisation into the canonical
/// domain. With Arithmetic::Exact every comparison and rounding decision
/// is taken on the exact (dyadic) Gram entries of the input.
TorusModulus reduce_to_gamma(const Lattice2& lat, Arithmetic arith = Arithmetic::Exact);

/// Lattice with generators scale*R(rotation)*(1,0) and scale*R(rotation)*(x0,y0).
Lattice2 reconstruct(const TorusModulus& mod);

bool in_gamma(const TorusModulus& mod, double eps = 1e-12);

/// sys^2 / area with systole 1 and area y0.
double torus_systolic_ratio(const TorusModulus& mod);

void validate(const KleinParams& kp);
double klein_systole(const KleinParams& kp);
double klein_area(const KleinParams& kp);
double klein_systolic_ratio(const KleinParams& kp);

} // namespace systolic::flat
