#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "systolic/boothby_wang.hpp"

namespace systolic::io {

/// Comma-separated reals, e.g. "2,5" or "0.3". Throws InputError.
std::vector<double> parse_list(const std::string& text);

/// Numeric CSV: one row per line, blank lines and '#' comments skipped,
/// all rows of equal length. Throws InputError.
std::vector<std::vector<double>> read_csv(const std::string& path);

Eigen::MatrixXd read_matrix_csv(const std::string& path);
std::vector<Eigen::VectorXd> read_points_csv(const std::string& path);

/// {"offset": c, "terms": [[l, m, coeff], ...]}.
bw::HarmonicExpansion parse_harmonics(const std::string& json_text);
bw::HarmonicExpansion read_harmonics(const std::string& path);

} // namespace systolic::io
