#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace systolic {

enum class Status { Pass, Fail, Info };

/// One reported quantity. `margin` is the signed slack of the check
/// (>= 0 passes); `reference` is the constant it is compared against.
struct Entry {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double margin = 0.0;
    Status status = Status::Info;
};

/// value <= bound + tol.
Entry check_le(std::string name, double value, double bound, double tol = 0.0);
/// value >= bound - tol.
Entry check_ge(std::string name, double value, double bound, double tol = 0.0);
/// |value - reference| <= tol.
Entry check_close(std::string name, double value, double reference, double tol);
/// Boolean expectation; value and reference are 1 or 0.
Entry check_true(std::string name, bool value);
/// Reported quantity without a check; reference defaults to none (null in
/// JSON) and the margin is always null.
Entry info(std::string name, double value, double reference = std::numeric_limits<double>::quiet_NaN());

bool all_pass(const std::vector<Entry>& entries);
nlohmann::ordered_json to_json(const Entry& e);
nlohmann::ordered_json to_json(const std::vector<Entry>& entries);
const char* to_string(Status s);

} // namespace systolic
