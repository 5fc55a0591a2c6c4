#include "systolic/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace systolic {

namespace {

Entry make(std::string name, double value, double reference, double margin)
{
    const bool ok = std::isfinite(margin) && margin >= 0.0;
    return {std::move(name), value, reference, margin, ok ? Status::Pass : Status::Fail};
}

} // namespace

Entry check_le(std::string name, double value, double bound, double tol)
{
    return make(std::move(name), value, bound, bound + tol - value);
}

Entry check_ge(std::string name, double value, double bound, double tol)
{
    return make(std::move(name), value, bound, value - bound + tol);
}

Entry check_close(std::string name, double value, double reference, double tol)
{
    return make(std::move(name), value, reference, tol - std::abs(value - reference));
}

Entry check_true(std::string name, bool value)
{
    return make(std::move(name), value ? 1.0 : 0.0, 1.0, value ? 0.0 : -1.0);
}

Entry info(std::string name, double value, double reference)
{
    return {std::move(name), value, reference, std::numeric_limits<double>::quiet_NaN(), Status::Info};
}

bool all_pass(const std::vector<Entry>& entries)
{
    return std::none_of(entries.begin(), entries.end(), [](const Entry& e) { return e.status == Status::Fail; });
}

const char* to_string(Status s)
{
    switch (s) {
    case Status::Pass:
        return "pass";
    case Status::Fail:
        return "fail";
    default:
        return "info";
    }
}

nlohmann::ordered_json to_json(const Entry& e)
{
    return {{"name", e.name}, {"value", e.value}, {"reference", e.reference}, {"margin", e.margin},
            {"status", to_string(e.status)}};
}

nlohmann::ordered_json to_json(const std::vector<Entry>& entries)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : entries)
        arr.push_back(to_json(e));
    return arr;
}

} // namespace systolic
