#include "systolic/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "systolic/common.hpp"

namespace systolic::io {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, const std::string& where)
{
    const std::string t = trim(field);
    if (t.empty())
        throw InputError("empty number in " + where);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
        throw InputError("malformed number '" + t + "' in " + where);
    return v;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ','))
        out.push_back(parse_number(field, "list '" + text + "'"));
    if (out.empty() || (!text.empty() && text.back() == ','))
        throw InputError("malformed list '" + text + "'");
    return out;
}

std::vector<std::vector<double>> read_csv(const std::string& path)
{
    std::stringstream in(slurp(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const std::string where = path + ":" + std::to_string(lineno);
        std::vector<double> row;
        std::stringstream ls(t);
        std::string field;
        while (std::getline(ls, field, ','))
            row.push_back(parse_number(field, where));
        if (t.back() == ',')
            throw InputError("trailing comma in " + where);
        if (!rows.empty() && row.size() != rows.front().size())
            throw InputError("ragged row in " + where);
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw InputError(path + " contains no data");
    return rows;
}

Eigen::MatrixXd read_matrix_csv(const std::string& path)
{
    const auto rows = read_csv(path);
    Eigen::MatrixXd M(static_cast<long>(rows.size()), static_cast<long>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            M(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
    return M;
}

std::vector<Eigen::VectorXd> read_points_csv(const std::string& path)
{
    std::vector<Eigen::VectorXd> pts;
    for (const auto& r : read_csv(path))
        pts.push_back(Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<long>(r.size())));
    return pts;
}

bw::HarmonicExpansion parse_harmonics(const std::string& json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("malformed harmonics JSON: ") + e.what());
    }
    try {
        bw::HarmonicExpansion e;
        e.offset = j.at("offset").get<double>();
        for (const auto& t : j.value("terms", nlohmann::json::array())) {
            if (!t.is_array() || t.size() != 3)
                throw InputError("harmonic term must be [l, m, coeff]");
            e.terms.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<double>()});
        }
        e.validate();
        return e;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed harmonics JSON: ") + e.what());
    }
}

bw::HarmonicExpansion read_harmonics(const std::string& path) { return parse_harmonics(slurp(path)); }

} // namespace systolic::io
