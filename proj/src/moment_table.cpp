#include "meixner/moment_table.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace meixner {

namespace {

constexpr std::array<std::pair<MomentMethod, std::string_view>, 5> kMethodNames{{
    {MomentMethod::combinatorial, "combinatorial"},
    {MomentMethod::tridiagonal, "tridiagonal"},
    {MomentMethod::fock, "fock"},
    {MomentMethod::density_quadrature, "density-quadrature"},
    {MomentMethod::monte_carlo, "monte-carlo"},
}};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

std::string_view to_string(MomentMethod method) {
    for (const auto& [m, name] : kMethodNames)
        if (m == method) return name;
    return "unknown";
}

MomentMethod parse_moment_method(std::string_view name) {
    for (const auto& [m, n] : kMethodNames)
        if (n == name) return m;
    throw std::invalid_argument("unknown moment method '" + std::string(name) + "'");
}

void MomentTable::validate() const {
    if (moments.empty()) throw std::invalid_argument("moment table is empty");
    for (double m : moments)
        if (!std::isfinite(m)) throw std::invalid_argument("non-finite moment");
    if (method == MomentMethod::monte_carlo) {
        if (stderrs.size() != moments.size())
            throw std::invalid_argument("monte-carlo table needs one stderr per moment");
        for (double s : stderrs)
            if (!(s >= 0.0)) throw std::invalid_argument("negative or NaN standard error");
        if (std::abs(moments[0] - 1.0) > 1e-12)
            throw std::invalid_argument("moment 0 must equal 1");
        return;
    }
    if (!stderrs.empty()) throw std::invalid_argument("only monte-carlo tables carry standard errors");
    // Density quadrature measures M_0 rather than assuming it.
    if (method != MomentMethod::density_quadrature && moments[0] != 1.0)
        throw std::invalid_argument("moment 0 must equal 1");
}

void write_csv(std::ostream& out, const MomentTable& table) {
    out << "m,moment,stderr,method\n";
    const auto old_precision = out.precision();
    out << std::setprecision(17);
    for (std::size_t m = 0; m < table.moments.size(); ++m) {
        out << m << ',' << table.moments[m] << ',';
        if (table.has_stderr()) out << table.stderrs[m];
        out << ',' << to_string(table.method) << '\n';
    }
    out.precision(old_precision);
}

MomentTable read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "m,moment,stderr,method")
        throw std::invalid_argument("missing moment table header");
    MomentTable table;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 4) throw std::invalid_argument("malformed moment table row: " + line);
        const auto m = static_cast<std::size_t>(std::stoul(cells[0]));
        if (m != table.moments.size()) throw std::invalid_argument("moment rows out of order");
        const auto method = parse_moment_method(cells[3]);
        if (first) {
            table.method = method;
            first = false;
        } else if (method != table.method) {
            throw std::invalid_argument("mixed methods in one moment table");
        }
        table.moments.push_back(std::stod(cells[1]));
        if (!cells[2].empty()) table.stderrs.push_back(std::stod(cells[2]));
    }
    table.validate();
    return table;
}

}  // namespace meixner
