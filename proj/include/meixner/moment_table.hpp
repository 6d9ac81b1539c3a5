#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace meixner {

/// Route that produced a table of moments.
enum class MomentMethod {
    combinatorial,
    tridiagonal,
    fock,
    density_quadrature,
    monte_carlo,
};

std::string_view to_string(MomentMethod method);
MomentMethod parse_moment_method(std::string_view name);

/// Moments M_0..M_{m_max} of a law, tagged with the route that computed them.
///
/// Monte-Carlo tables carry one standard error per entry; every other route
/// leaves `stderrs` empty.
struct MomentTable {
    MomentMethod method = MomentMethod::combinatorial;
    std::vector<double> moments;
    std::vector<double> stderrs;

    int max_order() const { return static_cast<int>(moments.size()) - 1; }
    bool has_stderr() const { return !stderrs.empty(); }

    /// Throws std::invalid_argument if M_0 != 1 (exact routes), if the
    /// standard-error column is malformed, or if any entry is non-finite.
    void validate() const;
};

/// CSV with header "m,moment,stderr,method"; the stderr cell is empty for
/// exact routes. Values are printed with 17 significant digits.
void write_csv(std::ostream& out, const MomentTable& table);
MomentTable read_csv(std::istream& in);

}  // namespace meixner
