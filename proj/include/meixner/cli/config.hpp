#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "meixner/rmt.hpp"

namespace meixner::cli {

/// Bad configuration; `line` is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Which law the tau_2 moments are compared with: the Psi_2 moments of the
/// Fock model, i.e. the law (a1, a2, b2, b2), or the law (a2, a2, b2, b2)
/// that follows from the matrix side directly.
enum class Tau2Oracle { psi2, level };

/// One factor y(label)^power of a word such as "s u^2 s".
struct WordFactor {
    std::string label;
    int power = 1;
};
using Word = std::vector<WordFactor>;

Word parse_word(const std::string& text);
std::string to_string(const Word& word);

/// Declarative experiment for the `rmt` subcommand.
///
///     # comment
///     n = 512
///     rho = 0.5
///     trials = 400
///     seed = 7
///     m_max = 6            # 0 skips the moment table
///     states = 12          # 1, 2 or 12
///     tau2_oracle = psi2   # or level
///     label.u.a1 = 0.5     # fields a1 a2 v11 v12 v22
///     word = s u^2 s       # tau_1 mixed moment, repeatable
///     cfree = s u^2 s      # centered product, repeatable
///     sweep = 64 128 256   # finite-size sweep of tau_1(M^sweep_m)
///     sweep_m = 4
///     output = results.csv
struct RunConfig {
    int n = 512;
    double rho = 0.5;
    int trials = 400;
    std::uint64_t seed = 1;
    int m_max = 6;
    bool tau1 = true;
    bool tau2 = true;
    Tau2Oracle tau2_oracle = Tau2Oracle::psi2;
    std::vector<MatrixLabel> labels;
    std::vector<Word> words;
    std::vector<Word> cfree;
    std::vector<int> sweep;
    int sweep_m = 4;
    std::string output;

    /// Throws ConfigError for inconsistent settings (unknown labels in words,
    /// bad geometry, ...).
    void validate() const;
    BlockGeometry geometry() const { return BlockGeometry::from_schedule(n, rho); }
    EnsembleSpec ensemble() const;
};

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

nlohmann::json to_json(const RunConfig& config);
/// Throws ConfigError on missing or mistyped fields.
RunConfig run_config_from_json(const nlohmann::json& j);

}  // namespace meixner::cli
