#include "meixner/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "meixner/cfree.hpp"
#include "meixner/fock.hpp"
#include "meixner/jacobi.hpp"
#include "meixner/nc_partitions.hpp"

namespace meixner::cli {

namespace {

constexpr const char* kToolVersion = "0.1.0";

// Sections of an experiment draw from independent streams.
enum Section : std::uint64_t { section_moments = 101, section_words = 102, section_cfree = 103, section_sweep = 104 };

std::uint64_t section_seed(std::uint64_t seed, Section section, std::size_t index) {
    return derive_seed(seed, static_cast<std::uint64_t>(index), section);
}

double moment_tolerance(double se, double oracle) { return std::max(3.0 * se, 0.05 * std::abs(oracle) + 0.02); }

void finish_row(ResultRow& r) {
    r.abs_error = std::abs(r.estimate - r.oracle);
    r.pass = r.tolerance <= 0.0 || r.abs_error <= r.tolerance;
}

// Depth whose exactness bound covers `operators` factors.
int depth_for(int operators) { return std::max(1, (operators + 1) / 2 + 1); }

std::vector<MeixnerParams> limit_params(const RunConfig& c) {
    std::vector<MeixnerParams> out;
    for (const auto& l : c.labels) out.push_back(l.limit_params());
    return out;
}

std::vector<std::string> label_names(const RunConfig& c) {
    std::vector<std::string> out;
    for (const auto& l : c.labels) out.push_back(l.name);
    return out;
}

int total_degree(const Word& w) {
    int d = 0;
    for (const auto& f : w) d += f.power;
    return d;
}

std::vector<AlgebraElement> word_elements(const Word& w, const EnsembleSpec& spec) {
    std::vector<AlgebraElement> out;
    for (const auto& f : w) {
        AlgebraElement e{spec.label_index(f.label), std::vector<double>(static_cast<std::size_t>(f.power) + 1, 0.0)};
        e.coeffs.back() = 1.0;
        out.push_back(std::move(e));
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

}  // namespace

bool ExperimentResult::passed() const {
    return failed_checks.empty() && std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.pass; });
}

ExperimentResult run_experiment(const RunConfig& c, ExecutionPolicy policy, std::ostream& log) {
    c.validate();
    ExperimentResult result;
    const BlockGeometry g = c.geometry();
    const EnsembleSpec spec = c.ensemble();

    if (c.m_max > 0) {
        for (std::size_t i = 0; i < c.labels.size(); ++i) {
            const MatrixLabel& l = c.labels[i];
            log << "moments: label " << l.name << " (n = " << g.n << ", n1 = " << g.n1 << ", trials = " << c.trials
                << ")\n";
            const TraceMoments tm =
                mc_trace_moments({g, l}, c.m_max, c.trials, section_seed(c.seed, section_moments, i), c.tau2, policy);
            const MeixnerParams p = l.limit_params();
            if (c.tau1) {
                const MomentTable oracle = moments_fock(p, c.m_max);
                for (int m = 1; m <= c.m_max; ++m) {
                    ResultRow r{l.name, 1, std::to_string(m), g.n, tm.tau1.moments[m], tm.tau1.stderrs[m],
                                oracle.moments[m]};
                    r.tolerance = moment_tolerance(r.standard_error, r.oracle);
                    finish_row(r);
                    result.rows.push_back(r);
                }
            }
            if (c.tau2) {
                for (int m = 1; m <= c.m_max; ++m) {
                    double oracle = 0.0;
                    if (c.tau2_oracle == Tau2Oracle::level)
                        oracle = moments_fock({p.a2, p.a2, p.b2, p.b2}, m).moments[m];
                    else if (p.b2 > 0.0)
                        oracle = meixner_moment_fock_psi2(p, m, depth_for(m));
                    else
                        oracle = std::pow(p.a1, m);
                    ResultRow r{l.name, 2, std::to_string(m), g.n, tm.tau2.moments[m], tm.tau2.stderrs[m], oracle};
                    r.tolerance = moment_tolerance(r.standard_error, r.oracle);
                    finish_row(r);
                    result.rows.push_back(r);
                }
            }
        }
    }

    for (std::size_t i = 0; i < c.words.size(); ++i) {
        const Word& w = c.words[i];
        log << "word: " << to_string(w) << "\n";
        const auto elements = word_elements(w, spec);
        std::vector<MatrixPolynomial> polys;
        for (const auto& e : elements) polys.push_back({e.label, e.coeffs});
        const Estimate est = mc_polynomial_word(spec, polys, 1, section_seed(c.seed, section_words, i), policy);
        const FockModel model(label_names(c), depth_for(total_degree(w)), limit_params(c), GammaAction::level_diagonal);
        ResultRow r{to_string(w), 1, "w" + std::to_string(i + 1), g.n, est.mean, est.standard_error,
                    product_expectation(elements, model, 1)};
        r.tolerance = moment_tolerance(r.standard_error, r.oracle);
        finish_row(r);
        result.rows.push_back(r);
    }

    for (std::size_t i = 0; i < c.cfree.size(); ++i) {
        const Word& w = c.cfree[i];
        const auto elements = word_elements(w, spec);
        const FockModel model(label_names(c), depth_for(total_degree(w)), limit_params(c), GammaAction::level_diagonal);
        for (Centering centering : {Centering::conditional, Centering::psi1}) {
            const bool cond = centering == Centering::conditional;
            log << "cfree[" << (cond ? "conditional" : "psi1") << "]: " << to_string(w) << "\n";
            const Estimate est =
                matrix_cfree_test(spec, elements, section_seed(c.seed, section_cfree, 2 * i + (cond ? 0 : 1)), centering,
                                  policy);
            ResultRow r{std::string("cfree[") + (cond ? "conditional" : "psi1") + "] " + to_string(w), 1,
                        "c" + std::to_string(i + 1), g.n, est.mean, est.standard_error,
                        // Conditional freeness: the centered product vanishes in the limit.
                        cond ? 0.0 : centered_product(elements, model, Centering::psi1)};
            r.tolerance = std::max(3.0 * r.standard_error, cond ? 0.03 : 0.05);
            finish_row(r);
            result.rows.push_back(r);
        }
    }

    if (!c.sweep.empty()) {
        for (std::size_t i = 0; i < c.labels.size(); ++i) {
            const MatrixLabel& l = c.labels[i];
            const double limit = moments_fock(l.limit_params(), c.sweep_m).moments[c.sweep_m];
            log << "sweep: label " << l.name << ", m = " << c.sweep_m << "\n";
            const SweepResult s = finite_size_sweep(l, c.sweep_m, c.sweep, c.rho, c.trials,
                                                    section_seed(c.seed, section_sweep, i), limit, policy);
            for (const auto& row : s.rows)
                result.rows.push_back({"sweep " + l.name, 1, std::to_string(c.sweep_m), row.n, row.estimate.mean,
                                       row.estimate.standard_error, limit, row.abs_error});
            log << "sweep: fitted decay exponent " << s.decay_exponent << "\n";
            const SweepRow& first = s.rows.front();
            const SweepRow& last = s.rows.back();
            if (last.abs_error > first.abs_error + 2.0 * last.estimate.standard_error)
                result.failed_checks.push_back("sweep " + l.name + ": error at n = " + std::to_string(last.n) +
                                               " exceeds error at n = " + std::to_string(first.n) + " + 2 stderr");
        }
    }
    return result;
}

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "item,state,m,n,estimate,stderr,oracle,abs_error\n";
    for (const auto& r : rows)
        out << r.item << ',' << r.state << ',' << r.id << ',' << r.n << ',' << fmt(r.estimate) << ','
            << fmt(r.standard_error) << ',' << fmt(r.oracle) << ',' << fmt(r.abs_error) << '\n';
}

nlohmann::json rows_to_json(const std::vector<ResultRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
        out.push_back({{"item", r.item},
                       {"state", r.state},
                       {"m", r.id},
                       {"n", r.n},
                       {"estimate", r.estimate},
                       {"stderr", r.standard_error},
                       {"oracle", r.oracle},
                       {"abs_error", r.abs_error},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass}});
    return out;
}

namespace {

struct ParamFlags {
    double a1 = 0.0, a2 = 0.0, b1 = 1.0, b2 = 1.0;

    void add(CLI::App* app) {
        app->add_option("--a1", a1, "alpha_1")->capture_default_str();
        app->add_option("--a2", a2, "alpha_2 (alpha_n for n >= 2)")->capture_default_str();
        app->add_option("--b1", b1, "beta_1")->capture_default_str();
        app->add_option("--b2", b2, "beta_2 (beta_n for n >= 2)")->capture_default_str();
    }
    MeixnerParams params() const {
        MeixnerParams p{a1, a2, b1, b2};
        p.validate();
        return p;
    }
};

struct Context {
    std::ostream& out;
    std::ostream& err;
};

// Distinguishes bad input (exit 2) from failures while computing (exit 1).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

MeixnerParams checked_params(const ParamFlags& f) {
    try {
        return f.params();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

int cmd_moments(Context ctx, const ParamFlags& flags, int m_max, const std::string& route, const std::string& format,
                bool check) {
    const MeixnerParams p = checked_params(flags);
    if (m_max < 0 || m_max > 16) throw UsageError("--mmax must lie in [0, 16]");
    const JacobiParams j = meixner_to_jacobi(p);
    std::vector<std::pair<std::string, MomentTable>> tables;
    if (route == "all" || route == "combinatorial") tables.emplace_back("combinatorial", moments_combinatorial(j, m_max));
    if (route == "all" || route == "tridiagonal") tables.emplace_back("tridiagonal", moments_tridiagonal(j, m_max));
    if (route == "all" || route == "fock") tables.emplace_back("fock", moments_fock(p, m_max));
    if (tables.empty()) throw UsageError("unknown route '" + route + "'");

    double worst = 0.0;
    std::vector<double> deviation(static_cast<std::size_t>(m_max) + 1, 0.0);
    for (int m = 0; m <= m_max; ++m) {
        const double ref = tables.front().second.moments[m];
        for (const auto& [name, t] : tables)
            deviation[m] = std::max(deviation[m], std::abs(t.moments[m] - ref) / std::max(1.0, std::abs(ref)));
        worst = std::max(worst, deviation[m]);
    }

    if (format == "json") {
        nlohmann::json j_out{{"params", {{"a1", p.a1}, {"a2", p.a2}, {"b1", p.b1}, {"b2", p.b2}}},
                             {"max_rel_deviation", worst}};
        for (const auto& [name, t] : tables) j_out["moments"][name] = t.moments;
        ctx.out << j_out.dump(2) << '\n';
    } else {
        ctx.out << "m";
        for (const auto& [name, t] : tables) ctx.out << ',' << name;
        ctx.out << ",max_rel_dev\n";
        for (int m = 0; m <= m_max; ++m) {
            ctx.out << m;
            for (const auto& [name, t] : tables) ctx.out << ',' << fmt(t.moments[m]);
            ctx.out << ',' << fmt(deviation[m]) << '\n';
        }
    }
    if (check && worst > 1e-9) {
        ctx.err << "moments: routes disagree, max relative deviation " << worst << "\n";
        return exit_check_failed;
    }
    return exit_ok;
}

int cmd_density(Context ctx, const ParamFlags& flags, int m_max, const std::vector<double>& xs, int nodes,
                const std::string& format) {
    const MeixnerParams p = checked_params(flags);
    if (!p.is_standard() || p.b2 <= 0.0) throw UsageError("density needs a1 = 0, b1 = 1 and b2 > 0");
    if (m_max < 0 || m_max > 16) throw UsageError("--mmax must lie in [0, 16]");
    if (nodes < 16) throw UsageError("--nodes must be >= 16");
    const DensityMoments dm = density_moments(p, m_max, nodes);
    const MomentTable comb = moments_combinatorial(meixner_to_jacobi(p), m_max);
    const auto [lo, hi] = density_support(p);
    std::vector<double> values;
    for (double x : xs) values.push_back(density_eval(p, x));

    if (format == "json") {
        nlohmann::json j{{"support", {lo, hi}},
                         {"mass", dm.mass},
                         {"has_atoms", dm.has_atoms},
                         {"quadrature", dm.table.moments},
                         {"combinatorial", comb.moments}};
        for (std::size_t i = 0; i < xs.size(); ++i) j["density"].push_back({{"x", xs[i]}, {"value", values[i]}});
        ctx.out << j.dump(2) << '\n';
        return exit_ok;
    }
    ctx.out << "# support [" << fmt(lo) << ", " << fmt(hi) << "], mass " << fmt(dm.mass)
            << (dm.has_atoms ? " (atoms carry the rest)" : "") << '\n';
    for (std::size_t i = 0; i < xs.size(); ++i) ctx.out << "# density(" << fmt(xs[i]) << ") = " << fmt(values[i]) << '\n';
    ctx.out << "m,quadrature,combinatorial,abs_dev\n";
    for (int m = 0; m <= m_max; ++m)
        ctx.out << m << ',' << fmt(dm.table.moments[m]) << ',' << fmt(comb.moments[m]) << ','
                << fmt(std::abs(dm.table.moments[m] - comb.moments[m])) << '\n';
    return exit_ok;
}

int cmd_fock(Context ctx, const ParamFlags& flags, const std::string& word_text, int depth, int state) {
    const MeixnerParams p = checked_params(flags);
    if (state != 1 && state != 2) throw UsageError("--state must be 1 or 2");
    std::vector<OperatorToken> word;
    try {
        word = parse_operator_word(word_text, {"u"});
    } catch (const OperatorParseError& e) {
        throw UsageError(std::string(e.what()) + " (token " + std::to_string(e.position() + 1) + ")");
    }
    if (depth <= 0) depth = depth_for(static_cast<int>(word.size()));
    const FockModel model = FockModel::single(p, depth);
    ctx.out << fmt(model.state_moment(state, word)) << '\n';
    return exit_ok;
}

int cmd_cfree(Context ctx, const ParamFlags& flags, const std::string& word_text, const std::string& degrees_text,
              int draws, std::uint64_t seed, const std::string& centering_name, const std::string& gamma_name,
              double threshold, bool check) {
    const MeixnerParams p = checked_params(flags);
    std::istringstream wl(word_text);
    std::vector<std::string> names;
    std::vector<int> labels;
    for (std::string tok; wl >> tok;) {
        auto it = std::find(names.begin(), names.end(), tok);
        if (it == names.end()) {
            names.push_back(tok);
            it = names.end() - 1;
        }
        labels.push_back(static_cast<int>(it - names.begin()));
    }
    if (labels.empty()) throw UsageError("--word needs at least one label");
    std::vector<int> degrees;
    std::istringstream dl(degrees_text);
    for (int d; dl >> d;) degrees.push_back(d);
    if (!dl.eof()) throw UsageError("--degrees must be a list of integers");
    if (degrees.size() == 1) degrees.assign(labels.size(), degrees.front());
    if (degrees.size() != labels.size()) throw UsageError("--degrees needs one entry or one per label");
    Centering centering;
    if (centering_name == "conditional")
        centering = Centering::conditional;
    else if (centering_name == "psi1")
        centering = Centering::psi1;
    else
        throw UsageError("--centering must be conditional or psi1");
    GammaAction gamma;
    if (gamma_name == "projection")
        gamma = GammaAction::label_projection;
    else if (gamma_name == "level")
        gamma = GammaAction::level_diagonal;
    else
        throw UsageError("--gamma must be projection or level");
    try {
        require_alternating(labels);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    int total = 0;
    for (int d : degrees) total += d;
    const FockModel model(names, depth_for(total), std::vector<MeixnerParams>(names.size(), p), gamma);
    const KernelReport report = kernel_property_test(model, labels, degrees, seed, draws, centering);
    const bool pass = report.max_abs <= threshold;
    nlohmann::json j{{"word", word_text},       {"degrees", degrees},     {"draws", report.draws},
                     {"max_abs", report.max_abs}, {"threshold", threshold}, {"pass", pass},
                     {"centering", centering_name}};
    ctx.out << j.dump(2) << '\n';
    return check && !pass ? exit_check_failed : exit_ok;
}

int cmd_partitions(Context ctx, int m, bool pairs_only, bool count_only) {
    long long count = 0;
    const PartitionVisitor visit = [&](const NCPartition& p) {
        ++count;
        if (!count_only) ctx.out << p.to_string() << '\n';
    };
    try {
        pairs_only ? enumerate_nc2(m, visit) : enumerate_nc12(m, visit);
    } catch (const std::out_of_range& e) {
        throw UsageError(e.what());
    }
    if (count_only) ctx.out << count << '\n';
    return exit_ok;
}

void write_manifest(const std::filesystem::path& path, const RunConfig& config, const std::string& command,
                    unsigned threads, const std::string& results_file) {
    nlohmann::json m{{"tool", "meixner"},
                     {"version", kToolVersion},
                     {"command", command},
                     {"threads", threads},
                     {"results", results_file},
                     {"config", to_json(config)}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << m.dump(2) << '\n';
}

int execute_run(Context ctx, const RunConfig& config, const std::string& command, const std::string& out_dir,
                const std::string& format, bool check, unsigned threads) {
    if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
    const ExperimentResult result = run_experiment(config, {threads}, ctx.err);

    auto emit = [&](std::ostream& os) {
        if (format == "json")
            os << rows_to_json(result.rows).dump(2) << '\n';
        else
            write_rows_csv(os, result.rows);
    };
    const std::string results_name = std::string("results.") + format;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream os(std::filesystem::path(out_dir) / results_name);
        if (!os) throw std::runtime_error("cannot write results to " + out_dir);
        emit(os);
        write_manifest(std::filesystem::path(out_dir) / "manifest.json", config, command, threads, results_name);
        ctx.err << "wrote " << (std::filesystem::path(out_dir) / results_name).string() << " and manifest.json\n";
    } else if (!config.output.empty()) {
        std::ofstream os(config.output);
        if (!os) throw std::runtime_error("cannot write results to " + config.output);
        emit(os);
        write_manifest(config.output + ".manifest.json", config, command, threads, config.output);
        ctx.err << "wrote " << config.output << '\n';
    } else {
        emit(ctx.out);
    }

    if (!check) return exit_ok;
    int failures = 0;
    for (const auto& r : result.rows)
        if (!r.pass) {
            ++failures;
            ctx.err << "check failed: " << r.item << " state " << r.state << " m " << r.id << ": |" << r.estimate
                    << " - " << r.oracle << "| = " << r.abs_error << " > " << r.tolerance << '\n';
        }
    for (const auto& f : result.failed_checks) {
        ++failures;
        ctx.err << "check failed: " << f << '\n';
    }
    ctx.err << (failures ? "FAIL" : "PASS") << ": " << failures << " failed check(s)\n";
    return failures ? exit_check_failed : exit_ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Free Meixner laws: moments, densities, Fock model, block random matrices"};
    app.require_subcommand(1);
    Context ctx{out, err};
    int code = exit_ok;

    ParamFlags moment_flags, density_flags, fock_flags, cfree_flags;
    int mmax = 8, depth = 0, state = 1, draws = 200, nodes = 4096, part_m = 6;
    std::string route = "all", format = "csv", word, degrees = "3", centering = "conditional", gamma = "projection";
    std::string config_path, manifest_path, out_dir;
    std::uint64_t seed = 1;
    double threshold = 1e-9;
    std::vector<double> xs;
    bool check = false, pairs_only = false, count_only = false;
    unsigned threads = 0;
    std::optional<int> n_override, trials_override, mmax_override;
    std::optional<double> rho_override;
    std::optional<std::uint64_t> seed_override;

    auto* moments = app.add_subcommand("moments", "moment table by the combinatorial, tridiagonal and Fock routes");
    moment_flags.add(moments);
    moments->add_option("--mmax", mmax, "largest moment order (<= 16)")->capture_default_str();
    moments->add_option("--route", route, "all, combinatorial, tridiagonal or fock")->capture_default_str();
    moments->add_option("--format", format, "csv or json")->capture_default_str();
    moments->add_flag("--check", check, "exit 3 when the routes disagree by more than 1e-9");

    auto* density = app.add_subcommand("density", "density, mass and quadrature moments (a1 = 0, b1 = 1)");
    density_flags.add(density);
    density->add_option("--mmax", mmax, "largest moment order")->capture_default_str();
    density->add_option("--x", xs, "points at which to evaluate the density");
    density->add_option("--nodes", nodes, "quadrature nodes")->capture_default_str();
    density->add_option("--format", format, "csv or json")->capture_default_str();

    auto* fock = app.add_subcommand("fock", "vacuum expectation of an operator word, e.g. \"p1* w2 g p1\"");
    fock_flags.add(fock);
    fock->add_option("--word", word, "space-separated tokens p1 p1* p2 p2* w1 w2 w g y")->required();
    fock->add_option("--depth", depth, "truncation depth (default: exact for the word length)");
    fock->add_option("--state", state, "vacuum 1 or 2")->capture_default_str();

    auto* cfree = app.add_subcommand("cfree", "kernel test of conditional freeness in the Fock model");
    cfree_flags.add(cfree);
    cfree->add_option("--word", word, "alternating labels, e.g. \"s u s\"")->required();
    cfree->add_option("--degrees", degrees, "polynomial degree per label, or one for all")->capture_default_str();
    cfree->add_option("--draws", draws, "random coefficient draws")->capture_default_str();
    cfree->add_option("--seed", seed, "coefficient seed")->capture_default_str();
    cfree->add_option("--centering", centering, "conditional or psi1")->capture_default_str();
    cfree->add_option("--gamma", gamma, "shift operator: projection or level")->capture_default_str();
    cfree->add_option("--threshold", threshold, "pass when max_abs <= threshold")->capture_default_str();
    cfree->add_flag("--check", check, "exit 3 when the report does not pass");

    auto* rmt = app.add_subcommand("rmt", "block random matrix experiment from a config file");
    rmt->add_option("--config", config_path, "key = value experiment file")->required()->check(CLI::ExistingFile);
    rmt->add_option("--n", n_override, "override n");
    rmt->add_option("--rho", rho_override, "override rho (n1 = floor(n^rho))");
    rmt->add_option("--trials", trials_override, "override trials");
    rmt->add_option("--seed", seed_override, "override seed");
    rmt->add_option("--mmax", mmax_override, "override m_max");
    rmt->add_option("--out", out_dir, "write results and manifest.json to this directory");
    rmt->add_option("--format", format, "csv or json")->capture_default_str();
    rmt->add_option("--threads", threads, "worker threads (0: all cores)")->capture_default_str();
    rmt->add_flag("--check", check, "exit 3 when an estimate leaves its tolerance band");

    auto* replay = app.add_subcommand("replay", "rerun an rmt experiment from its manifest.json");
    replay->add_option("--manifest", manifest_path, "manifest written by rmt --out")->required()->check(CLI::ExistingFile);
    replay->add_option("--out", out_dir, "write results and a new manifest to this directory");
    replay->add_option("--format", format, "csv or json")->capture_default_str();
    replay->add_option("--threads", threads, "worker threads (0: all cores)")->capture_default_str();
    replay->add_flag("--check", check, "exit 3 when an estimate leaves its tolerance band");

    auto* partitions = app.add_subcommand("partitions", "list NC^{1,2}(m) (or NC^2(m)) with block depths");
    partitions->add_option("--m", part_m, "number of points")->capture_default_str();
    partitions->add_flag("--pairs-only", pairs_only, "pair partitions only");
    partitions->add_flag("--count", count_only, "print the count only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? exit_ok : exit_config_error;
    }

    try {
        if (*moments) {
            code = cmd_moments(ctx, moment_flags, mmax, route, format, check);
        } else if (*density) {
            code = cmd_density(ctx, density_flags, mmax, xs, nodes, format);
        } else if (*fock) {
            code = cmd_fock(ctx, fock_flags, word, depth, state);
        } else if (*cfree) {
            code = cmd_cfree(ctx, cfree_flags, word, degrees, draws, seed, centering, gamma, threshold, check);
        } else if (*rmt) {
            RunConfig config = load_run_config(config_path);
            if (n_override) config.n = *n_override;
            if (rho_override) config.rho = *rho_override;
            if (trials_override) config.trials = *trials_override;
            if (seed_override) config.seed = *seed_override;
            if (mmax_override) config.m_max = *mmax_override;
            config.validate();
            code = execute_run(ctx, config, "rmt", out_dir, format, check, threads);
        } else if (*replay) {
            std::ifstream in(manifest_path);
            nlohmann::json manifest;
            try {
                manifest = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(manifest_path + ": " + e.what());
            }
            if (!manifest.contains("config")) throw ConfigError(manifest_path + ": missing 'config'");
            RunConfig config = run_config_from_json(manifest.at("config"));
            if (out_dir.empty()) config.output.clear();
            code = execute_run(ctx, config, "replay", out_dir, format, check, threads);
        } else if (*partitions) {
            code = cmd_partitions(ctx, part_m, pairs_only, count_only);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "computation error: " << e.what() << '\n';
        return exit_computation_error;
    }
    return code;
}

}  // namespace meixner::cli
