#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "meixner/cli/commands.hpp"
#include "meixner/cli/config.hpp"

using namespace meixner;
using namespace meixner::cli;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "meixner");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_run_config(in);
}

int error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("meixner_test_cli_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kSmallConfig = R"(# small experiment
n = 24
rho = 0.5
trials = 6
seed = 3
m_max = 3
label.s.v12 = 1
label.s.v22 = 2
label.u.a1 = 0.5
label.u.a2 = -0.5
word = s u^2 s
cfree = s u s
sweep = 8 16
sweep_m = 2
)";

}  // namespace

TEST_CASE("config parsing") {
    const RunConfig c = parse(kSmallConfig);
    CHECK(c.n == 24);
    CHECK(c.trials == 6);
    CHECK(c.seed == 3);
    REQUIRE(c.labels.size() == 2);
    CHECK(c.labels[0].name == "s");
    CHECK(c.labels[0].v22 == 2.0);
    CHECK(c.labels[1].a1 == 0.5);
    CHECK(c.labels[1].v12 == 1.0);  // default
    REQUIRE(c.words.size() == 1);
    CHECK(to_string(c.words[0]) == "s u^2 s");
    CHECK(c.words[0][1].power == 2);
    CHECK(c.sweep == std::vector<int>{8, 16});
    CHECK(c.geometry().n1 == 4);
    CHECK(c.tau1);
    CHECK(c.tau2);
}

TEST_CASE("config errors carry line numbers") {
    CHECK(error_line("n = 64\nrho = abc\n") == 2);
    CHECK(error_line("n = 64\n\n# c\nbogus = 1\n") == 4);
    CHECK(error_line("n = 64\nn = 65\n") == 2);
    CHECK(error_line("label.u.v33 = 1\n") == 1);
    CHECK(error_line("just text\n") == 1);
    CHECK(error_line("states = 3\n") == 1);
    CHECK(error_line("label.u.v12 = 1\nword = s^9\n") == 2);
    // Whole-config problems have no line.
    CHECK(error_line("n = 64\n") == 0);                         // no labels
    CHECK(error_line("label.u.v12 = 1\nword = u v\n") == 0);    // unknown label
    CHECK(error_line("label.u.v12 = 1\nlabel.s.v12 = 1\ncfree = u u s\n") == 0);
    CHECK(error_line("label.u.v12 = 1\nsweep = 64 32\n") == 0);
    CHECK(error_line("label.u.v12 = 1\nm_max = 9\n") == 0);
}

TEST_CASE("words") {
    const Word w = parse_word("s  u^3 s");
    REQUIRE(w.size() == 3);
    CHECK(w[1].label == "u");
    CHECK(w[1].power == 3);
    CHECK(to_string(w) == "s u^3 s");
    CHECK_THROWS_AS(parse_word(""), ConfigError);
    CHECK_THROWS_AS(parse_word("u^0"), ConfigError);
    CHECK_THROWS_AS(parse_word("^2"), ConfigError);
}

TEST_CASE("manifest json round trip") {
    const RunConfig c = parse(kSmallConfig);
    const RunConfig back = run_config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    nlohmann::json broken = to_json(c);
    broken.erase("labels");
    CHECK_THROWS_AS(run_config_from_json(broken), ConfigError);
}

TEST_CASE("bundled configs parse") {
    for (const char* name : {"block_moments.conf", "witness.conf", "finite_size.conf"})
        CHECK_NOTHROW(load_run_config(std::string(MEIXNER_CONFIG_DIR) + "/" + name));
    CHECK_THROWS_AS(load_run_config("/nonexistent/file.conf"), ConfigError);
}

TEST_CASE("moments subcommand") {
    const Invocation r = invoke({"moments", "--a1", "0.5", "--a2", "-1", "--b1", "2", "--b2", "0.5", "--mmax", "6", "--check"});
    CHECK(r.code == exit_ok);
    CHECK(r.out.rfind("m,combinatorial,tridiagonal,fock,max_rel_dev\n", 0) == 0);
    std::istringstream lines(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 8);

    const Invocation j = invoke({"moments", "--mmax", "4", "--format", "json"});
    const auto parsed = nlohmann::json::parse(j.out);
    CHECK(parsed["moments"]["combinatorial"][4].get<double>() == 2.0);

    CHECK(invoke({"moments", "--b1", "-1"}).code == exit_config_error);
    CHECK(invoke({"moments", "--route", "magic"}).code == exit_config_error);
    CHECK(invoke({"moments", "--nope"}).code == exit_config_error);
    CHECK(invoke({}).code == exit_config_error);
    CHECK(invoke({"--help"}).code == exit_ok);
}

TEST_CASE("density subcommand") {
    const Invocation r = invoke({"density", "--format", "json", "--x", "0", "--mmax", "4"});
    REQUIRE(r.code == exit_ok);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["density"][0]["value"].get<double>() == doctest::Approx(0.3183098861837907).epsilon(1e-12));
    CHECK(j["mass"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(invoke({"density", "--a1", "1"}).code == exit_config_error);
    // Part of the mass sits in atoms outside the support.
    const Invocation atoms = invoke({"density", "--format", "json", "--a2", "2", "--b2", "0.2"});
    REQUIRE(atoms.code == exit_ok);
    CHECK(nlohmann::json::parse(atoms.out)["has_atoms"].get<bool>());
}

TEST_CASE("fock subcommand") {
    const Invocation r = invoke({"fock", "--word", "p1* p2* p2* p2 p2 p2* p2 p1", "--b1", "2", "--b2", "3"});
    CHECK(r.code == exit_ok);
    CHECK(std::stod(r.out) == doctest::Approx(54.0).epsilon(1e-13));
    const Invocation bad = invoke({"fock", "--word", "p1* q2"});
    CHECK(bad.code == exit_config_error);
    CHECK(bad.err.find("token 2") != std::string::npos);
    CHECK(invoke({"fock", "--word", "w w w w", "--depth", "2"}).code == exit_computation_error);
}

TEST_CASE("cfree subcommand") {
    const Invocation r = invoke({"cfree", "--word", "s u s", "--a1", "0.5", "--a2", "-0.5", "--b2", "2", "--draws", "50"});
    REQUIRE(r.code == exit_ok);
    const auto j = nlohmann::json::parse(r.out);
    for (const char* key : {"word", "degrees", "draws", "max_abs", "threshold", "pass"}) CHECK(j.contains(key));
    CHECK(j["pass"].get<bool>());
    CHECK(j["draws"].get<int>() == 50);
    CHECK(j["degrees"].size() == 3);

    const Invocation wrong =
        invoke({"cfree", "--word", "s u s", "--b2", "2", "--degrees", "1 2 1", "--centering", "psi1", "--check"});
    CHECK(wrong.code == exit_check_failed);
    CHECK(invoke({"cfree", "--word", "s s u"}).code == exit_config_error);
    CHECK(invoke({"cfree", "--word", "s u", "--degrees", "1 2 3"}).code == exit_config_error);
}

TEST_CASE("partitions subcommand") {
    CHECK(invoke({"partitions", "--m", "12", "--count"}).out == "15511\n");
    CHECK(invoke({"partitions", "--m", "10", "--pairs-only", "--count"}).out == "42\n");
    CHECK(invoke({"partitions", "--m", "3"}).out == "{1}{2}{3} | d=1,1,1\n{1}{2,3} | d=1,1\n{1,2}{3} | d=1,1\n{1,3}{2} | d=1,2\n");
    CHECK(invoke({"partitions", "--m", "40"}).code == exit_config_error);
}

TEST_CASE("rmt run, manifest and replay") {
    const auto dir = scratch_dir("rmt");
    {
        std::ofstream(dir / "small.conf") << kSmallConfig;
    }
    const Invocation r = invoke({"rmt", "--config", (dir / "small.conf").string(), "--out", (dir / "a").string()});
    REQUIRE(r.code == exit_ok);
    const std::string results = slurp(dir / "a" / "results.csv");
    CHECK(results.rfind("item,state,m,n,estimate,stderr,oracle,abs_error\n", 0) == 0);
    // 2 labels x 2 states x 3 moments + 1 word + 2 cfree rows + 2 labels x 2 sweep sizes.
    std::istringstream lines(results);
    std::string line;
    int rows = -1;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 12 + 1 + 2 + 4);
    CHECK(results.find("cfree[conditional] s u s,1,c1,24,") != std::string::npos);
    CHECK(results.find("sweep u,1,2,16,") != std::string::npos);

    const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest["command"] == "rmt");
    CHECK(manifest["config"]["seed"] == 3);

    // Replay reproduces the table bit for bit, whatever the thread count.
    const Invocation again = invoke({"replay", "--manifest", (dir / "a" / "manifest.json").string(), "--threads", "3"});
    REQUIRE(again.code == exit_ok);
    CHECK(again.out == results);

    // Overrides and formats.
    const Invocation json = invoke({"rmt", "--config", (dir / "small.conf").string(), "--seed", "4", "--format", "json"});
    REQUIRE(json.code == exit_ok);
    const auto rows_json = nlohmann::json::parse(json.out);
    CHECK(rows_json.size() == 19);
    CHECK(rows_json[0].contains("pass"));
    CHECK(json.out.find("\"stderr\"") != std::string::npos);

    // At n = 24 the O(n1/n) bias makes some tolerance bands fail under --check.
    const Invocation check = invoke({"rmt", "--config", (dir / "small.conf").string(), "--check"});
    CHECK((check.code == exit_ok || check.code == exit_check_failed));
    CHECK(check.err.find(check.code == exit_ok ? "PASS" : "FAIL") != std::string::npos);

    {
        std::ofstream(dir / "bad.conf") << "n = 24\nfoo = 1\n";
    }
    const Invocation bad = invoke({"rmt", "--config", (dir / "bad.conf").string()});
    CHECK(bad.code == exit_config_error);
    CHECK(bad.err.find("line 2") != std::string::npos);
    CHECK(invoke({"rmt", "--config", (dir / "missing.conf").string()}).code == exit_config_error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("the installed tool reports exit codes") {
    const std::string tool = MEIXNER_TOOL_PATH;
    const auto dir = scratch_dir("tool");
    const std::string out = (dir / "out.txt").string();
    CHECK(std::system((tool + " partitions --m 4 --count > " + out).c_str()) == 0);
    CHECK(slurp(out) == "9\n");
    const int status = std::system((tool + " moments --b2 -2 2> " + out).c_str());
    CHECK(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == exit_config_error);
    std::filesystem::remove_all(dir);
}
