#include "meixner/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace meixner::cli {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

template <class T>
T parse_number(const std::string& text, const std::string& key, int line) {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ConfigError("'" + key + "': not a valid number: '" + text + "'", line);
    return value;
}

std::vector<std::string> split_ws(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

MatrixLabel& label_slot(RunConfig& c, const std::string& name) {
    for (auto& l : c.labels)
        if (l.name == name) return l;
    c.labels.push_back(MatrixLabel{});
    c.labels.back().name = name;
    return c.labels.back();
}

}  // namespace

Word parse_word(const std::string& text) {
    Word word;
    for (const auto& tok : split_ws(text)) {
        WordFactor f;
        const auto caret = tok.find('^');
        f.label = tok.substr(0, caret);
        if (f.label.empty()) throw ConfigError("empty label in word '" + text + "'");
        if (caret != std::string::npos) {
            const std::string p = tok.substr(caret + 1);
            auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), f.power);
            if (ec != std::errc() || ptr != p.data() + p.size() || f.power < 1 || f.power > 6)
                throw ConfigError("bad power in '" + tok + "' (expected 1..6)");
        }
        word.push_back(f);
    }
    if (word.empty()) throw ConfigError("empty word");
    return word;
}

std::string to_string(const Word& word) {
    std::string out;
    for (const auto& f : word) {
        if (!out.empty()) out += ' ';
        out += f.label;
        if (f.power != 1) out += '^' + std::to_string(f.power);
    }
    return out;
}

void RunConfig::validate() const {
    try {
        geometry();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (m_max < 0 || m_max > 8) throw ConfigError("m_max must lie in [0, 8]");
    if (!tau1 && !tau2) throw ConfigError("states must name at least one partial trace");
    if (labels.empty()) throw ConfigError("at least one label.<name>.<field> entry is required");
    for (const auto& l : labels) {
        try {
            l.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("label '" + l.name + "': " + e.what());
        }
    }
    std::set<std::string> names;
    for (const auto& l : labels) names.insert(l.name);
    auto check_word = [&](const Word& w, bool alternating) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!names.count(w[i].label)) throw ConfigError("word '" + to_string(w) + "' uses unknown label '" + w[i].label + "'");
            if (alternating && i > 0 && w[i].label == w[i - 1].label)
                throw ConfigError("cfree word '" + to_string(w) + "' has equal adjacent labels");
        }
    };
    for (const auto& w : words) check_word(w, false);
    for (const auto& w : cfree) check_word(w, true);
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        if (sweep[i] < 4) throw ConfigError("sweep sizes must be >= 4");
        if (i > 0 && sweep[i] <= sweep[i - 1]) throw ConfigError("sweep sizes must increase");
    }
    if (!sweep.empty() && (sweep_m < 0 || sweep_m > 8)) throw ConfigError("sweep_m must lie in [0, 8]");
}

EnsembleSpec RunConfig::ensemble() const { return {geometry(), labels, trials, seed}; }

RunConfig parse_run_config(std::istream& in) {
    RunConfig c;
    std::set<std::string> seen;
    std::string raw;
    for (int line = 1; std::getline(in, raw); ++line) {
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key", line);
        if (value.empty()) throw ConfigError("'" + key + "': missing value", line);
        const bool repeatable = key == "word" || key == "cfree";
        if (!repeatable && !seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line);

        try {
            if (key == "n") {
                c.n = parse_number<int>(value, key, line);
            } else if (key == "rho") {
                c.rho = parse_number<double>(value, key, line);
            } else if (key == "trials") {
                c.trials = parse_number<int>(value, key, line);
            } else if (key == "seed") {
                c.seed = parse_number<std::uint64_t>(value, key, line);
            } else if (key == "m_max") {
                c.m_max = parse_number<int>(value, key, line);
            } else if (key == "states") {
                if (value != "1" && value != "2" && value != "12") throw ConfigError("states must be 1, 2 or 12", line);
                c.tau1 = value.find('1') != std::string::npos;
                c.tau2 = value.find('2') != std::string::npos;
            } else if (key == "tau2_oracle") {
                if (value == "psi2")
                    c.tau2_oracle = Tau2Oracle::psi2;
                else if (value == "level")
                    c.tau2_oracle = Tau2Oracle::level;
                else
                    throw ConfigError("tau2_oracle must be psi2 or level", line);
            } else if (key == "word") {
                c.words.push_back(parse_word(value));
            } else if (key == "cfree") {
                c.cfree.push_back(parse_word(value));
            } else if (key == "sweep") {
                c.sweep.clear();
                for (const auto& tok : split_ws(value)) c.sweep.push_back(parse_number<int>(tok, key, line));
            } else if (key == "sweep_m") {
                c.sweep_m = parse_number<int>(value, key, line);
            } else if (key == "output") {
                c.output = value;
            } else if (key.rfind("label.", 0) == 0) {
                const auto dot = key.rfind('.');
                const std::string name = key.substr(6, dot > 6 ? dot - 6 : 0);
                const std::string field = key.substr(dot + 1);
                if (name.empty() || dot <= 6) throw ConfigError("expected label.<name>.<field>", line);
                MatrixLabel& l = label_slot(c, name);
                const double v = parse_number<double>(value, key, line);
                if (field == "a1")
                    l.a1 = v;
                else if (field == "a2")
                    l.a2 = v;
                else if (field == "v11")
                    l.v11 = v;
                else if (field == "v12" || field == "v21")
                    l.v12 = v;
                else if (field == "v22")
                    l.v22 = v;
                else
                    throw ConfigError("unknown label field '" + field + "'", line);
            } else {
                throw ConfigError("unknown key '" + key + "'", line);
            }
        } catch (const ConfigError& e) {
            if (e.line() > 0) throw;
            throw ConfigError(e.what(), line);
        }
    }
    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return parse_run_config(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& l : c.labels)
        labels.push_back({{"name", l.name}, {"a1", l.a1}, {"a2", l.a2}, {"v11", l.v11}, {"v12", l.v12}, {"v22", l.v22}});
    nlohmann::json words = nlohmann::json::array(), cfree = nlohmann::json::array();
    for (const auto& w : c.words) words.push_back(to_string(w));
    for (const auto& w : c.cfree) cfree.push_back(to_string(w));
    return {{"n", c.n},
            {"rho", c.rho},
            {"trials", c.trials},
            {"seed", c.seed},
            {"m_max", c.m_max},
            {"states", std::string(c.tau1 ? "1" : "") + (c.tau2 ? "2" : "")},
            {"tau2_oracle", c.tau2_oracle == Tau2Oracle::psi2 ? "psi2" : "level"},
            {"labels", labels},
            {"words", words},
            {"cfree", cfree},
            {"sweep", c.sweep},
            {"sweep_m", c.sweep_m},
            {"output", c.output}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig c;
    try {
        c.n = j.at("n").get<int>();
        c.rho = j.at("rho").get<double>();
        c.trials = j.at("trials").get<int>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.m_max = j.at("m_max").get<int>();
        const auto states = j.at("states").get<std::string>();
        c.tau1 = states.find('1') != std::string::npos;
        c.tau2 = states.find('2') != std::string::npos;
        const auto oracle = j.at("tau2_oracle").get<std::string>();
        if (oracle != "psi2" && oracle != "level") throw ConfigError("tau2_oracle must be psi2 or level");
        c.tau2_oracle = oracle == "psi2" ? Tau2Oracle::psi2 : Tau2Oracle::level;
        for (const auto& l : j.at("labels"))
            c.labels.push_back({l.at("name").get<std::string>(), l.at("v11").get<double>(), l.at("v12").get<double>(),
                                l.at("v22").get<double>(), l.at("a1").get<double>(), l.at("a2").get<double>()});
        for (const auto& w : j.at("words")) c.words.push_back(parse_word(w.get<std::string>()));
        for (const auto& w : j.at("cfree")) c.cfree.push_back(parse_word(w.get<std::string>()));
        c.sweep = j.at("sweep").get<std::vector<int>>();
        c.sweep_m = j.at("sweep_m").get<int>();
        c.output = j.value("output", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace meixner::cli
