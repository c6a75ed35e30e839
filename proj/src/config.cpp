#include "superexp/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "superexp/error.hpp"

namespace superexp {
namespace {

struct Entry {
    std::string value;
    std::size_t line = 0;
    std::size_t key_column = 0;
    std::size_t value_column = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"potential", {"family", "alpha", "beta", "k", "phi", "gamma"}},
        {"grid", {"mode", "pad", "points_per_wavelength", "q_min", "q_max", "n_points"}},
        {"solve", {"states", "rtol", "cluster_tol", "max_inverse_iterations", "threads"}},
        {"analysis",
         {"spacings", "turning_points", "fit", "fit_n_lo", "fit_n_hi", "degeneracy_window", "degeneracy_factor",
          "state_metrics", "min_localization", "one_sided_asymmetry"}},
        {"output", {"directory", "wavefunctions"}},
        {"sweep", {"parameter", "from", "to", "points", "workers"}},
    };
    return keys;
}

bool is_key_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'; }

class Reader {
public:
    explicit Reader(std::map<std::string, Section>& sections) : sections_(sections) {}

    const Entry* find(const std::string& section, const std::string& key) {
        auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        auto e = s->second.find(key);
        if (e == s->second.end()) return nullptr;
        return &e->second;
    }

    [[noreturn]] static void fail(const Entry& e, const std::string& section, const std::string& key,
                                  const std::string& why) {
        throw ConfigError("[" + section + "] " + key + ": " + why, e.line, e.value_column);
    }

    void real(const std::string& section, const std::string& key, double& out) {
        const Entry* e = find(section, key);
        if (!e) return;
        const char* first = e->value.data();
        const char* last = first + e->value.size();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) fail(*e, section, key, "expected a number, got '" + e->value + "'");
        if (!std::isfinite(v)) fail(*e, section, key, "value must be finite");
        out = v;
    }

    template <typename Int>
    void integer(const std::string& section, const std::string& key, Int& out) {
        const Entry* e = find(section, key);
        if (!e) return;
        const char* first = e->value.data();
        const char* last = first + e->value.size();
        Int v{};
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
            fail(*e, section, key, "expected a non-negative integer, got '" + e->value + "'");
        }
        out = v;
    }

    void boolean(const std::string& section, const std::string& key, bool& out) {
        const Entry* e = find(section, key);
        if (!e) return;
        if (e->value == "true") {
            out = true;
        } else if (e->value == "false") {
            out = false;
        } else {
            fail(*e, section, key, "expected true or false, got '" + e->value + "'");
        }
    }

    void text(const std::string& section, const std::string& key, std::string& out) {
        if (const Entry* e = find(section, key)) out = e->value;
    }

private:
    std::map<std::string, Section>& sections_;
};

std::string_view trim(std::string_view s, std::size_t& offset) {
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    std::size_t e = s.size();
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    offset += b;
    return s.substr(b, e - b);
}

std::map<std::string, Section> tokenize(std::string_view text) {
    std::map<std::string, Section> sections;
    std::string current;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        // Strip comments outside quotes.
        bool quoted = false;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == '"') quoted = !quoted;
            if (!quoted && (raw[i] == '#' || raw[i] == ';')) {
                raw = raw.substr(0, i);
                break;
            }
        }
        std::size_t col = 1;
        const std::string_view line = trim(raw, col);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("section header is missing ']'", line_no, col + line.size());
            std::size_t name_col = col + 1;
            const std::string name(trim(line.substr(1, line.size() - 2), name_col));
            if (!known_keys().contains(name)) throw ConfigError("unknown section [" + name + "]", line_no, name_col);
            if (sections.contains(name)) throw ConfigError("duplicate section [" + name + "]", line_no, name_col);
            sections[name];
            current = name;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no, col);
        std::size_t key_col = col;
        const std::string key(trim(line.substr(0, eq), key_col));
        if (key.empty()) throw ConfigError("missing key before '='", line_no, col);
        for (std::size_t i = 0; i < key.size(); ++i) {
            if (!is_key_char(key[i])) {
                throw ConfigError("keys are lower_snake_case; unexpected '" + std::string(1, key[i]) + "'", line_no,
                                  key_col + i);
            }
        }
        if (current.empty()) throw ConfigError("key '" + key + "' appears before any section", line_no, key_col);
        if (!known_keys().at(current).contains(key)) {
            throw ConfigError("unknown key '" + key + "' in [" + current + "]", line_no, key_col);
        }
        std::size_t value_col = col + eq + 1;
        std::string value(trim(line.substr(eq + 1), value_col));
        if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no, value_col);
        if (value.front() == '"') {
            if (value.size() < 2 || value.back() != '"') {
                throw ConfigError("unterminated string", line_no, value_col);
            }
            value = value.substr(1, value.size() - 2);
            if (value.find('"') != std::string::npos) throw ConfigError("stray quote in string", line_no, value_col);
        }
        Section& sec = sections[current];
        if (sec.contains(key)) throw ConfigError("duplicate key '" + key + "'", line_no, key_col);
        sec[key] = Entry{value, line_no, key_col, value_col};
    }
    return sections;
}

std::size_t line_of(std::map<std::string, Section>& sections, const std::string& section, const std::string& key) {
    auto s = sections.find(section);
    if (s == sections.end()) return 0;
    auto e = s->second.find(key);
    return e == s->second.end() ? 0 : e->second.line;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

RunConfig parse_config(std::string_view text) {
    auto sections = tokenize(text);
    Reader r(sections);
    RunConfig c;

    const Entry* fam = r.find("potential", "family");
    if (!fam) throw ConfigError("[potential] family is required");
    const auto family = parse_family(fam->value);
    if (!family) Reader::fail(*fam, "potential", "family", "unknown family '" + fam->value + "'");
    c.potential.family = *family;
    r.real("potential", "alpha", c.potential.alpha);
    r.real("potential", "beta", c.potential.beta);
    r.real("potential", "k", c.potential.k);
    r.real("potential", "phi", c.potential.phi);
    r.real("potential", "gamma", c.potential.gamma);
    try {
        validate(c.potential);
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        std::size_t line = 0;
        for (const char* key : {"alpha", "beta", "k", "phi", "gamma"}) {
            if (msg.find(key) != std::string::npos && line == 0) line = line_of(sections, "potential", key);
        }
        throw ConfigError("[potential] " + msg, line, line ? 1 : 0);
    }

    if (const Entry* mode = r.find("grid", "mode")) {
        if (mode->value == "auto") {
            c.grid.explicit_grid = false;
        } else if (mode->value == "explicit") {
            c.grid.explicit_grid = true;
        } else {
            Reader::fail(*mode, "grid", "mode", "expected auto or explicit");
        }
    }
    r.real("grid", "pad", c.grid.pad);
    r.real("grid", "points_per_wavelength", c.grid.points_per_wavelength);
    r.real("grid", "q_min", c.grid.q_min);
    r.real("grid", "q_max", c.grid.q_max);
    r.integer("grid", "n_points", c.grid.n_points);

    r.integer("solve", "states", c.solve.states);
    r.real("solve", "rtol", c.solve.rtol);
    r.real("solve", "cluster_tol", c.solve.cluster_tol);
    r.integer("solve", "max_inverse_iterations", c.solve.max_inverse_iterations);
    r.integer("solve", "threads", c.solve.threads);

    r.boolean("analysis", "spacings", c.analysis.spacings);
    r.boolean("analysis", "turning_points", c.analysis.turning_points);
    r.boolean("analysis", "fit", c.analysis.fit);
    r.integer("analysis", "fit_n_lo", c.analysis.fit_n_lo);
    r.integer("analysis", "fit_n_hi", c.analysis.fit_n_hi);
    r.integer("analysis", "degeneracy_window", c.analysis.degeneracy_window);
    r.real("analysis", "degeneracy_factor", c.analysis.degeneracy_factor);
    r.boolean("analysis", "state_metrics", c.analysis.state_metrics);
    r.real("analysis", "min_localization", c.analysis.min_localization);
    r.real("analysis", "one_sided_asymmetry", c.analysis.one_sided_asymmetry);

    r.text("output", "directory", c.output.directory);
    r.boolean("output", "wavefunctions", c.output.wavefunctions);

    if (sections.contains("sweep")) {
        SweepConfig s;
        r.text("sweep", "parameter", s.parameter);
        r.real("sweep", "from", s.from);
        r.real("sweep", "to", s.to);
        r.integer("sweep", "points", s.points);
        r.integer("sweep", "workers", s.workers);
        c.sweep = s;
    }

    auto check = [&](bool ok, const std::string& section, const std::string& key, const std::string& why) {
        if (ok) return;
        const std::size_t line = line_of(sections, section, key);
        throw ConfigError("[" + section + "] " + key + ": " + why, line, line ? 1 : 0);
    };
    check(c.grid.pad >= 1.0, "grid", "pad", "must be >= 1");
    check(c.grid.points_per_wavelength > 0.0, "grid", "points_per_wavelength", "must be positive");
    if (c.grid.explicit_grid) {
        check(c.grid.q_max > c.grid.q_min, "grid", "q_max", "must exceed q_min");
        check(c.grid.n_points >= 9, "grid", "n_points", "must be at least 9");
    }
    check(c.solve.states >= 1, "solve", "states", "must be at least 1");
    check(c.solve.rtol > 0.0, "solve", "rtol", "must be positive");
    check(c.solve.cluster_tol > 0.0, "solve", "cluster_tol", "must be positive");
    check(c.solve.max_inverse_iterations >= 1, "solve", "max_inverse_iterations", "must be at least 1");
    check(c.analysis.fit_n_lo >= 1, "analysis", "fit_n_lo", "must be at least 1");
    check(c.analysis.fit_n_hi == 0 || c.analysis.fit_n_hi >= c.analysis.fit_n_lo + 10, "analysis", "fit_n_hi",
          "must be 0 or at least fit_n_lo + 10");
    check(c.analysis.degeneracy_window >= 5 && c.analysis.degeneracy_window % 2 == 1, "analysis",
          "degeneracy_window", "must be odd and at least 5");
    check(c.analysis.degeneracy_factor > 0.0 && c.analysis.degeneracy_factor < 1.0, "analysis",
          "degeneracy_factor", "must lie in (0, 1)");
    check(c.analysis.min_localization > 0.0 && c.analysis.min_localization <= 1.0, "analysis", "min_localization",
          "must lie in (0, 1]");
    check(c.analysis.one_sided_asymmetry > 0.0 && c.analysis.one_sided_asymmetry <= 1.0, "analysis",
          "one_sided_asymmetry", "must lie in (0, 1]");
    check(!c.output.directory.empty(), "output", "directory", "must not be empty");
    if (c.sweep) {
        static const std::set<std::string> params = {"alpha", "beta", "k", "phi", "gamma"};
        check(params.contains(c.sweep->parameter), "sweep", "parameter", "expected alpha, beta, k, phi or gamma");
        check(c.sweep->points >= 1, "sweep", "points", "must be at least 1");
        check(c.sweep->points == 1 || c.sweep->to != c.sweep->from, "sweep", "to", "must differ from 'from'");
    }

    return c;
}

std::string emit_config(const RunConfig& c) {
    std::ostringstream out;
    const auto num = [](double v) { return format_double(v); };
    const auto flag = [](bool b) { return b ? "true" : "false"; };
    out << "[potential]\n"
        << "family = \"" << family_name(c.potential.family) << "\"\n"
        << "alpha = " << num(c.potential.alpha) << "\n"
        << "beta = " << num(c.potential.beta) << "\n"
        << "k = " << num(c.potential.k) << "\n"
        << "phi = " << num(c.potential.phi) << "\n"
        << "gamma = " << num(c.potential.gamma) << "\n\n";
    out << "[grid]\n"
        << "mode = \"" << (c.grid.explicit_grid ? "explicit" : "auto") << "\"\n"
        << "pad = " << num(c.grid.pad) << "\n"
        << "points_per_wavelength = " << num(c.grid.points_per_wavelength) << "\n"
        << "q_min = " << num(c.grid.q_min) << "\n"
        << "q_max = " << num(c.grid.q_max) << "\n"
        << "n_points = " << c.grid.n_points << "\n\n";
    out << "[solve]\n"
        << "states = " << c.solve.states << "\n"
        << "rtol = " << num(c.solve.rtol) << "\n"
        << "cluster_tol = " << num(c.solve.cluster_tol) << "\n"
        << "max_inverse_iterations = " << c.solve.max_inverse_iterations << "\n"
        << "threads = " << c.solve.threads << "\n\n";
    out << "[analysis]\n"
        << "spacings = " << flag(c.analysis.spacings) << "\n"
        << "turning_points = " << flag(c.analysis.turning_points) << "\n"
        << "fit = " << flag(c.analysis.fit) << "\n"
        << "fit_n_lo = " << c.analysis.fit_n_lo << "\n"
        << "fit_n_hi = " << c.analysis.fit_n_hi << "\n"
        << "degeneracy_window = " << c.analysis.degeneracy_window << "\n"
        << "degeneracy_factor = " << num(c.analysis.degeneracy_factor) << "\n"
        << "state_metrics = " << flag(c.analysis.state_metrics) << "\n"
        << "min_localization = " << num(c.analysis.min_localization) << "\n"
        << "one_sided_asymmetry = " << num(c.analysis.one_sided_asymmetry) << "\n\n";
    out << "[output]\n"
        << "directory = \"" << c.output.directory << "\"\n"
        << "wavefunctions = " << flag(c.output.wavefunctions) << "\n";
    if (c.sweep) {
        out << "\n[sweep]\n"
            << "parameter = \"" << c.sweep->parameter << "\"\n"
            << "from = " << num(c.sweep->from) << "\n"
            << "to = " << num(c.sweep->to) << "\n"
            << "points = " << c.sweep->points << "\n"
            << "workers = " << c.sweep->workers << "\n";
    }
    return out.str();
}

}  // namespace superexp
