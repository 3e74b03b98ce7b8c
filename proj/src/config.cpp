#include "mipt/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include "mipt/table.hpp"

namespace mipt {

namespace {

struct IniEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

using IniData = std::map<std::string, std::map<std::string, IniEntry>>;

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

IniData parse_ini(const std::string& text, const std::string& filename) {
    IniData data;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        const std::string s = trim(line);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError(filename + ":" + std::to_string(lineno) + ": unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty())
                throw ConfigError(filename + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(filename + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError(filename + ":" + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError(filename + ":" + std::to_string(lineno) + ": key '" + key + "' outside any section");
        data[section][key] = IniEntry{value, lineno, false};
    }
    return data;
}

class IniReader {
public:
    IniReader(IniData data, std::string filename) : data_(std::move(data)), filename_(std::move(filename)) {}

    bool has(const std::string& section, const std::string& key) {
        auto s = data_.find(section);
        return s != data_.end() && s->second.count(key) > 0;
    }

    std::string raw(const std::string& section, const std::string& key) {
        IniEntry& e = data_.at(section).at(key);
        e.used = true;
        return e.value;
    }

    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& reason) {
        const int line = data_.at(section).at(key).line;
        throw ConfigError(filename_ + ":" + std::to_string(line) + ": " + section + "." + key + ": " + reason);
    }

    double number(const std::string& section, const std::string& key, double fallback) {
        if (!has(section, key)) return fallback;
        try {
            return parse_double(raw(section, key));
        } catch (const std::exception& e) {
            fail(section, key, e.what());
        }
    }

    long integer(const std::string& section, const std::string& key, long fallback) {
        if (!has(section, key)) return fallback;
        const double v = number(section, key, 0.0);
        const long n = std::llround(v);
        if (v != static_cast<double>(n)) fail(section, key, "expected an integer");
        return n;
    }

    std::uint64_t unsigned_integer(const std::string& section, const std::string& key, std::uint64_t fallback) {
        if (!has(section, key)) return fallback;
        const std::string v = raw(section, key);
        std::uint64_t out = 0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
            fail(section, key, "expected an unsigned 64-bit integer");
        return out;
    }

    bool boolean(const std::string& section, const std::string& key, bool fallback) {
        if (!has(section, key)) return fallback;
        const std::string v = raw(section, key);
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        fail(section, key, "expected a boolean (true/false)");
    }

    std::vector<double> number_list(const std::string& section, const std::string& key) {
        std::vector<double> out;
        if (!has(section, key)) return out;
        std::string v = raw(section, key);
        for (char& c : v)
            if (c == ',') c = ' ';
        std::istringstream ss(v);
        std::string tok;
        while (ss >> tok) {
            try {
                out.push_back(parse_double(tok));
            } catch (const std::exception& e) {
                fail(section, key, e.what());
            }
        }
        if (out.empty()) fail(section, key, "empty list");
        return out;
    }

    std::string text(const std::string& section, const std::string& key, const std::string& fallback) {
        return has(section, key) ? raw(section, key) : fallback;
    }

    void reject_unknown() {
        for (const auto& [section, entries] : data_)
            for (const auto& [key, entry] : entries)
                if (!entry.used)
                    throw ConfigError(filename_ + ":" + std::to_string(entry.line) + ": unknown field " + section +
                                      "." + key);
    }

private:
    IniData data_;
    std::string filename_;
};

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

}  // namespace

RunConfig RunConfig::from_string(const std::string& text, const std::string& filename) {
    IniReader ini(parse_ini(text, filename), filename);

    RunConfig cfg;
    cfg.base.dt = ini.number("simulation", "dt", cfg.base.dt);
    cfg.base.t_max = ini.number("simulation", "t_max", cfg.base.t_max);
    cfg.base.t_burn = ini.number("simulation", "t_burn", cfg.base.t_burn);
    cfg.base.sample_interval = ini.number("simulation", "sample_interval", cfg.base.sample_interval);
    cfg.base.n_steady_samples = static_cast<int>(ini.integer("simulation", "n_steady_samples", cfg.base.n_steady_samples));
    cfg.base.n_realizations = static_cast<int>(ini.integer("simulation", "n_realizations", cfg.base.n_realizations));
    cfg.base.master_seed = ini.unsigned_integer("simulation", "master_seed", 1);
    cfg.base.record_tmi = ini.boolean("simulation", "record_tmi", false);

    for (double v : ini.number_list("sweep", "L")) {
        const long n = std::llround(v);
        if (v != static_cast<double>(n)) ini.fail("sweep", "L", "L values must be integers");
        cfg.L_list.push_back(static_cast<int>(n));
    }
    cfg.lambda_list = ini.number_list("sweep", "lambda");
    if (ini.has("sweep", "xi_r")) cfg.xi_r_list = ini.number_list("sweep", "xi_r");
    if (ini.has("sweep", "xi_s")) cfg.xi_s_list = ini.number_list("sweep", "xi_s");

    cfg.output_dir = ini.text("output", "directory", cfg.output_dir);
    cfg.checkpoint = ini.boolean("output", "checkpoint", cfg.checkpoint);
    cfg.threads = static_cast<int>(ini.integer("output", "threads", cfg.threads));

    ini.reject_unknown();
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str(), path);
}

void RunConfig::validate() const {
    if (L_list.empty()) throw ConfigError("sweep.L: list must not be empty");
    if (lambda_list.empty()) throw ConfigError("sweep.lambda: list must not be empty");
    if (xi_r_list.empty() || xi_s_list.empty()) throw ConfigError("sweep.xi_r/xi_s: lists must not be empty");
    for (int L : L_list) {
        if (L < 2 || L % 2 != 0) throw ConfigError("sweep.L: values must be even and >= 2, got " + std::to_string(L));
        if (base.record_tmi && L % 4 != 0)
            throw ConfigError("sweep.L: record_tmi requires L divisible by 4, got " + std::to_string(L));
    }
    for (double l : lambda_list)
        if (l < 0.0) throw ConfigError("sweep.lambda: values must be >= 0");
    for (double x : xi_r_list)
        if (x < 0.0) throw ConfigError("sweep.xi_r: values must be >= 0");
    for (double x : xi_s_list)
        if (x < 0.0) throw ConfigError("sweep.xi_s: values must be >= 0");
    if (base.n_realizations < 2) throw ConfigError("simulation.n_realizations: must be >= 2");
    if (threads < 0) throw ConfigError("output.threads: must be >= 0");

    // Every grid point must resolve to valid run parameters.
    for (const SimParams& p : grid()) {
        try {
            (void)p.resolved();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("invalid grid point (L=") + std::to_string(p.L) +
                              ", lambda=" + format_double(p.lambda) + "): " + e.what());
        }
    }
}

std::vector<SimParams> RunConfig::grid() const {
    std::vector<SimParams> out;
    out.reserve(L_list.size() * xi_s_list.size() * xi_r_list.size() * lambda_list.size());
    for (int L : L_list)
        for (double xs : xi_s_list)
            for (double xr : xi_r_list)
                for (double l : lambda_list) {
                    SimParams p = base;
                    p.L = L;
                    p.xi_s = xs;
                    p.xi_r = xr;
                    p.lambda = l;
                    out.push_back(p);
                }
    return out;
}

std::string RunConfig::canonical() const {
    std::string s = "v1;";
    auto add = [&s](const std::string& key, const std::string& value) {
        s += key;
        s += '=';
        s += value;
        s += ';';
    };
    add("dt", format_double(base.dt));
    add("t_max", format_double(base.t_max));
    add("t_burn", format_double(base.t_burn));
    add("sample_interval", format_double(base.sample_interval));
    add("n_steady_samples", std::to_string(base.n_steady_samples));
    add("n_realizations", std::to_string(base.n_realizations));
    add("master_seed", std::to_string(base.master_seed));
    add("record_tmi", base.record_tmi ? "1" : "0");
    auto add_list = [&](const std::string& key, const std::vector<double>& vs) {
        s += key;
        s += '=';
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) s += ',';
            s += format_double(vs[i]);
        }
        s += ';';
    };
    std::string ls;
    for (std::size_t i = 0; i < L_list.size(); ++i) {
        if (i) ls += ',';
        ls += std::to_string(L_list[i]);
    }
    add("L", ls);
    add_list("lambda", lambda_list);
    add_list("xi_r", xi_r_list);
    add_list("xi_s", xi_s_list);
    return s;
}

std::uint64_t RunConfig::hash() const {
    std::uint64_t h = kFnvOffset;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::string default_config_help() {
    return R"(Config file format (INI sections, '#' comments, lists separated by spaces or commas):

[simulation]
dt = 0.01                 # time step, in (0, 0.05]
t_max = -1                # total time; -1 = t_burn + n_steady_samples*sample_interval + 5
t_burn = -1               # burn-in; -1 = max(20, 10/lambda^2), capped at t_max/2
sample_interval = 1.0     # time between recorded samples
n_steady_samples = 100    # samples averaged per realization
n_realizations = 100
master_seed = 1
record_tmi = false        # requires every L divisible by 4

[sweep]
L = 8 10 12               # even system sizes
lambda = 0.4 0.6 0.8      # measurement strengths
xi_r = 1.3                # temporal noise strengths (default 0)
xi_s = 0                  # static disorder strengths (default 0)

[output]
directory = .
checkpoint = true         # append per-point records, resume on rerun
threads = 0               # 0 = MIPT_THREADS env or hardware concurrency
)";
}

}  // namespace mipt
