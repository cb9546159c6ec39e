#include "trotter/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace trotter {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Parser {
    std::string origin;
    int line_no = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + msg);
    }

    double number(const std::string& raw) const {
        try {
            size_t used = 0;
            const double v = std::stod(raw, &used);
            if (used != raw.size()) fail("trailing characters after number '" + raw + "'");
            return v;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            fail("expected a number, got '" + raw + "'");
        }
    }

    long integer(const std::string& raw) const {
        const double v = number(raw);
        if (v != std::floor(v)) fail("expected an integer, got '" + raw + "'");
        return long(v);
    }

    bool boolean(const std::string& raw) const {
        if (raw == "true") return true;
        if (raw == "false") return false;
        fail("expected true or false, got '" + raw + "'");
    }

    std::string string_value(const std::string& raw) const {
        if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"')
            fail("expected a quoted string, got '" + raw + "'");
        return raw.substr(1, raw.size() - 2);
    }

    std::vector<double> number_array(const std::string& raw) const {
        if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']')
            fail("expected an array like [1, 2, 3], got '" + raw + "'");
        std::vector<double> out;
        std::stringstream inner(raw.substr(1, raw.size() - 2));
        std::string item;
        while (std::getline(inner, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(number(item));
        }
        return out;
    }
};

std::string array_text(const std::vector<double>& values) {
    std::string out = "[";
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += fmt(values[i]);
    }
    return out + "]";
}

std::string array_text(const std::vector<int>& values) {
    std::vector<double> d(values.begin(), values.end());
    return array_text(d);
}

}  // namespace

void RunConfig::validate() const {
    auto reject = [](const std::string& msg) { throw ConfigError("config: " + msg); };

    if (model_name != "heisenberg" && model_name != "stark" && model_name != "pxp")
        reject("unknown model '" + model_name + "'");
    if (L < 2 || (model_name == "pxp" && L < 3)) reject("chain length too small for model");
    if (order != 1 && order != 2 && order != 4 && order != 6 && order != 8)
        reject("schedule order must be one of 1, 2, 4, 6, 8");
    if (dt <= 0.0) reject("dt must be positive");
    if (t_max < 0.0) reject("t_max must be non-negative");
    const long n_max = std::lround(t_max / dt);
    if (std::abs(t_max - double(n_max) * dt) > 1e-9) reject("t_max must be a multiple of dt");
    if (record_stride < 1) reject("record_stride must be >= 1");

    if (initial_type != "random" && initial_type != "neel" && initial_type != "zeros" &&
        initial_type != "product" && initial_type != "ladder")
        reject("unknown initial state type '" + initial_type + "'");
    if (initial_type == "product" &&
        (int(initial_theta.size()) != L || int(initial_phi.size()) != L))
        reject("product state needs theta and phi arrays of length l");
    if (initial_type == "neel" && model_name == "pxp" && L % 2 != 0)
        reject("neel state on pxp expects even l");
    if (initial_type == "ladder" && (ladder_tol <= 0.0 || ladder_members < 2))
        reject("ladder state needs ladder_tol > 0 and ladder_members >= 2");

    if (l1 < 0.0 || l2 < 0.0) reject("loss weights must be non-negative");
    if (t_l <= 0.0) reject("t_l must be positive");
    const long n_l = std::lround(t_l / dt);
    if (n_l < 1 || std::abs(t_l - double(n_l) * dt) > 1e-9) reject("t_l must be a multiple of dt");
    if (iters < 1) reject("iters must be >= 1");
    if (restarts < 1) reject("restarts must be >= 1");
    if (!(lr0 > lr_min) || lr_min < 0.0) reject("need lr0 > lr_min >= 0");

    for (int site : tracked_sites)
        if (site < 1 || site > L) reject("tracked site out of range");
    if (baseline_count < 1) reject("baseline_count must be >= 1");

    try {
        build_model(model_name, L, model_params);
    } catch (const std::exception& err) {
        reject(err.what());
    }
}

SplitHamiltonian RunConfig::build() const { return build_model(model_name, L, model_params); }

LossConfig RunConfig::loss_config() const {
    LossConfig cfg;
    cfg.l1 = l1;
    cfg.l2 = l2;
    cfg.t_l = t_l;
    cfg.dt = dt;
    cfg.schedule_order = order;
    return cfg;
}

AdamConfig RunConfig::adam_config() const {
    AdamConfig cfg;
    cfg.iters = iters;
    cfg.lr0 = lr0;
    cfg.lr_min = lr_min;
    cfg.seed = seed;
    cfg.restarts = restarts;
    return cfg;
}

std::vector<int> RunConfig::effective_tracked_sites() const {
    if (!tracked_sites.empty()) return tracked_sites;
    return {L == 12 ? 11 : L - 1};
}

std::string RunConfig::serialize() const {
    std::ostringstream out;
    out << "schema_version = 1\n\n";
    out << "[model]\n";
    out << "name = \"" << model_name << "\"\n";
    out << "l = " << L << "\n";
    for (const auto& [key, value] : model_params) out << key << " = " << fmt(value) << "\n";
    out << "\n[trotter]\n";
    out << "order = " << order << "\n";
    out << "dt = " << fmt(dt) << "\n";
    out << "t_max = " << fmt(t_max) << "\n";
    out << "record_stride = " << record_stride << "\n";
    out << "\n[initial]\n";
    out << "type = \"" << initial_type << "\"\n";
    if (!initial_theta.empty()) out << "theta = " << array_text(initial_theta) << "\n";
    if (!initial_phi.empty()) out << "phi = " << array_text(initial_phi) << "\n";
    if (initial_type == "ladder") {
        out << "ladder_tol = " << fmt(ladder_tol) << "\n";
        out << "ladder_members = " << ladder_members << "\n";
    }
    out << "\n[optimize]\n";
    out << "l1 = " << fmt(l1) << "\n";
    out << "l2 = " << fmt(l2) << "\n";
    out << "t_l = " << fmt(t_l) << "\n";
    out << "iters = " << iters << "\n";
    out << "lr0 = " << fmt(lr0) << "\n";
    out << "lr_min = " << fmt(lr_min) << "\n";
    out << "restarts = " << restarts << "\n";
    out << "\n[output]\n";
    if (!tracked_sites.empty()) out << "tracked_sites = " << array_text(tracked_sites) << "\n";
    out << "baseline_count = " << baseline_count << "\n";
    out << "predicted_error = " << (predicted_error ? "true" : "false") << "\n";
    out << "\n[run]\n";
    out << "seed = " << seed << "\n";
    out << "out = \"" << out_dir << "\"\n";
    return out.str();
}

RunConfig RunConfig::parse_string(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    Parser p{origin, 0};
    std::istringstream in(text);
    std::string raw;
    std::string section;

    while (std::getline(in, raw)) {
        ++p.line_no;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') p.fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "trotter" && section != "initial" &&
                section != "optimize" && section != "output" && section != "run")
                p.fail("unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) p.fail("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) p.fail("expected key = value");

        if (section.empty()) {
            if (key == "schema_version") {
                if (p.integer(value) != 1) p.fail("unsupported schema_version");
            } else {
                p.fail("unknown top-level key '" + key + "'");
            }
        } else if (section == "model") {
            if (key == "name")
                cfg.model_name = p.string_value(value);
            else if (key == "l")
                cfg.L = int(p.integer(value));
            else if (key == "h_x" || key == "h_y" || key == "h_z" || key == "j_x")
                cfg.model_params[key] = p.number(value);
            else
                p.fail("unknown key '" + key + "' in [model]");
        } else if (section == "trotter") {
            if (key == "order")
                cfg.order = int(p.integer(value));
            else if (key == "dt")
                cfg.dt = p.number(value);
            else if (key == "t_max")
                cfg.t_max = p.number(value);
            else if (key == "record_stride")
                cfg.record_stride = int(p.integer(value));
            else
                p.fail("unknown key '" + key + "' in [trotter]");
        } else if (section == "initial") {
            if (key == "type")
                cfg.initial_type = p.string_value(value);
            else if (key == "theta")
                cfg.initial_theta = p.number_array(value);
            else if (key == "phi")
                cfg.initial_phi = p.number_array(value);
            else if (key == "ladder_tol")
                cfg.ladder_tol = p.number(value);
            else if (key == "ladder_members")
                cfg.ladder_members = int(p.integer(value));
            else
                p.fail("unknown key '" + key + "' in [initial]");
        } else if (section == "optimize") {
            if (key == "l1")
                cfg.l1 = p.number(value);
            else if (key == "l2")
                cfg.l2 = p.number(value);
            else if (key == "t_l")
                cfg.t_l = p.number(value);
            else if (key == "iters")
                cfg.iters = int(p.integer(value));
            else if (key == "lr0")
                cfg.lr0 = p.number(value);
            else if (key == "lr_min")
                cfg.lr_min = p.number(value);
            else if (key == "restarts")
                cfg.restarts = int(p.integer(value));
            else
                p.fail("unknown key '" + key + "' in [optimize]");
        } else if (section == "output") {
            if (key == "tracked_sites") {
                cfg.tracked_sites.clear();
                for (double v : p.number_array(value)) cfg.tracked_sites.push_back(int(v));
            } else if (key == "baseline_count")
                cfg.baseline_count = int(p.integer(value));
            else if (key == "predicted_error")
                cfg.predicted_error = p.boolean(value);
            else
                p.fail("unknown key '" + key + "' in [output]");
        } else if (section == "run") {
            if (key == "seed")
                cfg.seed = std::uint64_t(p.integer(value));
            else if (key == "out")
                cfg.out_dir = p.string_value(value);
            else
                p.fail("unknown key '" + key + "' in [run]");
        }
    }

    cfg.validate();
    return cfg;
}

RunConfig RunConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path.string());
}

}  // namespace trotter
