#include "gkeca/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gkeca/eval.hpp"

namespace gkeca {

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "image_width",  "image_height", "gabor_scales", "gabor_orientations", "gabor_kmax",    "gabor_f",
        "gabor_sigma",  "gabor_window", "gabor_dc",     "block_size",         "kernel",        "kernel_sigma",
        "kernel_degree", "kernel_offset", "normalize",  "k",                  "energy",        "class_reg",
        "measure",      "tau",          "tau_sweep",    "seed",               "threads",
    };
    return keys;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
    if (v == "-inf") return -std::numeric_limits<double>::infinity();
    double out = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
    }
    return out;
}

long long to_int(const std::string& key, const std::string& v) {
    long long out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config: '" + key + "' expects true/false, got '" + v + "'");
}

}  // namespace

Settings parse_settings(const std::string& text, const std::string& origin) {
    Settings out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    const auto& keys = config_keys();
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected `key = value`");
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        out[key] = value;
    }
    return out;
}

Settings load_settings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_settings(buf.str(), path.string());
}

PipelineConfig config_from_settings(const Settings& settings) {
    PipelineConfig cfg;
    const auto& keys = config_keys();
    for (const auto& [key, value] : settings) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("config: unknown key '" + key + "'");
    }
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = settings.find(key);
        return it == settings.end() ? nullptr : &it->second;
    };

    if (auto v = get("image_width")) cfg.image_size.width = static_cast<int>(to_int("image_width", *v));
    if (auto v = get("image_height")) cfg.image_size.height = static_cast<int>(to_int("image_height", *v));
    if (auto v = get("gabor_scales")) cfg.gabor.num_scales = static_cast<int>(to_int("gabor_scales", *v));
    if (auto v = get("gabor_orientations")) cfg.gabor.num_orientations = static_cast<int>(to_int("gabor_orientations", *v));
    if (auto v = get("gabor_kmax")) cfg.gabor.k_max = to_double("gabor_kmax", *v);
    if (auto v = get("gabor_f")) cfg.gabor.f = to_double("gabor_f", *v);
    if (auto v = get("gabor_sigma")) cfg.gabor.sigma = to_double("gabor_sigma", *v);
    if (auto v = get("gabor_window")) cfg.gabor.window = static_cast<int>(to_int("gabor_window", *v));
    if (auto v = get("gabor_dc")) {
        if (*v == "sampled") {
            cfg.gabor.dc = DcCompensation::sampled;
        } else if (*v == "analytic") {
            cfg.gabor.dc = DcCompensation::analytic;
        } else {
            throw ConfigError("config: gabor_dc must be sampled or analytic");
        }
    }
    if (auto v = get("block_size")) cfg.block_size = static_cast<int>(to_int("block_size", *v));

    bool normalize = true;
    if (auto v = get("normalize")) normalize = to_bool("normalize", *v);
    KernelKind kind = KernelKind::cosine;
    if (auto v = get("kernel")) {
        auto parsed = parse_kernel_kind(*v);
        if (!parsed) throw ConfigError("config: unknown kernel '" + *v + "'");
        kind = *parsed;
    }
    const double ksigma = get("kernel_sigma") ? to_double("kernel_sigma", *get("kernel_sigma")) : 1.0;
    const int kdegree = get("kernel_degree") ? static_cast<int>(to_int("kernel_degree", *get("kernel_degree"))) : 2;
    const double koffset = get("kernel_offset") ? to_double("kernel_offset", *get("kernel_offset")) : 1.0;
    try {
        switch (kind) {
            case KernelKind::cosine: cfg.kernel = KernelSpec::cosine(normalize); break;
            case KernelKind::gaussian: cfg.kernel = KernelSpec::gaussian(ksigma, normalize); break;
            case KernelKind::polynomial: cfg.kernel = KernelSpec::polynomial(kdegree, koffset, normalize); break;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    if (auto v = get("k")) {
        if (*v == "auto") {
            cfg.keca.k.reset();
        } else {
            auto k = to_int("k", *v);
            if (k < 1) throw ConfigError("config: k must be >= 1 or 'auto'");
            cfg.keca.k = static_cast<std::size_t>(k);
        }
    }
    if (auto v = get("energy")) cfg.keca.energy_fraction = to_double("energy", *v);
    if (auto v = get("class_reg")) cfg.class_regularization = to_double("class_reg", *v);

    if (auto v = get("measure")) {
        cfg.measures.clear();
        if (*v == "all") {
            cfg.measures.assign(std::begin(kAllMeasures), std::end(kAllMeasures));
        } else {
            std::istringstream in(*v);
            std::string tok;
            while (std::getline(in, tok, ',')) {
                auto m = parse_measure(trim(tok));
                if (!m) throw ConfigError("config: unknown measure '" + trim(tok) + "'");
                cfg.measures.push_back(*m);
            }
        }
    }
    if (auto v = get("tau")) {
        cfg.tau = to_double("tau", *v);
        if (std::isnan(cfg.tau)) throw ConfigError("config: tau must not be NaN");
    }
    if (auto v = get("tau_sweep")) {
        auto first = v->find(':');
        auto second = v->find(':', first == std::string::npos ? first : first + 1);
        if (first == std::string::npos || second == std::string::npos) {
            throw ConfigError("config: tau_sweep expects lo:hi:count");
        }
        TauSweep sweep;
        sweep.lo = to_double("tau_sweep", v->substr(0, first));
        sweep.hi = to_double("tau_sweep", v->substr(first + 1, second - first - 1));
        sweep.count = static_cast<int>(to_int("tau_sweep", v->substr(second + 1)));
        cfg.tau_sweep = sweep;
    }
    if (auto v = get("seed")) {
        auto s = to_int("seed", *v);
        if (s < 0) throw ConfigError("config: seed must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (auto v = get("threads")) {
        auto t = to_int("threads", *v);
        if (t < 0) throw ConfigError("config: threads must be >= 0");
        cfg.threads = static_cast<int>(t);
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

Settings settings_from_config(const PipelineConfig& cfg) {
    Settings s;
    s["image_width"] = std::to_string(cfg.image_size.width);
    s["image_height"] = std::to_string(cfg.image_size.height);
    s["gabor_scales"] = std::to_string(cfg.gabor.num_scales);
    s["gabor_orientations"] = std::to_string(cfg.gabor.num_orientations);
    s["gabor_kmax"] = format_double(cfg.gabor.k_max);
    s["gabor_f"] = format_double(cfg.gabor.f);
    s["gabor_sigma"] = format_double(cfg.gabor.sigma);
    s["gabor_window"] = std::to_string(cfg.gabor.window);
    s["gabor_dc"] = cfg.gabor.dc == DcCompensation::sampled ? "sampled" : "analytic";
    s["block_size"] = std::to_string(cfg.block_size);
    s["kernel"] = to_string(cfg.kernel.kind);
    if (cfg.kernel.sigma) s["kernel_sigma"] = format_double(*cfg.kernel.sigma);
    if (cfg.kernel.degree) s["kernel_degree"] = std::to_string(*cfg.kernel.degree);
    if (cfg.kernel.offset) s["kernel_offset"] = format_double(*cfg.kernel.offset);
    s["normalize"] = cfg.kernel.normalize_inputs ? "true" : "false";
    s["k"] = cfg.keca.k ? std::to_string(*cfg.keca.k) : "auto";
    s["energy"] = format_double(cfg.keca.energy_fraction);
    s["class_reg"] = format_double(cfg.class_regularization);
    std::string measures;
    for (auto m : cfg.measures) measures += (measures.empty() ? "" : ",") + to_string(m);
    s["measure"] = measures;
    s["tau"] = format_double(cfg.tau);
    if (cfg.tau_sweep) {
        s["tau_sweep"] = format_double(cfg.tau_sweep->lo) + ":" + format_double(cfg.tau_sweep->hi) + ":" +
                         std::to_string(cfg.tau_sweep->count);
    }
    s["seed"] = std::to_string(cfg.seed);
    s["threads"] = std::to_string(cfg.threads);
    return s;
}

}  // namespace gkeca
