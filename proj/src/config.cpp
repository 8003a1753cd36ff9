#include "vvdiss/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vvd {

namespace {

using nlohmann::json;

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

Region parse_region(const json& j, const std::string& what) {
    Region r;
    if (!j.is_array()) throw ConfigError(what + ": expected a list of [lo, hi] pairs");
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2) throw ConfigError(what + ": expected [lo, hi]");
        const double lo = p[0].get<double>();
        const double hi = p[1].get<double>();
        if (!(hi > lo)) throw ConfigError(what + ": need lo < hi");
        r.emplace_back(lo, hi);
    }
    return r;
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
}

}  // namespace

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    const int version = get_or<int>(j, "schema_version", -1);
    if (version != config_schema_version) {
        throw ConfigError("unsupported schema_version " + std::to_string(version));
    }
    RunConfig c;
    c.source = j;

    if (!j.contains("profile")) throw ConfigError("config: missing 'profile'");
    const auto& pj = j.at("profile");
    try {
        c.profile.kind = parse_profile_kind(pj.at("kind").get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(std::string("profile.kind: ") + e.what());
    }
    if (pj.contains("params")) {
        for (const auto& [key, val] : pj.at("params").items()) c.profile.params[key] = val.get<double>();
    }
    c.profile.half_length = get_or<double>(pj, "L_y", c.profile.half_length);
    c.profile.n_points = get_or<std::size_t>(pj, "n_points", c.profile.n_points);
    if (pj.contains("table")) c.profile.table = pj.at("table").get<std::vector<double>>();
    require_positive(c.profile.half_length, "profile.L_y");

    if (j.contains("sigma")) c.sigma = j.at("sigma").get<double>();
    if (c.sigma) require_positive(*c.sigma, "sigma");
    c.n_z = get_or<std::size_t>(j, "n_z", c.n_z);
    if (j.contains("k")) {
        if (j.at("k").is_number()) {
            c.k = {j.at("k").get<int>()};
        } else {
            c.k = j.at("k").get<std::vector<int>>();
        }
    }
    if (c.k.empty()) throw ConfigError("k list is empty");
    for (int k : c.k) {
        if (k == 0) throw ConfigError("k = 0 is the mean mode and is not a run mode");
    }
    c.dt = get_or<double>(j, "dt", c.dt);
    c.T = get_or<double>(j, "T", c.T);
    c.stride = get_or<int>(j, "output_stride", c.stride);
    require_positive(c.dt, "dt");
    require_positive(c.T, "T");
    if (c.stride < 1) throw ConfigError("output_stride must be >= 1");
    try {
        c.variant = parse_weight_variant(get_or<std::string>(j, "weight_variant", "A"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    c.partitioned = get_or<bool>(j, "partitioned", c.partitioned);
    c.hn_order = get_or<int>(j, "hn_order", c.hn_order);
    if (c.hn_order < 0 || c.hn_order > 4) throw ConfigError("hn_order must lie in [0, 4]");
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.override_admissibility = get_or<bool>(j, "override_admissibility", c.override_admissibility);
    c.svg = get_or<bool>(j, "svg", c.svg);

    if (j.contains("initial")) {
        const auto& ij = j.at("initial");
        auto& in = c.initial;
        in.kind = get_or<std::string>(ij, "kind", in.kind);
        in.center_y = get_or<double>(ij, "center_y", in.center_y);
        in.width = get_or<double>(ij, "width", in.width);
        in.frequency = get_or<double>(ij, "frequency", in.frequency);
        in.count = get_or<int>(ij, "count", in.count);
        in.width_min = get_or<double>(ij, "width_min", in.width_min);
        in.width_max = get_or<double>(ij, "width_max", in.width_max);
        in.freq_max = get_or<double>(ij, "freq_max", in.freq_max);
        in.spread = get_or<double>(ij, "spread", in.spread);
        in.file = get_or<std::string>(ij, "file", in.file);
        if (ij.contains("bumps")) {
            for (const auto& bj : ij.at("bumps")) {
                Bump b;
                b.center = get_or<double>(bj, "center_y", 0.0);
                b.width = get_or<double>(bj, "width", 1.0);
                b.frequency = get_or<double>(bj, "frequency", 0.0);
                b.re = get_or<double>(bj, "re", 1.0);
                b.im = get_or<double>(bj, "im", 0.0);
                require_positive(b.width, "initial.bumps.width");
                in.bumps.push_back(b);
            }
        }
        const std::vector<std::string> kinds{"gaussian", "bumps", "random", "checkpoint"};
        if (std::find(kinds.begin(), kinds.end(), in.kind) == kinds.end()) {
            throw ConfigError("unknown initial.kind: " + in.kind);
        }
        require_positive(in.width, "initial.width");
        if (in.kind == "random" && (in.count < 1 || !(in.width_max >= in.width_min) || !(in.width_min > 0.0))) {
            throw ConfigError("initial: random data needs count >= 1 and 0 < width_min <= width_max");
        }
        if (in.kind == "checkpoint" && in.file.empty()) throw ConfigError("initial: checkpoint needs 'file'");
    }

    if (j.contains("corollary")) {
        const auto& cj = j.at("corollary");
        c.corollary_region = parse_region(cj.at("region"), "corollary.region");
        c.corollary_theta = get_or<double>(cj, "theta", c.corollary_theta);
        if (c.corollary_theta < 0.0 || c.corollary_theta > 1.0) throw ConfigError("corollary.theta must lie in [0, 1]");
    }
    if (j.contains("regions")) {
        for (const auto& [name, rj] : j.at("regions").items()) c.regions[name] = parse_region(rj, "regions." + name);
    }
    if (j.contains("fit_levels")) {
        const auto v = j.at("fit_levels").get<std::vector<double>>();
        if (v.size() != 2 || !(v[1] > v[0]) || v[0] < 0.0) throw ConfigError("fit_levels must be [lo, hi] with 0 <= lo < hi");
        c.fit_levels = std::make_pair(v[0], v[1]);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return parse_config(j);
}

std::uint64_t config_hash(const json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

ViscosityProfile build_profile(const ProfileSpec& spec) {
    return build_profile(spec.kind, spec.params, spec.half_length, spec.n_points, spec.table);
}

}  // namespace vvd
