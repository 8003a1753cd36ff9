#pragma once

/**
 * @file config.hpp
 * @brief JSON run configuration (schema_version 1). See README for fields.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vvdiss/multiplier.hpp"
#include "vvdiss/profiles.hpp"

namespace vvd {

inline constexpr int config_schema_version = 1;

/// Thrown for unreadable or malformed configuration (exit code 3).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProfileSpec {
    ProfileKind kind = ProfileKind::constant;
    std::map<std::string, double> params;
    double half_length = 10.0;
    std::size_t n_points = 1025;
    std::vector<double> table;
};

struct Bump {
    double center = 0.0;  // z
    double width = 1.0;
    double frequency = 0.0;
    double re = 1.0, im = 0.0;
};

struct InitialSpec {
    std::string kind = "gaussian";  // gaussian | bumps | random | checkpoint
    double center_y = 0.0;
    double width = 1.0;
    double frequency = 0.0;
    std::vector<Bump> bumps;  // kind = bumps, centers given as y
    int count = 3;            // kind = random
    double width_min = 1.0, width_max = 3.0, freq_max = 0.5, spread = 0.25;
    std::string file;  // kind = checkpoint
};

using Region = std::vector<std::pair<double, double>>;

struct RunConfig {
    ProfileSpec profile;
    std::optional<double> sigma;
    std::size_t n_z = 256;
    std::vector<int> k{1};
    double dt = 1e-2;
    double T = 1.0;
    int stride = 10;
    WeightVariant variant = WeightVariant::A;
    bool partitioned = false;
    int hn_order = 2;
    InitialSpec initial;
    std::uint64_t seed = 1;
    bool override_admissibility = false;
    std::optional<Region> corollary_region;
    double corollary_theta = 0.5;
    std::map<std::string, Region> regions;  // named regions with their energy traced
    std::optional<std::pair<double, double>> fit_levels;
    bool svg = false;
    nlohmann::json source;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// FNV-1a 64 of the key-sorted compact dump.
std::uint64_t config_hash(const nlohmann::json& j);
std::string hex64(std::uint64_t v);

ViscosityProfile build_profile(const ProfileSpec& spec);

}  // namespace vvd
