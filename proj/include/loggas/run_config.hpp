#pragma once

#include "loggas/potential.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace loggas {

struct RunConfig {
    std::string command;
    PotentialSpec potential;
    std::map<std::string, double> parameters;
    std::map<std::string, std::string> outputs;
    std::string format = "json"; // "json" or "csv"
    std::uint64_t seed = 42;

    bool operator==(const RunConfig& other) const;
};

std::string to_json(const RunConfig& config);
// Throws std::invalid_argument on malformed input.
RunConfig run_config_from_json(const std::string& text);

} // namespace loggas
