#include "loggas/run_config.hpp"

#include <json.hpp>

#include <stdexcept>

namespace loggas {

using nlohmann::json;

bool RunConfig::operator==(const RunConfig& o) const
{
    const Perturbation& a = potential.perturbation;
    const Perturbation& b = o.potential.perturbation;
    return command == o.command && potential.even_coefficients == o.potential.even_coefficients
        && potential.t == o.potential.t && a.kind == b.kind && a.amplitude == b.amplitude && a.omega == b.omega
        && a.mean == b.mean && a.width == b.width && parameters == o.parameters && outputs == o.outputs
        && format == o.format && seed == o.seed;
}

std::string to_json(const RunConfig& c)
{
    const Perturbation& p = c.potential.perturbation;
    json j;
    j["command"] = c.command;
    j["potential"] = {
        {"even_coefficients", c.potential.even_coefficients},
        {"t", c.potential.t},
        {"perturbation",
         {{"kind", to_string(p.kind)}, {"amplitude", p.amplitude}, {"omega", p.omega}, {"mean", p.mean},
          {"width", p.width}}},
    };
    j["parameters"] = c.parameters;
    j["outputs"] = c.outputs;
    j["format"] = c.format;
    j["seed"] = c.seed;
    return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text)
{
    try {
        const json j = json::parse(text);
        RunConfig c;
        c.command = j.at("command").get<std::string>();
        const json& pot = j.at("potential");
        c.potential.even_coefficients = pot.at("even_coefficients").get<std::vector<double>>();
        c.potential.t = pot.at("t").get<double>();
        const json& per = pot.at("perturbation");
        Perturbation& p = c.potential.perturbation;
        p.kind = parse_perturbation_kind(per.at("kind").get<std::string>());
        p.amplitude = per.at("amplitude").get<double>();
        p.omega = per.at("omega").get<double>();
        p.mean = per.at("mean").get<double>();
        p.width = per.at("width").get<double>();
        c.parameters = j.at("parameters").get<std::map<std::string, double>>();
        c.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
        c.format = j.at("format").get<std::string>();
        if (c.format != "json" && c.format != "csv") throw std::invalid_argument("format must be json or csv");
        c.seed = j.at("seed").get<std::uint64_t>();
        return c;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed run configuration: ") + e.what());
    }
}

} // namespace loggas
