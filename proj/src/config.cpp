#include "ltsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ltsim/errors.hpp"

namespace ltsim {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) { known = true; break; }
        if (!known)
            throw ConfigError(std::string("unknown key \"") + it.key() + "\" in " + where);
    }
}

std::vector<double> to_doubles(const json& arr, const char* where) {
    if (!arr.is_array() || arr.empty())
        throw ConfigError(std::string(where) + " must be a non-empty array");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number())
            throw ConfigError(std::string(where) + " must contain numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

Setup reference_discrete_setup() {
    std::vector<double> variances = {10.0, 5.0, 1.0, 0.5};
    std::vector<double> probs = {0.1, 0.3, 0.4, 0.2};
    std::vector<ChannelState> states;
    for (std::size_t i = 0; i < variances.size(); ++i)
        states.push_back({std::sqrt(variances[i]), probs[i]});
    return {CompositeSource(variances, probs), FadingChannel::discrete(states)};
}

Setup reference_rayleigh_setup() {
    return {CompositeSource({10.0, 5.0, 1.0, 0.5}, {0.1, 0.3, 0.4, 0.2}),
            FadingChannel::rayleigh(3.0)};
}

Setup parse_setup(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config is not valid JSON: ") + err.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    reject_unknown(doc, {"source", "channel"}, "config root");
    if (!doc.contains("source") || !doc.contains("channel"))
        throw ConfigError("config needs \"source\" and \"channel\" sections");

    const json& src = doc["source"];
    if (!src.is_object()) throw ConfigError("\"source\" must be an object");
    reject_unknown(src, {"variances", "request_probs"}, "source");
    if (!src.contains("variances") || !src.contains("request_probs"))
        throw ConfigError("source needs \"variances\" and \"request_probs\"");

    const json& ch = doc["channel"];
    if (!ch.is_object()) throw ConfigError("\"channel\" must be an object");
    if (!ch.contains("type") || !ch["type"].is_string())
        throw ConfigError("channel needs a string \"type\"");
    std::string type = ch["type"].get<std::string>();

    try {
        CompositeSource source(to_doubles(src["variances"], "source.variances"),
                               to_doubles(src["request_probs"], "source.request_probs"));
        if (type == "discrete") {
            reject_unknown(ch, {"type", "magnitudes", "probs"}, "channel");
            if (!ch.contains("magnitudes") || !ch.contains("probs"))
                throw ConfigError("discrete channel needs \"magnitudes\" and \"probs\"");
            std::vector<double> mags = to_doubles(ch["magnitudes"], "channel.magnitudes");
            std::vector<double> probs = to_doubles(ch["probs"], "channel.probs");
            if (mags.size() != probs.size())
                throw ConfigError("channel magnitudes and probs must match in length");
            std::vector<ChannelState> states;
            for (std::size_t i = 0; i < mags.size(); ++i)
                states.push_back({mags[i], probs[i]});
            return {std::move(source), FadingChannel::discrete(states)};
        }
        if (type == "rayleigh") {
            reject_unknown(ch, {"type", "scale"}, "channel");
            if (!ch.contains("scale") || !ch["scale"].is_number())
                throw ConfigError("rayleigh channel needs a numeric \"scale\"");
            return {std::move(source), FadingChannel::rayleigh(ch["scale"].get<double>())};
        }
        throw ConfigError("channel type must be \"discrete\" or \"rayleigh\"");
    } catch (const ValidationError& err) {
        throw ConfigError(std::string("invalid model in config: ") + err.what());
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("invalid model in config: ") + err.what());
    }
}

Setup load_setup_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_setup(buf.str());
}

} // namespace ltsim
