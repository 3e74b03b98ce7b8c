#include "mipt/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mipt {

namespace {

using nlohmann::json;

json result_to_json(const EnsembleResult& r) {
    json j;
    j["mean_S"] = r.mean_S;
    j["stderr_S"] = r.stderr_S;
    j["var_S"] = r.var_S;
    j["stderr_var"] = r.stderr_var;
    if (r.mean_tmi) j["mean_tmi"] = *r.mean_tmi;
    if (r.stderr_tmi) j["stderr_tmi"] = *r.stderr_tmi;
    j["n_effective"] = r.n_effective;
    json aborted = json::array();
    for (const auto& [idx, reason] : r.aborted) aborted.push_back({{"index", idx}, {"reason", reason}});
    j["aborted"] = aborted;
    return j;
}

EnsembleResult result_from_json(const json& j, const SimParams& point) {
    EnsembleResult r;
    r.params = point;
    r.mean_S = j.at("mean_S").get<double>();
    r.stderr_S = j.at("stderr_S").get<double>();
    r.var_S = j.at("var_S").get<double>();
    r.stderr_var = j.at("stderr_var").get<double>();
    if (j.contains("mean_tmi")) r.mean_tmi = j.at("mean_tmi").get<double>();
    if (j.contains("stderr_tmi")) r.stderr_tmi = j.at("stderr_tmi").get<double>();
    r.n_effective = j.at("n_effective").get<int>();
    for (const json& a : j.at("aborted"))
        r.aborted.emplace_back(a.at("index").get<int>(), a.at("reason").get<std::string>());
    return r;
}

}  // namespace

GridKey grid_key(const SimParams& p) { return {p.L, p.lambda, p.xi_r, p.xi_s}; }

void checkpoint_append(const std::string& path, std::uint64_t config_hash, const SimParams& point,
                       const EnsembleResult& result) {
    json j;
    j["config_hash"] = config_hash;
    j["point"] = {{"L", point.L}, {"lambda", point.lambda}, {"xi_r", point.xi_r}, {"xi_s", point.xi_s}};
    j["result"] = result_to_json(result);

    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) throw std::runtime_error("cannot append to checkpoint '" + path + "'");
    out << j.dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("checkpoint write failed for '" + path + "'");
}

std::map<GridKey, EnsembleResult> checkpoint_load(const std::string& path, std::uint64_t config_hash) {
    std::map<GridKey, EnsembleResult> out;
    std::ifstream in(path);
    if (!in) return out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            // A torn final line from an interrupted run is expected; anything
            // else in the middle of the file is corruption worth reporting.
            if (in.peek() == std::char_traits<char>::eof()) break;
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": corrupt checkpoint record: " + e.what());
        }
        if (j.at("config_hash").get<std::uint64_t>() != config_hash) continue;
        SimParams point;
        point.L = j.at("point").at("L").get<int>();
        point.lambda = j.at("point").at("lambda").get<double>();
        point.xi_r = j.at("point").at("xi_r").get<double>();
        point.xi_s = j.at("point").at("xi_s").get<double>();
        out[grid_key(point)] = result_from_json(j.at("result"), point);
    }
    return out;
}

}  // namespace mipt
