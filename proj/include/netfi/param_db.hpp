#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "netfi/pipeline.hpp"

namespace netfi {

/// Named scalar parameter vector. This is the complete parameterization of a
/// model: materializing it needs no outside defaults.
using ThetaMap = std::map<std::string, double>;

namespace detail {

inline double theta_get(const ThetaMap& theta, const std::string& name) {
    auto it = theta.find(name);
    if (it == theta.end())
        throw std::invalid_argument("missing parameter '" + name + "'");
    return it->second;
}

inline void require(bool ok, const std::string& name, const char* what) {
    if (!ok)
        throw std::invalid_argument("parameter '" + name + "' out of domain: " + what);
}

} // namespace detail

/// Materialize model parameters from a named vector.
///
/// Names by type:
///   packet_loss: shape0..shape3, scale0..scale3, drop_prob0..drop_prob3,
///                t00..t33 (row-stochastic transition matrix)
///   delay:       d_min_ms, weight0..weightN-1, rate0..rateN-1 (weights are
///                normalized; branches are canonicalized by ascending rate so
///                permuting branches yields the identical model)
///   comm_loss:   trigger_prob, duration_min_ms, duration_max_ms, cooldown_ms
inline ModelParams params_from_theta(DegradationType type, const ThetaMap& theta) {
    using detail::require;
    using detail::theta_get;
    switch (type) {
        case DegradationType::PacketLoss: {
            std::array<double, 4> shape{}, scale{}, drop{};
            GilbertElliottParams::Matrix m{};
            for (int i = 0; i < 4; ++i) {
                std::string si = std::to_string(i);
                shape[i] = theta_get(theta, "shape" + si);
                scale[i] = theta_get(theta, "scale" + si);
                drop[i] = theta_get(theta, "drop_prob" + si);
                require(shape[i] > 0.0, "shape" + si, "must be > 0");
                require(scale[i] > 0.0, "scale" + si, "must be > 0");
                require(drop[i] >= 0.0 && drop[i] <= 1.0, "drop_prob" + si, "must be in [0, 1]");
                double row = 0.0;
                for (int j = 0; j < 4; ++j) {
                    std::string tij = "t" + si + std::to_string(j);
                    m[i][j] = theta_get(theta, tij);
                    require(m[i][j] >= 0.0 && m[i][j] <= 1.0, tij, "must be in [0, 1]");
                    row += m[i][j];
                }
                require(std::abs(row - 1.0) <= 1e-9, "t" + si + "*", "row must sum to 1");
            }
            return GilbertElliottParams(
                m,
                {LomaxParams(shape[0], scale[0]), LomaxParams(shape[1], scale[1]),
                 LomaxParams(shape[2], scale[2]), LomaxParams(shape[3], scale[3])},
                drop);
        }
        case DegradationType::Delay: {
            double d_min = theta_get(theta, "d_min_ms");
            require(d_min >= 0.0, "d_min_ms", "must be >= 0");
            std::vector<std::pair<double, double>> branches; // (rate, weight)
            for (std::size_t i = 0;; ++i) {
                std::string wi = "weight" + std::to_string(i);
                if (theta.find(wi) == theta.end()) break;
                double w = theta_get(theta, wi);
                double r = theta_get(theta, "rate" + std::to_string(i));
                require(w > 0.0, wi, "must be > 0");
                require(r > 0.0, "rate" + std::to_string(i), "must be > 0");
                branches.emplace_back(r, w);
            }
            require(!branches.empty(), "weight0", "at least one branch required");
            std::sort(branches.begin(), branches.end());
            std::vector<double> w, r;
            for (auto& [rate, weight] : branches) {
                r.push_back(rate);
                w.push_back(weight);
            }
            return HyperExpParams::normalized(d_min, std::move(w), std::move(r));
        }
        case DegradationType::CommLoss: {
            double p = theta_get(theta, "trigger_prob");
            double lo = theta_get(theta, "duration_min_ms");
            double hi = theta_get(theta, "duration_max_ms");
            double cd = theta_get(theta, "cooldown_ms");
            require(p >= 0.0 && p <= 1.0, "trigger_prob", "must be in [0, 1]");
            require(lo >= 0.0, "duration_min_ms", "must be >= 0");
            require(hi >= lo, "duration_max_ms", "must be >= duration_min_ms");
            require(cd >= 0.0, "cooldown_ms", "must be >= 0");
            return CommLossParams(p, lo, hi, cd);
        }
    }
    throw std::logic_error("unreachable degradation type");
}

inline ThetaMap theta_from_params(const ModelParams& params) {
    ThetaMap theta;
    if (const auto* ge = std::get_if<GilbertElliottParams>(&params)) {
        for (int i = 0; i < 4; ++i) {
            std::string si = std::to_string(i);
            theta["shape" + si] = ge->sojourn[i].shape;
            theta["scale" + si] = ge->sojourn[i].scale;
            theta["drop_prob" + si] = ge->drop_prob[i];
            for (int j = 0; j < 4; ++j)
                theta["t" + si + std::to_string(j)] = ge->transition[i][j];
        }
    } else if (const auto* he = std::get_if<HyperExpParams>(&params)) {
        theta["d_min_ms"] = he->d_min_ms;
        for (std::size_t i = 0; i < he->branches(); ++i) {
            theta["weight" + std::to_string(i)] = he->weights[i];
            theta["rate" + std::to_string(i)] = he->rates[i];
        }
    } else {
        const auto& cl = std::get<CommLossParams>(params);
        theta["trigger_prob"] = cl.trigger_prob;
        theta["duration_min_ms"] = cl.duration_min_ms;
        theta["duration_max_ms"] = cl.duration_max_ms;
        theta["cooldown_ms"] = cl.cooldown_ms;
    }
    return theta;
}

/// Outcome of one parameter fit, as persisted in the database.
struct FitResult {
    DegradationType type = DegradationType::Delay;
    double target = 0.0;
    ThetaMap theta;                                            // complete vector
    std::map<std::string, std::pair<double, double>> bounds;   // free params only
    double achieved = 0.0;
    double objective = 0.0; // (achieved - target)^2
    std::uint64_t generations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    std::uint64_t mc_num = 0;
    double mc_packet_interval_ms = 1.0;
    std::string created_at;
};

/// Persistent mapping (degradation type, target level) -> fitted parameters.
/// Lookups are exact on the key; there is no interpolation.
class FaultParameterDatabase {
public:
    static constexpr int kSchemaVersion = 1;

    using Key = std::pair<DegradationType, double>;

    void insert(FitResult result) {
        Key key{result.type, result.target};
        if (entries_.count(key))
            throw std::invalid_argument(std::string("duplicate database key (") +
                                        to_string(result.type) + ", " +
                                        format_target(result.target) + ")");
        entries_.emplace(key, std::move(result));
    }

    const FitResult* find(DegradationType type, double target) const {
        auto it = entries_.find({type, target});
        return it == entries_.end() ? nullptr : &it->second;
    }

    const std::map<Key, FitResult>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json doc;
        doc["version"] = kSchemaVersion;
        doc["entries"] = nlohmann::ordered_json::array();
        for (const auto& [key, e] : entries_) {
            nlohmann::ordered_json entry;
            entry["type"] = to_string(e.type);
            entry["target"] = e.target;
            entry["theta"] = nlohmann::ordered_json::object();
            for (const auto& [name, value] : e.theta) entry["theta"][name] = value;
            entry["bounds"] = nlohmann::ordered_json::object();
            for (const auto& [name, b] : e.bounds)
                entry["bounds"][name] = nlohmann::ordered_json::array({b.first, b.second});
            entry["achieved"] = e.achieved;
            entry["objective"] = e.objective;
            entry["generations"] = e.generations;
            entry["converged"] = e.converged;
            entry["seed"] = e.seed;
            entry["mc"] = {{"num", e.mc_num}, {"packet_interval_ms", e.mc_packet_interval_ms}};
            entry["created_at"] = e.created_at;
            doc["entries"].push_back(std::move(entry));
        }
        return doc;
    }

    static FaultParameterDatabase from_json(const nlohmann::ordered_json& doc) {
        if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer())
            throw std::runtime_error("parameter database: missing integer 'version'");
        if (doc["version"].get<int>() != kSchemaVersion)
            throw std::runtime_error("parameter database: unsupported schema version");
        if (!doc.contains("entries") || !doc["entries"].is_array())
            throw std::runtime_error("parameter database: missing 'entries' array");
        FaultParameterDatabase db;
        for (const auto& entry : doc["entries"]) {
            FitResult r;
            auto type = entry.contains("type") && entry["type"].is_string()
                            ? degradation_type_from_string(entry["type"].get<std::string>())
                            : std::nullopt;
            if (!type) throw std::runtime_error("parameter database: bad entry type");
            r.type = *type;
            r.target = field_number(entry, "target");
            if (!entry.contains("theta") || !entry["theta"].is_object())
                throw std::runtime_error("parameter database: entry missing 'theta'");
            for (const auto& [name, value] : entry["theta"].items()) {
                if (!value.is_number())
                    throw std::runtime_error("parameter database: theta values must be numbers");
                r.theta[name] = value.get<double>();
            }
            if (entry.contains("bounds"))
                for (const auto& [name, b] : entry["bounds"].items())
                    r.bounds[name] = {b.at(0).get<double>(), b.at(1).get<double>()};
            r.achieved = field_number(entry, "achieved");
            r.objective = entry.value("objective", 0.0);
            r.generations = entry.value("generations", std::uint64_t{0});
            r.converged = entry.value("converged", true);
            r.seed = entry.value("seed", std::uint64_t{0});
            if (entry.contains("mc")) {
                r.mc_num = entry["mc"].value("num", std::uint64_t{0});
                r.mc_packet_interval_ms = entry["mc"].value("packet_interval_ms", 1.0);
            }
            r.created_at = entry.value("created_at", std::string{});
            params_from_theta(r.type, r.theta); // validates the stored vector
            db.insert(std::move(r));
        }
        return db;
    }

    void save(const std::string& path) const {
        std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot write parameter database: " + tmp);
            out << to_json().dump(2) << '\n';
        }
        if (std::rename(tmp.c_str(), path.c_str()) != 0)
            throw std::runtime_error("cannot move parameter database into place: " + path);
    }

    static FaultParameterDatabase load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open parameter database: " + path);
        nlohmann::ordered_json doc;
        try {
            doc = nlohmann::ordered_json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error("parameter database parse error: " + std::string(e.what()));
        }
        return from_json(doc);
    }

private:
    static double field_number(const nlohmann::ordered_json& entry, const char* name) {
        if (!entry.contains(name) || !entry[name].is_number())
            throw std::runtime_error(std::string("parameter database: entry missing number '") +
                                     name + "'");
        return entry[name].get<double>();
    }

    static std::string format_target(double target) {
        std::ostringstream os;
        os << target;
        return os.str();
    }

    std::map<Key, FitResult> entries_;
};

} // namespace netfi
