#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "scatcrypt/geometry.hpp"
#include "scatcrypt/protocol.hpp"

namespace scatcrypt {

/// Parsed project config file: the scene plus the encryption tunables and the
/// registered users.
struct ProjectConfig {
    Scene scene;
    ProtocolConfig protocol;
    std::map<int, std::string> users;
    std::string path;
};

inline ProjectConfig parse_project_config(const nlohmann::json& j, std::string path = {}) {
    ProjectConfig cfg;
    cfg.path = std::move(path);
    cfg.scene = build_scene(j);

    if (j.contains("encryption")) {
        const nlohmann::json& e = j.at("encryption");
        cfg.protocol.total_states = e.value("L", 4);
        cfg.protocol.subset_size = e.value("subset_size", 3);
        cfg.protocol.mode = mode_from_string(e.value("mode", "field"));
        cfg.protocol.epsilon_rel = e.value("epsilon_rel", 1e-3);
        cfg.protocol.carrier_radius_nyquist = e.value("carrier_radius_nyquist", 0.25);
        if (e.contains("reference")) {
            const nlohmann::json& r = e.at("reference");
            cfg.protocol.ref_alpha_x = r.value("alpha_x", 0.4);
            cfg.protocol.ref_alpha_z = r.value("alpha_z", 0.0);
            cfg.protocol.ref_gain = r.value("gain", 1.0);
        }
    }
    if (j.contains("users"))
        for (const nlohmann::json& u : j.at("users"))
            cfg.users[u.at("id").get<int>()] = u.at("credential").get<std::string>();
    return cfg;
}

} // namespace scatcrypt
