#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "scatcrypt/errors.hpp"

namespace scatcrypt {

using Vec3 = Eigen::Vector3d;

/// Rectangular sampling plane with normal along y.  Pixel coordinates sit at
/// cell centers on a uniform nx-by-nz grid (pitch = extent / count).
struct PlaneSpec {
    Vec3 center{0.0, 0.0, 0.0};
    double extent_x = 0.0;
    double extent_z = 0.0;
    int nx = 0;
    int nz = 0;
    std::string tag;

    int pixel_count() const { return nx * nz; }
    double pitch_x() const { return extent_x / nx; }
    double pitch_z() const { return extent_z / nz; }

    void validate() const {
        if (nx < 1 || nz < 1)
            throw InvalidGeometry("plane '" + tag + "' needs nx >= 1 and nz >= 1");
        if (!(extent_x > 0.0) || !(extent_z > 0.0))
            throw InvalidGeometry("plane '" + tag + "' needs positive extents");
    }
};

/// Scattering volume: a box of extent_x by depth (along y) by extent_z holding
/// a regular gx*gy*gz particle grid.  Potentials are sampled from
/// [tau_min, tau_max]; jitter (fraction of a cell) displaces grid positions
/// and defaults to off.
struct MediumSpec {
    double extent_x = 0.0;
    double extent_z = 0.0;
    double depth = 0.0;
    int gx = 0, gy = 0, gz = 0;
    double tau_min = 0.0;
    double tau_max = 0.0;
    double standoff_hologram = 0.0;
    double standoff_sensor = 0.0;
    double jitter = 0.0;

    int particle_count() const { return gx * gy * gz; }

    void validate() const {
        if (gx < 1 || gy < 1 || gz < 1)
            throw InvalidGeometry("medium grid counts must satisfy gx*gy*gz >= 1");
        if (tau_min > tau_max)
            throw InvalidGeometry("medium potential range requires tau_min <= tau_max");
        if (!(standoff_hologram > 0.0) || !(standoff_sensor > 0.0))
            throw InvalidGeometry("medium standoffs must be positive");
        if (!(extent_x > 0.0) || !(extent_z > 0.0) || !(depth > 0.0))
            throw InvalidGeometry("medium box extents must be positive");
        if (jitter < 0.0 || jitter > 1.0)
            throw InvalidGeometry("medium jitter must lie in [0, 1]");
    }
};

/// Full simulation geometry.  The hologram plane sits at y = 0, the medium at
/// y in [standoff_hologram, standoff_hologram + depth], the sensor behind it.
/// All lengths are in wavelength units.
struct Scene {
    PlaneSpec hologram;
    PlaneSpec sensor;
    MediumSpec medium;
    double wavelength = 1.0;

    double wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }
    int hologram_pixels() const { return hologram.pixel_count(); } // M
    int sensor_pixels() const { return sensor.pixel_count(); }     // N
    double hologram_sensor_distance() const { return sensor.center.y() - hologram.center.y(); }

    /// Compact geometry fingerprint used to tag matrices and fields.
    std::string tag() const {
        std::ostringstream os;
        os << "holo" << hologram.nx << "x" << hologram.nz << "@" << hologram.extent_x << "x"
           << hologram.extent_z << ";sens" << sensor.nx << "x" << sensor.nz << "@"
           << sensor.extent_x << "x" << sensor.extent_z << ";med" << medium.gx << "x" << medium.gy
           << "x" << medium.gz << "@" << medium.extent_x << "x" << medium.depth << "x"
           << medium.extent_z << ";so" << medium.standoff_hologram << "," << medium.standoff_sensor
           << ";wl" << wavelength;
        return os.str();
    }
};

/// Plain mirror of the scene config file (see README for the JSON layout).
struct SceneConfig {
    double wavelength = 1.0;
    PlaneSpec hologram;
    PlaneSpec sensor;
    MediumSpec medium;
    std::optional<double> declared_hologram_sensor_distance;
};

inline SceneConfig scene_config_from_json(const nlohmann::json& j) {
    auto require = [](const nlohmann::json& node, const char* key) -> const nlohmann::json& {
        if (!node.contains(key))
            throw InvalidGeometry(std::string("scene config missing key '") + key + "'");
        return node.at(key);
    };

    SceneConfig cfg;
    cfg.wavelength = j.value("wavelength", 1.0);
    if (!(cfg.wavelength > 0.0)) throw InvalidGeometry("wavelength must be positive");

    auto parse_plane = [&](const nlohmann::json& node, const char* tag) {
        PlaneSpec p;
        p.extent_x = require(node, "extent_x").get<double>();
        p.extent_z = require(node, "extent_z").get<double>();
        p.nx = require(node, "nx").get<int>();
        p.nz = require(node, "nz").get<int>();
        p.tag = tag;
        return p;
    };
    cfg.hologram = parse_plane(require(j, "hologram"), "hologram");
    cfg.sensor = parse_plane(require(j, "sensor"), "sensor");

    const nlohmann::json& m = require(j, "medium");
    cfg.medium.extent_x = require(m, "extent_x").get<double>();
    cfg.medium.extent_z = require(m, "extent_z").get<double>();
    cfg.medium.depth = require(m, "depth").get<double>();
    cfg.medium.gx = require(m, "gx").get<int>();
    cfg.medium.gy = require(m, "gy").get<int>();
    cfg.medium.gz = require(m, "gz").get<int>();
    cfg.medium.tau_min = require(m, "tau_min").get<double>();
    cfg.medium.tau_max = require(m, "tau_max").get<double>();
    cfg.medium.standoff_hologram = require(m, "standoff_hologram").get<double>();
    cfg.medium.standoff_sensor = require(m, "standoff_sensor").get<double>();
    cfg.medium.jitter = m.value("jitter", 0.0);

    if (j.contains("hologram_sensor_distance"))
        cfg.declared_hologram_sensor_distance = j.at("hologram_sensor_distance").get<double>();
    return cfg;
}

/// Validates the config and places the planes: hologram at y = 0, sensor at
/// y = standoff_hologram + depth + standoff_sensor, both centered on the axis.
/// A declared hologram-sensor distance that disagrees with the standoff/depth
/// accounting is rejected.
inline Scene build_scene(const SceneConfig& cfg) {
    Scene scene;
    scene.wavelength = cfg.wavelength;
    scene.hologram = cfg.hologram;
    scene.sensor = cfg.sensor;
    scene.medium = cfg.medium;

    scene.hologram.tag = "hologram";
    scene.sensor.tag = "sensor";
    scene.hologram.validate();
    scene.sensor.validate();
    scene.medium.validate();

    const double distance =
        cfg.medium.standoff_hologram + cfg.medium.depth + cfg.medium.standoff_sensor;
    scene.hologram.center = Vec3(0.0, 0.0, 0.0);
    scene.sensor.center = Vec3(0.0, distance, 0.0);

    if (cfg.declared_hologram_sensor_distance) {
        const double declared = *cfg.declared_hologram_sensor_distance;
        if (std::abs(declared - distance) > 1e-9 * std::max(1.0, distance)) {
            std::ostringstream os;
            os << "declared hologram-sensor distance " << declared
               << " but standoffs + depth give " << distance;
            throw InvalidGeometry(os.str());
        }
    }
    return scene;
}

inline Scene build_scene(const nlohmann::json& j) { return build_scene(scene_config_from_json(j)); }

/// Pixel-center sample points, row-major with x fastest.  This ordering is
/// fixed globally; matrices, images, and files all follow it.
inline std::vector<Vec3> sample_plane(const PlaneSpec& p) {
    p.validate();
    std::vector<Vec3> points;
    points.reserve(static_cast<std::size_t>(p.pixel_count()));
    for (int iz = 0; iz < p.nz; ++iz) {
        const double z = p.center.z() + ((iz + 0.5) / p.nz - 0.5) * p.extent_z;
        for (int ix = 0; ix < p.nx; ++ix) {
            const double x = p.center.x() + ((ix + 0.5) / p.nx - 0.5) * p.extent_x;
            points.emplace_back(x, p.center.y(), z);
        }
    }
    return points;
}

/// Cell-center particle grid filling the medium box, x fastest, then y, then z.
inline std::vector<Vec3> medium_grid_points(const MediumSpec& m) {
    m.validate();
    std::vector<Vec3> points;
    points.reserve(static_cast<std::size_t>(m.particle_count()));
    for (int iz = 0; iz < m.gz; ++iz) {
        const double z = ((iz + 0.5) / m.gz - 0.5) * m.extent_z;
        for (int iy = 0; iy < m.gy; ++iy) {
            const double y = m.standoff_hologram + ((iy + 0.5) / m.gy) * m.depth;
            for (int ix = 0; ix < m.gx; ++ix) {
                const double x = ((ix + 0.5) / m.gx - 0.5) * m.extent_x;
                points.emplace_back(x, y, z);
            }
        }
    }
    return points;
}

} // namespace scatcrypt
