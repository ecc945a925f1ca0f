#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scatcrypt/errors.hpp"
#include "scatcrypt/geometry.hpp"
#include "scatcrypt/parallel.hpp"

namespace scatcrypt {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Sampled complex amplitudes over a tagged point set.
struct ComplexField {
    CVector values;
    std::string geometry;
};

/// Free-space scalar Green's function exp(+jkd) / (4 pi d) for the exp(-jwt)
/// time convention.  Symmetric in src and obs.
inline Complex green(const Vec3& src, const Vec3& obs, double k) {
    const double d = (obs - src).norm();
    if (d == 0.0) throw CoincidentPoints("source and observation point coincide");
    return std::polar(1.0 / (4.0 * std::numbers::pi * d), k * d);
}

/// Dense map of green() evaluations: rows indexed by observation points,
/// columns by source points.  Assembly is parallel over rows; each entry is
/// produced by exactly one worker, so the result is schedule-independent.
struct PropagationMatrix {
    CMatrix entries;
    std::string source_tag;
    std::string observation_tag;
};

inline PropagationMatrix propagation_matrix(std::span<const Vec3> src, std::span<const Vec3> obs,
                                            double k, std::string source_tag = {},
                                            std::string observation_tag = {}) {
    PropagationMatrix pm;
    pm.source_tag = std::move(source_tag);
    pm.observation_tag = std::move(observation_tag);
    pm.entries.resize(static_cast<Eigen::Index>(obs.size()), static_cast<Eigen::Index>(src.size()));

    std::atomic<long> bad_row{-1}, bad_col{-1};
    parallel_for(obs.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t n = begin; n < end; ++n) {
            for (std::size_t m = 0; m < src.size(); ++m) {
                const double d = (obs[n] - src[m]).norm();
                if (d == 0.0) {
                    bad_row.store(static_cast<long>(n));
                    bad_col.store(static_cast<long>(m));
                    return;
                }
                pm.entries(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) =
                    std::polar(1.0 / (4.0 * std::numbers::pi * d), k * d);
            }
        }
    });
    if (bad_row.load() >= 0) {
        std::ostringstream os;
        os << "observation point " << bad_row.load() << " coincides with source point "
           << bad_col.load();
        throw CoincidentPoints(os.str());
    }
    return pm;
}

/// Ideal off-axis plane reference wave (Leith-Upatnieks style): a tilted unit
/// phasor scaled by a positive amplitude.
struct ReferenceWave {
    double amplitude = 1.0;
    double alpha_x = 0.0; // direction cosines of the tilt
    double alpha_z = 0.0;
    std::string plane_tag;

    void validate() const {
        if (!(amplitude > 0.0)) throw InvalidGeometry("reference amplitude must be positive");
        if (alpha_x * alpha_x + alpha_z * alpha_z >= 1.0)
            throw InvalidGeometry("reference tilt requires alpha_x^2 + alpha_z^2 < 1");
    }
};

/// psi_R at each point: amplitude * exp(+jk (alpha_x x + alpha_z z)).
inline ComplexField reference_field(const ReferenceWave& ref, std::span<const Vec3> points,
                                    double k) {
    ref.validate();
    ComplexField f;
    f.geometry = ref.plane_tag;
    f.values.resize(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i)
        f.values(static_cast<Eigen::Index>(i)) =
            std::polar(ref.amplitude, k * (ref.alpha_x * points[i].x() + ref.alpha_z * points[i].z()));
    return f;
}

} // namespace scatcrypt
