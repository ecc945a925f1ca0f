#pragma once

#include <string>

#include <Eigen/Dense>

#include "scatcrypt/errors.hpp"

namespace scatcrypt {

/// Grayscale amplitude image in [0, 1], row-major with x fastest, matching
/// the sensor pixel ordering.
struct PlaintextImage {
    Eigen::VectorXd pixels;
    int nx = 0;
    int nz = 0;
    std::string source;

    int size() const { return nx * nz; }

    void validate() const {
        if (nx < 1 || nz < 1 || pixels.size() != static_cast<Eigen::Index>(nx) * nz)
            throw DimensionMismatch("image pixel count does not match nx * nz");
        if (pixels.size() > 0 && (pixels.minCoeff() < 0.0 || pixels.maxCoeff() > 1.0))
            throw DimensionMismatch("image values must lie in [0, 1]");
    }
};

/// Min-max normalization to [0, 1]; a constant input maps to all zeros.
inline Eigen::VectorXd minmax_normalize(const Eigen::VectorXd& v) {
    if (v.size() == 0) return v;
    const double lo = v.minCoeff();
    const double hi = v.maxCoeff();
    if (!(hi > lo)) return Eigen::VectorXd::Zero(v.size());
    return (v.array() - lo) / (hi - lo);
}

} // namespace scatcrypt
