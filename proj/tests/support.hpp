#pragma once

// Shared helpers for the test suites: small scenes, random data, and the
// independent oracles the numerical checks are frozen against.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "scatcrypt/foldylax.hpp"
#include "scatcrypt/geometry.hpp"
#include "scatcrypt/image.hpp"
#include "scatcrypt/metrics.hpp"
#include "scatcrypt/wavefield.hpp"

namespace testsupport {

using scatcrypt::CMatrix;
using scatcrypt::Complex;
using scatcrypt::CVector;
using scatcrypt::Vec3;

inline CMatrix random_complex_matrix(int rows, int cols, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = Complex(u(gen), u(gen));
    return m;
}

inline CVector random_complex_vector(int n, unsigned seed) {
    return random_complex_matrix(n, 1, seed).col(0);
}

inline Eigen::VectorXd random_unit_vector(int n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = u(gen);
    return v;
}

/// Tiny scene for fast end-to-end style unit tests.
inline scatcrypt::Scene tiny_scene(int holo_n = 6, int sensor_n = 5, int gx = 2, int gy = 2,
                                   int gz = 2) {
    scatcrypt::SceneConfig cfg;
    cfg.wavelength = 1.0;
    cfg.hologram = {scatcrypt::Vec3::Zero(), 12.0, 12.0, holo_n, holo_n, "hologram"};
    cfg.sensor = {scatcrypt::Vec3::Zero(), 14.0, 14.0, sensor_n, sensor_n, "sensor"};
    cfg.medium.extent_x = 10.0;
    cfg.medium.extent_z = 10.0;
    cfg.medium.depth = 6.0;
    cfg.medium.gx = gx;
    cfg.medium.gy = gy;
    cfg.medium.gz = gz;
    cfg.medium.tau_min = -11.0;
    cfg.medium.tau_max = -3.0;
    cfg.medium.standoff_hologram = 4.0;
    cfg.medium.standoff_sensor = 4.0;
    return scatcrypt::build_scene(cfg);
}

/// Paper-geometry scene (35x35 hologram over 64x64, 32x32 sensor over 70x70,
/// 70x70x50 medium with 10-lambda standoffs) with a configurable grid.
inline scatcrypt::Scene paper_scene(int gx = 20, int gy = 15, int gz = 20) {
    scatcrypt::SceneConfig cfg;
    cfg.wavelength = 1.0;
    cfg.hologram = {scatcrypt::Vec3::Zero(), 64.0, 64.0, 35, 35, "hologram"};
    cfg.sensor = {scatcrypt::Vec3::Zero(), 70.0, 70.0, 32, 32, "sensor"};
    cfg.medium.extent_x = 70.0;
    cfg.medium.extent_z = 70.0;
    cfg.medium.depth = 50.0;
    cfg.medium.gx = gx;
    cfg.medium.gy = gy;
    cfg.medium.gz = gz;
    cfg.medium.tau_min = -11.0;
    cfg.medium.tau_max = -3.0;
    cfg.medium.standoff_hologram = 10.0;
    cfg.medium.standoff_sensor = 10.0;
    cfg.declared_hologram_sensor_distance = 70.0;
    return scatcrypt::build_scene(cfg);
}

/// Neumann-series oracle for the Foldy-Lax solve: sums (G_pp diag(tau))^n psi
/// to machine precision.  Valid when the coupling spectral radius is < 1.
inline CVector neumann_series_oracle(const CMatrix& coupling, const CVector& incident,
                                     int max_terms = 400) {
    CVector sum = incident;
    CVector term = incident;
    for (int n = 0; n < max_terms; ++n) {
        term = coupling * term;
        sum += term;
        if (term.norm() <= 1e-16 * sum.norm()) break;
    }
    return sum;
}

inline double spectral_radius(const CMatrix& m) {
    Eigen::ComplexEigenSolver<CMatrix> eig(m, false);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

/// Dense least-squares oracle for the truncated pseudoinverse checks.
inline CVector least_squares_oracle(const CMatrix& k, const CVector& target) {
    return k.completeOrthogonalDecomposition().solve(target);
}

/// Direct per-window SSIM evaluation with explicit 2D Gaussian weights;
/// deliberately the naive algorithm, independent of the separable-pass
/// implementation under test.
inline double ssim_brute_force(const scatcrypt::PlaintextImage& a,
                               const scatcrypt::PlaintextImage& b,
                               const scatcrypt::SsimParams& p) {
    const int side = p.window;
    Eigen::MatrixXd w(side, side);
    const double c = (side - 1) / 2.0;
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
            w(i, j) = std::exp(-0.5 * ((i - c) * (i - c) + (j - c) * (j - c)) / (p.sigma * p.sigma));
    w /= w.sum();

    const double c1 = std::pow(p.k1 * p.dynamic_range, 2);
    const double c2 = std::pow(p.k2 * p.dynamic_range, 2);
    auto at = [&](const scatcrypt::PlaintextImage& img, int iz, int ix) {
        return img.pixels(iz * img.nx + ix);
    };

    double total = 0.0;
    int windows = 0;
    for (int z0 = 0; z0 + side <= a.nz; ++z0) {
        for (int x0 = 0; x0 + side <= a.nx; ++x0) {
            double mu_a = 0.0, mu_b = 0.0;
            for (int i = 0; i < side; ++i)
                for (int j = 0; j < side; ++j) {
                    mu_a += w(i, j) * at(a, z0 + i, x0 + j);
                    mu_b += w(i, j) * at(b, z0 + i, x0 + j);
                }
            double va = 0.0, vb = 0.0, vab = 0.0;
            for (int i = 0; i < side; ++i)
                for (int j = 0; j < side; ++j) {
                    const double da = at(a, z0 + i, x0 + j) - mu_a;
                    const double db = at(b, z0 + i, x0 + j) - mu_b;
                    va += w(i, j) * da * da;
                    vb += w(i, j) * db * db;
                    vab += w(i, j) * da * db;
                }
            total += ((2 * mu_a * mu_b + c1) * (2 * vab + c2)) /
                     ((mu_a * mu_a + mu_b * mu_b + c1) * (va + vb + c2));
            ++windows;
        }
    }
    return total / windows;
}

/// Bilinear resampling, used to correlate ciphertexts against plaintexts of a
/// different resolution.
inline Eigen::VectorXd bilinear_resample(const Eigen::VectorXd& src, int sx, int sz, int dx,
                                         int dz) {
    Eigen::VectorXd out(dx * dz);
    for (int z = 0; z < dz; ++z) {
        const double fz = (z + 0.5) * sz / dz - 0.5;
        const int z0 = std::clamp(int(std::floor(fz)), 0, sz - 1);
        const int z1 = std::min(z0 + 1, sz - 1);
        const double tz = std::clamp(fz - z0, 0.0, 1.0);
        for (int x = 0; x < dx; ++x) {
            const double fx = (x + 0.5) * sx / dx - 0.5;
            const int x0 = std::clamp(int(std::floor(fx)), 0, sx - 1);
            const int x1 = std::min(x0 + 1, sx - 1);
            const double tx = std::clamp(fx - x0, 0.0, 1.0);
            const double v0 = (1 - tx) * src(z0 * sx + x0) + tx * src(z0 * sx + x1);
            const double v1 = (1 - tx) * src(z1 * sx + x0) + tx * src(z1 * sx + x1);
            out(z * dx + x) = (1 - tz) * v0 + tz * v1;
        }
    }
    return out;
}

/// Normalized cross-correlation of two equal-length vectors (mean-removed).
inline double normalized_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::VectorXd da = a.array() - a.mean();
    const Eigen::VectorXd db = b.array() - b.mean();
    const double denom = da.norm() * db.norm();
    return denom > 0.0 ? std::abs(da.dot(db)) / denom : 0.0;
}

/// Normalized correlation of complex matrices, |<A,B>| / (|A||B|).
inline double matrix_correlation(const CMatrix& a, const CMatrix& b) {
    const Complex inner = (a.conjugate().cwiseProduct(b)).sum();
    return std::abs(inner) / (a.norm() * b.norm());
}

/// Smooth, strictly band-limited test image: a DC level plus a few low
/// spatial frequency cosines, scaled into [0, 1].
inline scatcrypt::PlaintextImage band_limited_image(int nx, int nz, double max_cycles_per_px) {
    scatcrypt::PlaintextImage img;
    img.nx = nx;
    img.nz = nz;
    img.source = "synthetic-band-limited";
    img.pixels.resize(nx * nz);
    const double f1 = std::min(1.0 / nx, max_cycles_per_px / 2);
    const double f2 = std::min(2.0 / nz, max_cycles_per_px / 2);
    for (int z = 0; z < nz; ++z)
        for (int x = 0; x < nx; ++x)
            img.pixels(z * nx + x) = 0.5 + 0.22 * std::cos(2 * std::numbers::pi * f1 * x) +
                                     0.18 * std::sin(2 * std::numbers::pi * f2 * z) +
                                     0.08 * std::cos(2 * std::numbers::pi * (f1 * x + f2 * z));
    img.pixels = scatcrypt::minmax_normalize(img.pixels);
    return img;
}

/// Natural-image stand-in: smooth blobs and an edge, normalized to [0, 1].
inline scatcrypt::PlaintextImage shapes_image(int nx, int nz, unsigned seed = 5) {
    scatcrypt::PlaintextImage img;
    img.nx = nx;
    img.nz = nz;
    img.source = "synthetic-shapes";
    img.pixels.resize(nx * nz);
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.25, 0.75);
    const double cx1 = u(gen) * nx, cz1 = u(gen) * nz;
    const double cx2 = u(gen) * nx, cz2 = u(gen) * nz;
    for (int z = 0; z < nz; ++z) {
        for (int x = 0; x < nx; ++x) {
            const double g1 = std::exp(-((x - cx1) * (x - cx1) + (z - cz1) * (z - cz1)) /
                                       (2.0 * 0.02 * nx * nx));
            const double g2 = std::exp(-((x - cx2) * (x - cx2) + (z - cz2) * (z - cz2)) /
                                       (2.0 * 0.05 * nx * nx));
            const double ramp = 0.3 * double(z) / nz;
            const double bar = (x > nx / 2 && x < nx / 2 + std::max(2, nx / 8)) ? 0.35 : 0.0;
            img.pixels(z * nx + x) = 0.15 + 0.8 * g1 + 0.5 * g2 + ramp + bar;
        }
    }
    img.pixels = scatcrypt::minmax_normalize(img.pixels);
    return img;
}

} // namespace testsupport
