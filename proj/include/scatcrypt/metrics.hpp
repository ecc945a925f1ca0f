#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "scatcrypt/errors.hpp"
#include "scatcrypt/image.hpp"

namespace scatcrypt {

/// Standard SSIM configuration: 11x11 Gaussian window with sigma 1.5,
/// k1 = 0.01, k2 = 0.03, unit dynamic range.  Windows are evaluated on valid
/// positions only (no padding).
struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double dynamic_range = 1.0;
    double k1 = 0.01;
    double k2 = 0.03;

    void validate() const {
        if (window < 3 || window % 2 == 0)
            throw WindowTooLarge("SSIM window side must be odd and >= 3");
        if (!(dynamic_range > 0.0) || !(k1 > 0.0) || !(k2 > 0.0))
            throw WindowTooLarge("SSIM constants must be positive");
    }
};

namespace detail {

inline Eigen::VectorXd gaussian_taps(int side, double sigma) {
    Eigen::VectorXd w(side);
    const double c = (side - 1) / 2.0;
    for (int i = 0; i < side; ++i) w(i) = std::exp(-0.5 * std::pow((i - c) / sigma, 2));
    return w;
}

using Grid = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Valid-region weighted window means via separable passes: horizontal taps
/// first, vertical taps second.  Output is (nz - side + 1) x (nx - side + 1).
inline Grid window_means(const Grid& img, const Eigen::VectorXd& taps_x,
                         const Eigen::VectorXd& taps_z) {
    const int side_x = static_cast<int>(taps_x.size());
    const int side_z = static_cast<int>(taps_z.size());
    Grid horiz(img.rows(), img.cols() - side_x + 1);
    for (Eigen::Index r = 0; r < horiz.rows(); ++r)
        for (Eigen::Index c = 0; c < horiz.cols(); ++c)
            horiz(r, c) = img.row(r).segment(c, side_x).dot(taps_x);
    Grid out(img.rows() - side_z + 1, horiz.cols());
    for (Eigen::Index r = 0; r < out.rows(); ++r)
        for (Eigen::Index c = 0; c < out.cols(); ++c)
            out(r, c) = horiz.col(c).segment(r, side_z).dot(taps_z);
    return out;
}

} // namespace detail

/// Mean structural similarity over sliding Gaussian-weighted windows:
///   [(2 mu_a mu_b + C1)(2 sigma_ab + C2)] /
///   [(mu_a^2 + mu_b^2 + C1)(sigma_a^2 + sigma_b^2 + C2)]
/// with C1 = (k1 Lr)^2 and C2 = (k2 Lr)^2.  Symmetric in (a, b), bounded by
/// [-1, 1], and equal to 1 iff the windows agree.
inline double ssim(const PlaintextImage& a, const PlaintextImage& b,
                   const SsimParams& params = {}) {
    params.validate();
    if (a.nx != b.nx || a.nz != b.nz || a.pixels.size() != b.pixels.size())
        throw DimensionMismatch("SSIM inputs must share dimensions");
    if (params.window > a.nx || params.window > a.nz)
        throw WindowTooLarge("SSIM window exceeds image dimensions");

    // The 2D window is the outer product of 1D taps; normalizing each factor
    // makes the product sum to one.
    Eigen::VectorXd taps = detail::gaussian_taps(params.window, params.sigma);
    taps /= taps.sum();

    using detail::Grid;
    const Grid ga = Eigen::Map<const Grid>(a.pixels.data(), a.nz, a.nx);
    const Grid gb = Eigen::Map<const Grid>(b.pixels.data(), b.nz, b.nx);

    const Grid mu_a = detail::window_means(ga, taps, taps);
    const Grid mu_b = detail::window_means(gb, taps, taps);
    const Grid raw_aa = detail::window_means(ga.cwiseProduct(ga), taps, taps);
    const Grid raw_bb = detail::window_means(gb.cwiseProduct(gb), taps, taps);
    const Grid raw_ab = detail::window_means(ga.cwiseProduct(gb), taps, taps);

    const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
    const double c2 = std::pow(params.k2 * params.dynamic_range, 2);

    double sum = 0.0;
    for (Eigen::Index r = 0; r < mu_a.rows(); ++r) {
        for (Eigen::Index c = 0; c < mu_a.cols(); ++c) {
            const double ma = mu_a(r, c), mb = mu_b(r, c);
            const double va = raw_aa(r, c) - ma * ma;
            const double vb = raw_bb(r, c) - mb * mb;
            const double vab = raw_ab(r, c) - ma * mb;
            sum += ((2.0 * ma * mb + c1) * (2.0 * vab + c2)) /
                   ((ma * ma + mb * mb + c1) * (va + vb + c2));
        }
    }
    return sum / (double(mu_a.rows()) * double(mu_a.cols()));
}

struct MsePsnr {
    double mse = 0.0;
    double psnr_db = 0.0; // +infinity when mse == 0
};

inline MsePsnr mse_psnr(const PlaintextImage& a, const PlaintextImage& b,
                        double dynamic_range = 1.0) {
    if (a.nx != b.nx || a.nz != b.nz || a.pixels.size() != b.pixels.size())
        throw DimensionMismatch("MSE/PSNR inputs must share dimensions");
    MsePsnr out;
    out.mse = (a.pixels - b.pixels).squaredNorm() / a.pixels.size();
    out.psnr_db = out.mse == 0.0
                      ? std::numeric_limits<double>::infinity()
                      : 10.0 * std::log10(dynamic_range * dynamic_range / out.mse);
    return out;
}

} // namespace scatcrypt
