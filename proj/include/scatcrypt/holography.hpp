#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scatcrypt/errors.hpp"
#include "scatcrypt/geometry.hpp"
#include "scatcrypt/wavefield.hpp"

namespace scatcrypt {

/// Real-valued per-pixel record (intensity, hologram, transparency).
struct RealField {
    RVector values;
    std::string geometry;
};

/// Ciphertext bundle: the physical transparency t (Leith-Upatnieks record of
/// the synthesized incident field against the reference wave), the reference
/// descriptor needed to read it, provenance, and the exact complex incident
/// field kept as a digital record for the field-algebra decryption pathway.
struct CiphertextHologram {
    RealField transparency;
    ReferenceWave reference;
    int q = 0;
    int q_to = 0;
    int block = 0;
    std::string key_id;
    CVector incident_field;
};

/// I(n) = |psi(R_n)|^2.
inline RealField intensity_record(const ComplexField& field) {
    return RealField{field.values.cwiseAbs2(), field.geometry};
}

/// H(n) = |psi(R_n) + psi_R(R_n)|^2 on the given pixel set.
inline RealField hologram_record(const ComplexField& field, const ReferenceWave& ref,
                                 std::span<const Vec3> points, double k) {
    if (field.geometry != ref.plane_tag)
        throw GeometryMismatch("field tagged '" + field.geometry + "' but reference tagged '" +
                               ref.plane_tag + "'");
    if (static_cast<std::size_t>(field.values.size()) != points.size())
        throw GeometryMismatch("field length does not match pixel count");
    const ComplexField r = reference_field(ref, points, k);
    return RealField{(field.values + r.values).cwiseAbs2(), field.geometry};
}

namespace detail {

/// Unitary DFT matrix, F(a,b) = exp(-2 pi j a b / n) / sqrt(n).
inline CMatrix dft_matrix(int n) {
    CMatrix f(n, n);
    const double w = -2.0 * std::numbers::pi / n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) f(a, b) = std::polar(1.0 / std::sqrt(double(n)), w * a * b);
    return f;
}

inline double signed_bin(int bin, int n) { return bin >= (n + 1) / 2 ? bin - n : bin; }

/// Wraps a frequency in cycles/pixel into (-0.5, 0.5].
inline double wrap_cycles(double f) {
    double w = std::fmod(f, 1.0);
    if (w > 0.5) w -= 1.0;
    if (w <= -0.5) w += 1.0;
    return w;
}

} // namespace detail

/// Discrete carrier frequency of the reference wave on a plane, in cycles per
/// pixel along x and z, wrapped into the principal band.
inline std::pair<double, double> carrier_cycles(const ReferenceWave& ref, const PlaneSpec& plane,
                                                double k) {
    const double lambda = 2.0 * std::numbers::pi / k;
    return {detail::wrap_cycles(ref.alpha_x * plane.pitch_x() / lambda),
            detail::wrap_cycles(ref.alpha_z * plane.pitch_z() / lambda)};
}

inline double carrier_separation(const ReferenceWave& ref, const PlaneSpec& plane, double k) {
    auto [cx, cz] = carrier_cycles(ref, plane, k);
    return std::hypot(cx, cz);
}

/// True when the first-order band (disc of radius r_c around the demodulated
/// origin) and the reference-centered zero-order terms stay apart.
inline bool carrier_separated(const ReferenceWave& ref, const PlaneSpec& plane, double k,
                              double band_radius_cycles) {
    return carrier_separation(ref, plane, k) >= 2.0 * band_radius_cycles;
}

/// Extracts the linear term psi psi_R^dagger / amplitude^2 from a hologram:
/// removes the mean (zero-order reference term), multiplies by
/// psi_R / amplitude^2 to shift the signal band to the origin, and keeps a
/// disc of radius `band_radius_cycles` (cycles/pixel) in the spatial-frequency
/// domain.  Round-trips hologram_record for fields whose spectrum fits inside
/// the carrier-separated band.  Accepts complex-valued combined holograms.
///
/// If the configured tilt fails the separation check a warning is appended to
/// `warnings` (when given) and demodulation proceeds.
inline ComplexField demodulate(const CVector& hologram_values, const PlaneSpec& plane,
                               const ReferenceWave& ref, double k, double band_radius_cycles,
                               std::vector<std::string>* warnings = nullptr) {
    ref.validate();
    if (hologram_values.size() != plane.pixel_count())
        throw GeometryMismatch("hologram length does not match plane pixel count");
    if (!carrier_separated(ref, plane, k, band_radius_cycles) && warnings)
        warnings->push_back("CarrierOverlap: tilt (" + std::to_string(ref.alpha_x) + ", " +
                            std::to_string(ref.alpha_z) +
                            ") separates orders by less than the band radius on plane '" +
                            plane.tag + "'");

    // DC-term removal, then carrier shift to baseband.
    CVector work = hologram_values.array() - hologram_values.mean();
    const ComplexField r = reference_field(ref, sample_plane(plane), k);
    work.array() *= r.values.array() / (ref.amplitude * ref.amplitude);

    using RowMajorMap = Eigen::Map<
        Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
    RowMajorMap grid(work.data(), plane.nz, plane.nx);

    const CMatrix fz = detail::dft_matrix(plane.nz);
    const CMatrix fx = detail::dft_matrix(plane.nx);
    CMatrix spectrum = fz * grid * fx.transpose();

    const double r2 = band_radius_cycles * band_radius_cycles;
    for (int bz = 0; bz < plane.nz; ++bz) {
        const double uz = detail::signed_bin(bz, plane.nz) / plane.nz;
        for (int bx = 0; bx < plane.nx; ++bx) {
            const double ux = detail::signed_bin(bx, plane.nx) / plane.nx;
            if (ux * ux + uz * uz > r2) spectrum(bz, bx) = 0.0;
        }
    }

    CMatrix filtered = fz.adjoint() * spectrum * fx.conjugate();
    ComplexField out;
    out.geometry = plane.tag;
    out.values.resize(plane.pixel_count());
    for (int iz = 0; iz < plane.nz; ++iz)
        for (int ix = 0; ix < plane.nx; ++ix) out.values(iz * plane.nx + ix) = filtered(iz, ix);
    return out;
}

inline ComplexField demodulate(const RealField& hologram, const PlaneSpec& plane,
                               const ReferenceWave& ref, double k, double band_radius_cycles,
                               std::vector<std::string>* warnings = nullptr) {
    if (hologram.geometry != plane.tag)
        throw GeometryMismatch("hologram tagged '" + hologram.geometry + "' but plane is '" +
                               plane.tag + "'");
    return demodulate(hologram.values.cast<Complex>().eval(), plane, ref, k, band_radius_cycles,
                      warnings);
}

} // namespace scatcrypt
