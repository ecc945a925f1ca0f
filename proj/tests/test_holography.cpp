#include <gtest/gtest.h>

#include <numbers>

#include "scatcrypt/holography.hpp"
#include "support.hpp"

using namespace scatcrypt;
using testsupport::random_complex_vector;

namespace {

constexpr double k_unit = 2.0 * std::numbers::pi;

// 32x32 plane whose pitch puts the alpha_x = 0.4 carrier at a comfortable
// 0.3 cycles/pixel.
PlaneSpec demod_plane() { return PlaneSpec{Vec3::Zero(), 56.0, 56.0, 32, 32, "sensor"}; }

ComplexField tagged(const CVector& v, const std::string& tag) { return ComplexField{v, tag}; }

} // namespace

TEST(Holography, IntensityRecordBasics) {
    ComplexField ones{CVector::Ones(9), "sensor"};
    EXPECT_EQ(intensity_record(ones).values, RVector::Ones(9));

    ComplexField mixed{CVector::Constant(4, Complex(1.0, 1.0)), "sensor"};
    const RealField i = intensity_record(mixed);
    for (Eigen::Index n = 0; n < 4; ++n) EXPECT_DOUBLE_EQ(i.values(n), 2.0);

    ComplexField zero{CVector::Zero(5), "sensor"};
    EXPECT_EQ(intensity_record(zero).values.norm(), 0.0);
}

TEST(Holography, HologramRecordZeroField) {
    const PlaneSpec plane = demod_plane();
    const auto points = sample_plane(plane);
    ReferenceWave ref{1.7, 0.4, 0.0, "sensor"};
    const RealField h =
        hologram_record(tagged(CVector::Zero(plane.pixel_count()), "sensor"), ref, points, k_unit);
    for (Eigen::Index n = 0; n < h.values.size(); ++n)
        EXPECT_NEAR(h.values(n), 1.7 * 1.7, 1e-12);
}

TEST(Holography, HologramRecordConstructiveDoubling) {
    const PlaneSpec plane = demod_plane();
    const auto points = sample_plane(plane);
    ReferenceWave ref{0.8, 0.4, 0.1, "sensor"};
    const ComplexField psi_r = reference_field(ref, points, k_unit);
    const RealField h = hologram_record(psi_r, ref, points, k_unit);
    for (Eigen::Index n = 0; n < h.values.size(); ++n)
        EXPECT_NEAR(h.values(n), 4.0 * 0.8 * 0.8, 1e-12);
}

TEST(Holography, HologramRecordPixelArithmetic) {
    // field 1+j against unit reference at normal incidence: |2+j|^2 = 5.
    PlaneSpec plane{Vec3::Zero(), 1.0, 1.0, 1, 1, "sensor"};
    ReferenceWave ref{1.0, 0.0, 0.0, "sensor"};
    const RealField h = hologram_record(tagged(CVector::Constant(1, Complex(1.0, 1.0)), "sensor"),
                                        ref, sample_plane(plane), k_unit);
    EXPECT_NEAR(h.values(0), 5.0, 1e-12);
}

TEST(Holography, HologramRecordGeometryMismatch) {
    const PlaneSpec plane = demod_plane();
    ReferenceWave ref{1.0, 0.4, 0.0, "sensor"};
    EXPECT_THROW(hologram_record(tagged(CVector::Zero(plane.pixel_count()), "hologram"), ref,
                                 sample_plane(plane), k_unit),
                 GeometryMismatch);
    EXPECT_THROW(
        hologram_record(tagged(CVector::Zero(3), "sensor"), ref, sample_plane(plane), k_unit),
        GeometryMismatch);
}

TEST(Holography, ExpansionIdentity) {
    // H = |psi|^2 + |psi_R|^2 + 2 Re(psi psi_R^dagger), per pixel.
    const PlaneSpec plane = demod_plane();
    const auto points = sample_plane(plane);
    ReferenceWave ref{1.3, 0.4, 0.0, "sensor"};
    const ComplexField psi = tagged(random_complex_vector(plane.pixel_count(), 71), "sensor");
    const ComplexField psi_r = reference_field(ref, points, k_unit);

    const RealField h = hologram_record(psi, ref, points, k_unit);
    const RVector expansion = intensity_record(psi).values + intensity_record(psi_r).values +
                              2.0 * (psi.values.array() * psi_r.values.conjugate().array())
                                        .real()
                                        .matrix();
    EXPECT_LE((h.values - expansion).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Holography, CarrierSeparationNumbers) {
    const PlaneSpec plane = demod_plane(); // pitch 1.75
    ReferenceWave ref{1.0, 0.4, 0.0, "sensor"};
    auto [cx, cz] = carrier_cycles(ref, plane, k_unit);
    EXPECT_NEAR(cx, -0.3, 1e-12); // 0.4 * 1.75 = 0.7 wraps to -0.3
    EXPECT_NEAR(cz, 0.0, 1e-12);
    EXPECT_NEAR(carrier_separation(ref, plane, k_unit), 0.3, 1e-12);
    EXPECT_TRUE(carrier_separated(ref, plane, k_unit, 0.125));
    EXPECT_FALSE(carrier_separated(ref, plane, k_unit, 0.2));
}

TEST(Holography, DemodulateZeroField) {
    const PlaneSpec plane = demod_plane();
    const auto points = sample_plane(plane);
    ReferenceWave ref{2.0, 0.4, 0.0, "sensor"};
    const RealField h =
        hologram_record(tagged(CVector::Zero(plane.pixel_count()), "sensor"), ref, points, k_unit);
    const ComplexField out = demodulate(h, plane, ref, k_unit, 0.125);
    EXPECT_LE(out.values.cwiseAbs().maxCoeff(), 1e-10 * ref.amplitude * ref.amplitude);
}

TEST(Holography, DemodulateRoundTripInBand) {
    // One in-band plane-wave component; the round trip through the hologram
    // record must come back within 5%.
    const PlaneSpec plane = demod_plane();
    const auto points = sample_plane(plane);
    ReferenceWave ref{0.0, 0.4, 0.0, "sensor"}; // amplitude set below

    CVector psi(plane.pixel_count());
    for (int iz = 0; iz < plane.nz; ++iz)
        for (int ix = 0; ix < plane.nx; ++ix)
            psi(iz * plane.nx + ix) =
                0.6 * std::polar(1.0, 2.0 * std::numbers::pi * (2.0 * ix / plane.nx));
    ref.amplitude = psi.cwiseAbs().maxCoeff();

    const RealField h = hologram_record(tagged(psi, "sensor"), ref, points, k_unit);
    const ComplexField out = demodulate(h, plane, ref, k_unit, 0.125);
    EXPECT_LE((out.values - psi).norm(), 0.05 * psi.norm());
}

TEST(Holography, DemodulateSmoothFieldRoundTrip) {
    const PlaneSpec plane = demod_plane();
    const auto points = sample_plane(plane);
    ReferenceWave ref{1.0, 0.4, 0.0, "sensor"};

    // Smooth band-limited field: two low-frequency components.
    CVector psi(plane.pixel_count());
    for (int iz = 0; iz < plane.nz; ++iz)
        for (int ix = 0; ix < plane.nx; ++ix)
            psi(iz * plane.nx + ix) =
                0.4 * std::polar(1.0, 2.0 * std::numbers::pi * (ix * 1.0 / plane.nx)) +
                Complex(0.25, 0.1) * std::polar(1.0, -2.0 * std::numbers::pi * (iz * 2.0 / plane.nz));
    ref.amplitude = psi.cwiseAbs().maxCoeff();

    const RealField h = hologram_record(tagged(psi, "sensor"), ref, points, k_unit);
    const ComplexField out = demodulate(h, plane, ref, k_unit, 0.125);
    EXPECT_LE((out.values - psi).norm(), 0.05 * psi.norm());
}

TEST(Holography, DemodulateLinearity) {
    const PlaneSpec plane = demod_plane();
    ReferenceWave ref{1.4, 0.4, 0.0, "sensor"};
    const CVector h1 = random_complex_vector(plane.pixel_count(), 73);
    const CVector h2 = random_complex_vector(plane.pixel_count(), 79);
    const Complex c1(0.7, -0.4), c2(-1.1, 0.2);

    const CVector lhs = demodulate(CVector(c1 * h1 + c2 * h2), plane, ref, k_unit, 0.125).values;
    const CVector rhs = c1 * demodulate(h1, plane, ref, k_unit, 0.125).values +
                        c2 * demodulate(h2, plane, ref, k_unit, 0.125).values;
    EXPECT_LE((lhs - rhs).norm(), 1e-12 * lhs.norm());
}

TEST(Holography, DemodulateWarnsOnCarrierOverlap) {
    PlaneSpec plane{Vec3::Zero(), 32.0, 32.0, 32, 32, "sensor"}; // pitch 1: carrier aliases to 0
    ReferenceWave ref{1.0, 0.0, 0.0, "sensor"};
    std::vector<std::string> warnings;
    demodulate(CVector::Zero(plane.pixel_count()), plane, ref, k_unit, 0.125, &warnings);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("CarrierOverlap"), std::string::npos);
}
