#include <gtest/gtest.h>

#include "scatcrypt/foldylax.hpp"
#include "support.hpp"

using namespace scatcrypt;
using testsupport::neumann_series_oracle;
using testsupport::spectral_radius;

namespace {
constexpr double k_unit = 2.0 * std::numbers::pi;
}

TEST(FoldyLax, SampleStatePaperMedium) {
    MediumSpec medium{70.0, 70.0, 50.0, 20, 15, 20, -11.0, -3.0, 10.0, 10.0, 0.0};
    const ScatteringState state = sample_state(medium, 1, 42);
    ASSERT_EQ(state.positions.size(), 6000u);
    ASSERT_EQ(state.potentials.size(), 6000);
    for (Eigen::Index i = 0; i < state.potentials.size(); ++i) {
        EXPECT_GE(state.potentials(i).real(), -11.0);
        EXPECT_LE(state.potentials(i).real(), -3.0);
        EXPECT_EQ(state.potentials(i).imag(), 0.0);
    }
    // Uniform[-11, -3] has mean -7; the CLT bound for 6000 draws is well
    // inside +-0.3.
    EXPECT_NEAR(state.potentials.real().mean(), -7.0, 0.3);
}

TEST(FoldyLax, SampleStateDeterministic) {
    MediumSpec medium{10.0, 10.0, 6.0, 3, 2, 3, -11.0, -3.0, 4.0, 4.0, 0.0};
    const ScatteringState a = sample_state(medium, 2, 7);
    const ScatteringState b = sample_state(medium, 2, 7);
    EXPECT_EQ((a.potentials - b.potentials).norm(), 0.0);
    for (std::size_t i = 0; i < a.positions.size(); ++i)
        EXPECT_EQ((a.positions[i] - b.positions[i]).norm(), 0.0);

    const ScatteringState c = sample_state(medium, 3, 7);
    EXPECT_GT((a.potentials - c.potentials).norm(), 0.0);
}

TEST(FoldyLax, StatesDifferAcrossIndices) {
    MediumSpec medium{10.0, 10.0, 6.0, 2, 2, 2, -11.0, -3.0, 4.0, 4.0, 0.0};
    const ScatteringState s1 = sample_state(medium, 1, 9);
    const ScatteringState s2 = sample_state(medium, 2, 9);
    EXPECT_GT((s1.potentials - s2.potentials).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(FoldyLax, SolveSingleParticleIdentity) {
    MediumSpec medium{2.0, 2.0, 1.0, 1, 1, 1, -11.0, -3.0, 1.0, 1.0, 0.0};
    const ScatteringState state = sample_state(medium, 1, 3);
    ComplexField incident{testsupport::random_complex_vector(1, 17), "particles"};
    const ComplexField exciting = solve_exciting_fields(state, incident, k_unit);
    EXPECT_NEAR(std::abs(exciting.values(0) - incident.values(0)), 0.0, 1e-15);
}

TEST(FoldyLax, SolveZeroPotentialIdentity) {
    MediumSpec medium{6.0, 6.0, 4.0, 2, 2, 2, 0.0, 0.0, 2.0, 2.0, 0.0};
    const ScatteringState state = sample_state(medium, 1, 3);
    ComplexField incident{testsupport::random_complex_vector(8, 19), "particles"};
    const ComplexField exciting = solve_exciting_fields(state, incident, k_unit);
    EXPECT_NEAR((exciting.values - incident.values).norm(), 0.0, 1e-15);
}

TEST(FoldyLax, SolveMatchesNeumannSeries) {
    // Two particles with weak coupling: the exact solve must agree with the
    // brute-force multiple-scattering series.
    MediumSpec medium{4.0, 4.0, 2.0, 2, 1, 1, -0.9, -0.8, 2.0, 2.0, 0.0};
    const ScatteringState state = sample_state(medium, 1, 23);
    const CMatrix coupling = coupling_matrix(state, k_unit);
    ASSERT_LT(spectral_radius(coupling), 0.3);

    const CVector incident = testsupport::random_complex_vector(2, 29);
    const ComplexField exciting =
        solve_exciting_fields(state, ComplexField{incident, "particles"}, k_unit);
    const CVector oracle = neumann_series_oracle(coupling, incident);
    EXPECT_LE((exciting.values - oracle).norm(), 1e-8 * incident.norm());
}

TEST(FoldyLax, SolveResidualContract) {
    MediumSpec medium{10.0, 10.0, 6.0, 3, 3, 3, -11.0, -3.0, 4.0, 4.0, 0.0};
    const ScatteringState state = sample_state(medium, 1, 31);
    FoldyLaxSolver solver(state, k_unit);
    const CMatrix coupling = coupling_matrix(state, k_unit);
    const CVector incident = testsupport::random_complex_vector(27, 37);
    const CVector exciting = solver.solve(incident);
    const CVector residual = exciting - coupling * exciting - incident;
    EXPECT_LE(residual.norm(), 1e-10 * incident.norm());
}

TEST(FoldyLax, ScatteringMatrixSingleParticleClosedForm) {
    SceneConfig cfg;
    cfg.hologram = {Vec3::Zero(), 6.0, 6.0, 3, 3, "hologram"};
    cfg.sensor = {Vec3::Zero(), 8.0, 8.0, 2, 2, "sensor"};
    cfg.medium = {4.0, 4.0, 2.0, 1, 1, 1, -7.5, -7.5, 3.0, 3.0, 0.0};
    const Scene scene = build_scene(cfg);
    const ScatteringState state = sample_state(scene.medium, 1, 5);
    ASSERT_EQ(state.positions.size(), 1u);
    const Complex tau = state.potentials(0);
    const Vec3 particle = state.positions[0];

    const ScatteringMatrix sm = scattering_matrix(state, scene);
    const auto holo_pts = sample_plane(scene.hologram);
    const auto sensor_pts = sample_plane(scene.sensor);
    ASSERT_EQ(sm.entries.rows(), 4);
    ASSERT_EQ(sm.entries.cols(), 9);
    for (Eigen::Index n = 0; n < sm.entries.rows(); ++n) {
        for (Eigen::Index m = 0; m < sm.entries.cols(); ++m) {
            const Complex expected = tau *
                                     green(particle, sensor_pts[std::size_t(n)], scene.wavenumber()) *
                                     green(holo_pts[std::size_t(m)], particle, scene.wavenumber());
            EXPECT_NEAR(std::abs(sm.entries(n, m) - expected), 0.0, 1e-12);
        }
    }
}

TEST(FoldyLax, ScatteringMatrixZeroPotentials) {
    Scene scene = testsupport::tiny_scene();
    scene.medium.tau_min = scene.medium.tau_max = 0.0;
    const ScatteringState state = sample_state(scene.medium, 1, 3);
    const ScatteringMatrix sm = scattering_matrix(state, scene);
    EXPECT_EQ(sm.entries.norm(), 0.0);
}

TEST(FoldyLax, ScatteringMatrixStatesVisiblyDistinct) {
    // Reduced-scale version of the four-state distinctness observation:
    // pairwise normalized correlations of the state matrices stay below 0.5.
    const Scene scene = testsupport::tiny_scene(8, 8, 3, 3, 3);
    std::vector<ScatteringMatrix> sms;
    for (int l = 1; l <= 4; ++l) sms.push_back(scattering_matrix(sample_state(scene.medium, l, 77), scene));
    for (std::size_t i = 0; i < sms.size(); ++i)
        for (std::size_t j = i + 1; j < sms.size(); ++j)
            EXPECT_LT(testsupport::matrix_correlation(sms[i].entries, sms[j].entries), 0.5)
                << "states " << i + 1 << " and " << j + 1;
}

TEST(FoldyLax, BornLimit) {
    // Scale all potentials by epsilon: K / epsilon must approach the first
    // Born approximation G_out diag(tau0) G_in.
    SceneConfig cfg;
    cfg.hologram = {Vec3::Zero(), 8.0, 8.0, 3, 3, "hologram"};
    cfg.sensor = {Vec3::Zero(), 8.0, 8.0, 3, 3, "sensor"};
    // Two well-separated weak scatterers keep the second-order term far below
    // the comparison tolerance at epsilon = 1e-4.
    cfg.medium = {32.0, 4.0, 4.0, 2, 1, 1, -0.5, -0.25, 6.0, 6.0, 0.0};
    const Scene scene = build_scene(cfg);
    ScatteringState state = sample_state(scene.medium, 1, 13);

    const double k = scene.wavenumber();
    const auto holo_pts = sample_plane(scene.hologram);
    const auto sensor_pts = sample_plane(scene.sensor);
    const CMatrix g_in = propagation_matrix(holo_pts, state.positions, k).entries;
    const CMatrix g_out = propagation_matrix(state.positions, sensor_pts, k).entries;
    const CMatrix born = g_out * state.potentials.asDiagonal() * g_in;

    const double eps = 1e-4;
    ScatteringState scaled = state;
    scaled.potentials *= eps;
    const ScatteringMatrix sm = scattering_matrix(scaled, scene);
    EXPECT_LE((sm.entries / eps - born).norm(), 1e-6 * born.norm());
}

TEST(FoldyLax, ForwardMapLinearity) {
    const Scene scene = testsupport::tiny_scene();
    const ScatteringState state = sample_state(scene.medium, 1, 41);
    const ScatteringMatrix sm = scattering_matrix(state, scene);
    const CVector psi1 = testsupport::random_complex_vector(scene.hologram_pixels(), 43);
    const CVector psi2 = testsupport::random_complex_vector(scene.hologram_pixels(), 47);
    const Complex a(0.3, -1.2), b(-0.7, 0.4);
    const CVector lhs = sm.entries * (a * psi1 + b * psi2);
    const CVector rhs = a * (sm.entries * psi1) + b * (sm.entries * psi2);
    EXPECT_LE((lhs - rhs).norm(), 1e-12 * lhs.norm());
}

TEST(FoldyLax, ScatteringMatrixDeterministic) {
    const Scene scene = testsupport::tiny_scene();
    const ScatteringMatrix a = scattering_matrix(sample_state(scene.medium, 2, 53), scene);
    const ScatteringMatrix b = scattering_matrix(sample_state(scene.medium, 2, 53), scene);
    EXPECT_EQ((a.entries - b.entries).norm(), 0.0);
}

TEST(FoldyLax, JitterStaysInsideCell) {
    MediumSpec medium{8.0, 8.0, 4.0, 2, 2, 2, -5.0, -4.0, 2.0, 2.0, 0.5};
    const ScatteringState jittered = sample_state(medium, 1, 61);
    medium.jitter = 0.0;
    const ScatteringState regular = sample_state(medium, 1, 61);
    for (std::size_t i = 0; i < jittered.positions.size(); ++i) {
        const Vec3 d = jittered.positions[i] - regular.positions[i];
        EXPECT_LE(std::abs(d.x()), 0.5 * 0.5 * 8.0 / 2);
        EXPECT_LE(std::abs(d.y()), 0.5 * 0.5 * 4.0 / 2);
        EXPECT_LE(std::abs(d.z()), 0.5 * 0.5 * 8.0 / 2);
        EXPECT_GT(d.norm(), 0.0);
    }
}
