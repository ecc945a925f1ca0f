#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scatcrypt/errors.hpp"
#include "scatcrypt/geometry.hpp"
#include "scatcrypt/parallel.hpp"
#include "scatcrypt/rng.hpp"
#include "scatcrypt/wavefield.hpp"

namespace scatcrypt {

/// One realization of the dynamic medium: particle positions plus complex
/// scattering potentials.  Default sampling draws real potentials uniformly
/// from [tau_min, tau_max]; the complex type leaves room for extensions.
struct ScatteringState {
    std::vector<Vec3> positions;
    CVector potentials;
    int state_index = 0;
    std::uint64_t seed = 0;
};

/// Dense N-by-M map from hologram-plane samples to sensor-plane scattered
/// field samples.
struct ScatteringMatrix {
    CMatrix entries;
    std::string scene_tag;
    std::string provenance;
};

/// Draws state `state_index` of the medium: grid positions (optionally
/// jittered within a cell) and i.i.d. uniform potentials.  Deterministic in
/// (seed, state_index).
inline ScatteringState sample_state(const MediumSpec& medium, int state_index,
                                    std::uint64_t seed) {
    medium.validate();
    ScatteringState state;
    state.state_index = state_index;
    state.seed = seed;
    state.positions = medium_grid_points(medium);

    Rng rng(derive_seed(seed, "state", static_cast<std::uint64_t>(state_index)));
    if (medium.jitter > 0.0) {
        const double jx = medium.jitter * medium.extent_x / medium.gx;
        const double jy = medium.jitter * medium.depth / medium.gy;
        const double jz = medium.jitter * medium.extent_z / medium.gz;
        for (auto& p : state.positions) {
            p.x() += jx * (rng.uniform01() - 0.5);
            p.y() += jy * (rng.uniform01() - 0.5);
            p.z() += jz * (rng.uniform01() - 0.5);
        }
    }

    const int count = medium.particle_count();
    state.potentials.resize(count);
    for (int i = 0; i < count; ++i)
        state.potentials(i) = Complex(rng.uniform(medium.tau_min, medium.tau_max), 0.0);
    return state;
}

/// Particle-particle coupling G_pp * diag(tau) with the self-term (diagonal)
/// excluded.  Exposed for the Neumann-series and Born-limit checks.
inline CMatrix coupling_matrix(const ScatteringState& state, double k) {
    const auto n = static_cast<Eigen::Index>(state.positions.size());
    CMatrix c(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
                if (i == j) {
                    c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.0;
                    continue;
                }
                c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    green(state.positions[j], state.positions[i], k) *
                    state.potentials(static_cast<Eigen::Index>(j));
            }
        }
    });
    return c;
}

/// Shared factorization of the Foldy-Lax system (Id - G_pp diag(tau)).
/// One factorization per state serves every right-hand side.
class FoldyLaxSolver {
public:
    FoldyLaxSolver(const ScatteringState& state, double k) {
        const auto n = static_cast<Eigen::Index>(state.positions.size());
        CMatrix system = -coupling_matrix(state, k);
        system.diagonal().array() += 1.0;
        lu_.compute(system);
        if (!(lu_.rcond() > rcond_floor))
            throw SingularSystemError("Foldy-Lax system numerically singular (rcond estimate " +
                                      std::to_string(lu_.rcond()) + ")");
        size_ = n;
    }

    /// Exciting field at the particles for one incident field sample vector.
    CVector solve(const CVector& incident_at_particles) const {
        return lu_.solve(incident_at_particles);
    }

    /// Column-wise solve for many right-hand sides.  Columns are independent
    /// and processed in parallel; the arithmetic per column is fixed, so the
    /// result does not depend on the schedule.
    CMatrix solve_block(const CMatrix& rhs) const {
        CMatrix x(rhs.rows(), rhs.cols());
        parallel_for(static_cast<std::size_t>(rhs.cols()), [&](std::size_t begin, std::size_t end) {
            for (std::size_t c = begin; c < end; ++c)
                x.col(static_cast<Eigen::Index>(c)) = lu_.solve(rhs.col(static_cast<Eigen::Index>(c)));
        });
        return x;
    }

    Eigen::Index size() const { return size_; }

    static constexpr double rcond_floor = 1e-14;

private:
    Eigen::PartialPivLU<CMatrix> lu_;
    Eigen::Index size_ = 0;
};

/// Solves (Id - G_pp diag(tau)) E = psi_inc for the exciting fields.
inline ComplexField solve_exciting_fields(const ScatteringState& state,
                                          const ComplexField& incident_at_particles, double k) {
    if (static_cast<std::size_t>(incident_at_particles.values.size()) != state.positions.size())
        throw ShapeMismatch("incident field length does not match particle count");
    FoldyLaxSolver solver(state, k);
    return ComplexField{solver.solve(incident_at_particles.values), incident_at_particles.geometry};
}

/// Scattering matrix of one state:
///   K = G_out diag(tau) (Id - G_pp diag(tau))^{-1} G_in
/// where G_in maps hologram pixels to particles and G_out maps particles to
/// sensor pixels.  K carries the scattered field only; the direct
/// hologram-to-sensor path is excluded.
inline ScatteringMatrix scattering_matrix(const ScatteringState& state, const Scene& scene) {
    const double k = scene.wavenumber();
    const std::vector<Vec3> hologram_points = sample_plane(scene.hologram);
    const std::vector<Vec3> sensor_points = sample_plane(scene.sensor);

    FoldyLaxSolver solver(state, k);
    const CMatrix g_in =
        propagation_matrix(hologram_points, state.positions, k, "hologram", "particles").entries;
    CMatrix gout_tau =
        propagation_matrix(state.positions, sensor_points, k, "particles", "sensor").entries;
    gout_tau = gout_tau * state.potentials.asDiagonal();

    ScatteringMatrix sm;
    sm.scene_tag = scene.tag();
    sm.provenance = "state:" + std::to_string(state.state_index);
    sm.entries.resize(sensor_points.size(), hologram_points.size());

    // Solve and multiply in column chunks to keep the peak footprint small at
    // full scale (6000x6000 factorization plus one chunk of exciting fields).
    const Eigen::Index cols = g_in.cols();
    const Eigen::Index chunk = std::max<Eigen::Index>(1, std::min<Eigen::Index>(cols, 256));
    for (Eigen::Index c0 = 0; c0 < cols; c0 += chunk) {
        const Eigen::Index width = std::min(chunk, cols - c0);
        const CMatrix exciting = solver.solve_block(g_in.middleCols(c0, width));
        sm.entries.middleCols(c0, width).noalias() = gout_tau * exciting;
    }
    return sm;
}

} // namespace scatcrypt
