#pragma once

#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "scatcrypt/errors.hpp"
#include "scatcrypt/foldylax.hpp"
#include "scatcrypt/wavefield.hpp"

namespace scatcrypt {

/// Full singular system of a scattering matrix K = U diag(sigma) V^H together
/// with the truncation threshold.  input_vectors are the right (hologram
/// side, M x P) and output_vectors the left (sensor side, N x P) singular
/// vectors; sigma is sorted descending and P = min(M, N).
struct SingularSystem {
    RVector sigma;
    CMatrix input_vectors;
    CMatrix output_vectors;
    double epsilon = 0.0;
    int retained = 0; // P0(epsilon) = |{p : sigma_p > epsilon}|

    std::string scene_tag;
};

/// SVD of K truncated at sigma_p > epsilon.  The full spectrum is kept in the
/// returned system (reconstruction over all p recovers K); `retained` marks
/// how many leading modes the pseudoinverse uses.
inline SingularSystem decompose(const ScatteringMatrix& k, double epsilon) {
    if (!k.entries.allFinite()) throw NumericalFailure("scattering matrix has non-finite entries");
    if (epsilon < 0.0) throw NumericalFailure("regularization threshold must be >= 0");

    Eigen::BDCSVD<CMatrix> svd(k.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw NumericalFailure("singular value decomposition did not converge");

    SingularSystem sys;
    sys.sigma = svd.singularValues();
    sys.output_vectors = svd.matrixU();
    sys.input_vectors = svd.matrixV();
    sys.epsilon = epsilon;
    sys.scene_tag = k.scene_tag;
    sys.retained = 0;
    for (Eigen::Index p = 0; p < sys.sigma.size(); ++p)
        if (sys.sigma(p) > epsilon) ++sys.retained;
    return sys;
}

/// Same, with the threshold given relative to the largest singular value.
inline SingularSystem decompose_relative(const ScatteringMatrix& k, double epsilon_rel) {
    SingularSystem sys = decompose(k, 0.0);
    const double sigma_max = sys.sigma.size() ? sys.sigma(0) : 0.0;
    sys.epsilon = epsilon_rel * sigma_max;
    sys.retained = 0;
    for (Eigen::Index p = 0; p < sys.sigma.size(); ++p)
        if (sys.sigma(p) > sys.epsilon) ++sys.retained;
    return sys;
}

/// Regularized pseudoinverse applied to a sensor-plane target:
///   psi_i = sum_{p <= P0} sigma_p^{-1} psi_i^(p) <psi_s^(p), psi_s>
/// Antilinear in the output singular vectors, linear in the target.
inline ComplexField synthesize_incident(const SingularSystem& sys, const ComplexField& target) {
    if (target.values.size() != sys.output_vectors.rows())
        throw ShapeMismatch("target length does not match the system's sensor dimension");
    if (sys.retained == 0)
        throw EmptySpectrum("no singular values above threshold; key/medium unusable");

    const auto p0 = static_cast<Eigen::Index>(sys.retained);
    CVector modal = sys.output_vectors.leftCols(p0).adjoint() * target.values;
    modal.array() /= sys.sigma.head(p0).array();
    return ComplexField{sys.input_vectors.leftCols(p0) * modal, "hologram"};
}

} // namespace scatcrypt
