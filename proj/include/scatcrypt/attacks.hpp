#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scatcrypt/errors.hpp"
#include "scatcrypt/keyring.hpp"
#include "scatcrypt/metrics.hpp"
#include "scatcrypt/protocol.hpp"
#include "scatcrypt/store.hpp"

namespace scatcrypt {

/// One attack trial: the key that was tried and the SSIM of its
/// reconstruction against the victim plaintext.
struct AttackTrial {
    int index = 0;
    std::string label;
    std::vector<int> subset;
    CVector coefficients;
    double ssim_score = 0.0;
    std::string image_path; // optional PGM dump
};

struct AttackReport {
    std::string scenario;
    std::vector<AttackTrial> trials;
    double correct_ssim = 0.0;
    double max_attack_ssim = -1.0;
    double separation_ratio = 0.0; // correct / max attack

    void finalize() {
        max_attack_ssim = -1.0;
        for (const auto& t : trials) max_attack_ssim = std::max(max_attack_ssim, t.ssim_score);
        separation_ratio = max_attack_ssim > 0.0 ? correct_ssim / max_attack_ssim
                                                 : std::numeric_limits<double>::infinity();
    }
};

namespace detail {

inline double score_reconstruction(const Encryptor& enc, const CiphertextHologram& ct,
                                   const UserKey& key, const PlaintextImage& plaintext,
                                   const SsimParams& params) {
    const PlaintextImage out = enc.decrypt_with_key(ct, key);
    return ssim(out, plaintext, params);
}

inline void maybe_dump(const Encryptor& enc, const CiphertextHologram& ct, const UserKey& key,
                       const std::optional<std::filesystem::path>& dir, const std::string& name,
                       AttackTrial& trial) {
    if (!dir) return;
    std::filesystem::create_directories(*dir);
    const auto path = *dir / (name + ".pgm");
    write_pgm(enc.decrypt_with_key(ct, key), path);
    trial.image_path = path.string();
}

} // namespace detail

/// Per-user bundle the attack scenarios operate on.
struct UserArtifacts {
    int user = 0;
    PlaintextImage plaintext;
    CiphertextHologram ciphertext;
    UserKey key;
};

/// Cross-channel key misuse: every ordered (victim, attacker) pair decrypts
/// the victim's ciphertext with the attacker's leaked key, bypassing the
/// credential check by design.  Scores SSIM against the victim plaintext.
inline AttackReport cross_user_attack(const Encryptor& enc,
                                      std::span<const UserArtifacts> users,
                                      const SsimParams& params = {},
                                      std::optional<std::filesystem::path> image_dir = {}) {
    if (users.size() < 2)
        throw InsufficientUsers("cross-user attack needs at least two users, got " +
                                std::to_string(users.size()));

    AttackReport report;
    report.scenario = "cross-user";
    double correct_sum = 0.0;
    int index = 0;
    for (const auto& victim : users) {
        correct_sum += detail::score_reconstruction(enc, victim.ciphertext, victim.key,
                                                    victim.plaintext, params);
        for (const auto& attacker : users) {
            if (attacker.user == victim.user) continue;
            AttackTrial trial;
            trial.index = index++;
            trial.label = "victim" + std::to_string(victim.user) + "<-attacker" +
                          std::to_string(attacker.user);
            trial.subset = attacker.key.subset;
            trial.coefficients = attacker.key.coefficients;
            trial.ssim_score = detail::score_reconstruction(enc, victim.ciphertext, attacker.key,
                                                            victim.plaintext, params);
            detail::maybe_dump(enc, victim.ciphertext, attacker.key, image_dir, trial.label, trial);
            report.trials.push_back(std::move(trial));
        }
    }
    report.correct_ssim = correct_sum / double(users.size());
    report.finalize();
    return report;
}

/// Brute-force scenario with partial knowledge: the intruder holds the
/// ciphertext, the scattering matrices, and the correct state subset, but
/// guesses fresh unit-modulus coefficients each trial.
inline AttackReport random_key_attack(const Encryptor& enc, const CiphertextHologram& ct,
                                      const PlaintextImage& victim_plaintext,
                                      const UserKey& correct_key, int n_trials,
                                      std::uint64_t seed, const SsimParams& params = {},
                                      std::optional<std::filesystem::path> image_dir = {}) {
    if (n_trials < 1) throw UsageError("random-key attack needs n_trials >= 1");

    AttackReport report;
    report.scenario = "random-key";
    report.correct_ssim =
        detail::score_reconstruction(enc, ct, correct_key, victim_plaintext, params);

    Rng rng(derive_seed(seed, "random-key-attack"));
    for (int t = 0; t < n_trials; ++t) {
        UserKey fake = correct_key;
        fake.key_id = "trial-" + std::to_string(t);
        for (Eigen::Index i = 0; i < fake.coefficients.size(); ++i)
            fake.coefficients(i) = coefficient_from_phase(rng.phase_unit());

        AttackTrial trial;
        trial.index = t;
        trial.label = "trial" + std::to_string(t);
        trial.subset = fake.subset;
        trial.coefficients = fake.coefficients;
        trial.ssim_score =
            detail::score_reconstruction(enc, ct, fake, victim_plaintext, params);
        detail::maybe_dump(enc, ct, fake, image_dir, trial.label, trial);
        report.trials.push_back(std::move(trial));
    }
    report.finalize();
    return report;
}

/// Wrapped per-component phase distance |arg C_trial - arg C_correct| mod 2pi,
/// folded into [0, pi]; the complex-plane near-miss measure.
inline std::vector<std::vector<double>> key_proximity_analysis(const AttackReport& report,
                                                               const UserKey& correct_key) {
    std::vector<std::vector<double>> distances;
    distances.reserve(report.trials.size());
    for (const auto& trial : report.trials) {
        if (trial.subset != correct_key.subset)
            throw SubsetMismatch("trial '" + trial.label + "' uses a different state subset");
        std::vector<double> d(static_cast<std::size_t>(trial.coefficients.size()));
        for (Eigen::Index i = 0; i < trial.coefficients.size(); ++i) {
            double delta = std::arg(trial.coefficients(i)) - std::arg(correct_key.coefficients(i));
            delta = std::fmod(std::abs(delta), 2.0 * std::numbers::pi);
            if (delta > std::numbers::pi) delta = 2.0 * std::numbers::pi - delta;
            d[static_cast<std::size_t>(i)] = delta;
        }
        distances.push_back(std::move(d));
    }
    return distances;
}

// --- report serialization ----------------------------------------------------

/// CSV rows: trial, label, c<i>_re / c<i>_im per coefficient, ssim.
inline std::string attack_report_csv(const AttackReport& report) {
    std::ostringstream os;
    const Eigen::Index width =
        report.trials.empty() ? 0 : report.trials.front().coefficients.size();
    os << "trial,label";
    for (Eigen::Index i = 0; i < width; ++i) os << ",c" << i << "_re,c" << i << "_im";
    os << ",ssim\n";
    for (const auto& t : report.trials) {
        os << t.index << "," << t.label;
        for (Eigen::Index i = 0; i < t.coefficients.size(); ++i)
            os << "," << csv_number(t.coefficients(i).real()) << ","
               << csv_number(t.coefficients(i).imag());
        os << "," << csv_number(t.ssim_score) << "\n";
    }
    return os.str();
}

inline nlohmann::json attack_report_json(const AttackReport& report) {
    nlohmann::json j;
    j["scenario"] = report.scenario;
    j["correct_ssim"] = report.correct_ssim;
    j["max_attack_ssim"] = report.max_attack_ssim;
    j["separation_ratio"] = report.separation_ratio;
    j["trials"] = nlohmann::json::array();
    for (const auto& t : report.trials) {
        nlohmann::json coeffs = nlohmann::json::array();
        for (Eigen::Index i = 0; i < t.coefficients.size(); ++i)
            coeffs.push_back({t.coefficients(i).real(), t.coefficients(i).imag()});
        j["trials"].push_back({{"trial", t.index},
                               {"label", t.label},
                               {"subset", t.subset},
                               {"coefficients", coeffs},
                               {"ssim", t.ssim_score},
                               {"image", t.image_path}});
    }
    return j;
}

} // namespace scatcrypt
