#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scatcrypt/errors.hpp"
#include "scatcrypt/foldylax.hpp"
#include "scatcrypt/rng.hpp"
#include "scatcrypt/sha256.hpp"

namespace scatcrypt {

/// The canonical coefficient map: a phase parameter C in (-1, 1] becomes the
/// unit-modulus weight exp(-j C pi).
inline Complex coefficient_from_phase(double c) {
    return std::polar(1.0, -c * std::numbers::pi);
}

/// Secret per-user-pair key: which scattering states enter the combination
/// and with which complex weights.
struct UserKey {
    int q = 0;
    int q_to = 0;
    int block = 0;
    std::vector<int> subset;     // logical state indices, ascending, within 1..L
    CVector coefficients;        // one per subset member, unit modulus by default
    std::string key_id;
    std::uint64_t seed = 0;

    void validate(int total_states) const {
        if (subset.empty()) throw InvalidSubsetSize("key subset must be non-empty");
        if (static_cast<Eigen::Index>(subset.size()) != coefficients.size())
            throw ShapeMismatch("key holds " + std::to_string(subset.size()) + " states but " +
                                std::to_string(coefficients.size()) + " coefficients");
        std::vector<int> sorted = subset;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InvalidSubsetSize("key subset contains duplicate state indices");
        for (int l : subset)
            if (l < 1 || l > total_states)
                throw InvalidSubsetSize("state index " + std::to_string(l) + " outside 1.." +
                                        std::to_string(total_states));
    }
};

/// Server-side per-block permutation of the state indices.  Kept secret: the
/// schedule never appears in receipts, ciphertexts, or reports.
struct BlockSchedule {
    int block = 0;
    std::vector<int> permutation; // permutation[l-1] = physical state for logical l

    int resolve(int logical) const {
        if (logical < 1 || logical > static_cast<int>(permutation.size()))
            throw InvalidSubsetSize("logical state index out of range");
        return permutation[static_cast<std::size_t>(logical - 1)];
    }
};

/// Uniformly random subset + unit-modulus coefficients exp(-j C pi) with C
/// uniform on (-1, 1].  Deterministic in the seed; the key id hashes the
/// identifying tuple.
inline UserKey generate_key(int q, int q_to, int block, int total_states, int subset_size,
                            std::uint64_t seed) {
    if (subset_size < 1 || subset_size > total_states)
        throw InvalidSubsetSize("subset_size must satisfy 1 <= size <= L");

    Rng rng(derive_seed(seed, "key", static_cast<std::uint64_t>(q),
                        static_cast<std::uint64_t>(q_to), static_cast<std::uint64_t>(block)));
    UserKey key;
    key.q = q;
    key.q_to = q_to;
    key.block = block;
    key.seed = seed;
    key.subset = rng.subset(total_states, subset_size);
    key.coefficients.resize(subset_size);
    for (int i = 0; i < subset_size; ++i)
        key.coefficients(i) = coefficient_from_phase(rng.phase_unit());
    key.key_id = sha256_hex("key|" + std::to_string(q) + "|" + std::to_string(q_to) + "|" +
                            std::to_string(block) + "|" + std::to_string(seed));
    return key;
}

/// Key with caller-chosen phase parameters (the paper-style (C_a, C_b, C_c)
/// triples); used for replication runs and forced-key tests.
inline UserKey make_key_from_phases(int q, int q_to, int block, std::vector<int> subset,
                                    std::span<const double> phases, std::uint64_t seed = 0) {
    UserKey key;
    key.q = q;
    key.q_to = q_to;
    key.block = block;
    key.seed = seed;
    key.subset = std::move(subset);
    key.coefficients.resize(static_cast<Eigen::Index>(phases.size()));
    for (std::size_t i = 0; i < phases.size(); ++i)
        key.coefficients(static_cast<Eigen::Index>(i)) = coefficient_from_phase(phases[i]);
    key.key_id = sha256_hex("key|" + std::to_string(q) + "|" + std::to_string(q_to) + "|" +
                            std::to_string(block) + "|" + std::to_string(seed) + "|forced");
    return key;
}

/// Uniformly random permutation for one block, deterministic in
/// (server_seed, block).
inline BlockSchedule shuffle_block(int block, int total_states, std::uint64_t server_seed) {
    if (total_states < 1) throw InvalidSubsetSize("need at least one state to shuffle");
    Rng rng(derive_seed(server_seed, "block", static_cast<std::uint64_t>(block)));
    return BlockSchedule{block, rng.permutation(total_states)};
}

/// K_{q,q'} = sum_l C(q,q';l) SM_l, entrywise.  `matrices` holds the resolved
/// scattering matrices for the key's subset, in subset order.
inline ScatteringMatrix combine_states(std::span<const ScatteringMatrix> matrices,
                                       const UserKey& key) {
    if (matrices.size() != key.subset.size())
        throw ShapeMismatch("expected " + std::to_string(key.subset.size()) + " matrices, got " +
                            std::to_string(matrices.size()));
    if (matrices.empty()) throw ShapeMismatch("no matrices to combine");

    ScatteringMatrix combined;
    combined.scene_tag = matrices[0].scene_tag;
    combined.provenance = "key:" + key.key_id;
    combined.entries = CMatrix::Zero(matrices[0].entries.rows(), matrices[0].entries.cols());
    for (std::size_t i = 0; i < matrices.size(); ++i) {
        const auto& m = matrices[i];
        if (m.entries.rows() != combined.entries.rows() ||
            m.entries.cols() != combined.entries.cols())
            throw ShapeMismatch("scattering matrix " + std::to_string(i) + " has mismatched shape");
        if (m.scene_tag != combined.scene_tag)
            throw ShapeMismatch("scattering matrix " + std::to_string(i) +
                                " computed for a different scene");
        combined.entries += key.coefficients(static_cast<Eigen::Index>(i)) * m.entries;
    }
    return combined;
}

// --- key store -------------------------------------------------------------

inline nlohmann::json key_to_json(const UserKey& key) {
    nlohmann::json j;
    j["q"] = key.q;
    j["q_to"] = key.q_to;
    j["block"] = key.block;
    j["subset"] = key.subset;
    nlohmann::json coeffs = nlohmann::json::array();
    for (Eigen::Index i = 0; i < key.coefficients.size(); ++i)
        coeffs.push_back({key.coefficients(i).real(), key.coefficients(i).imag()});
    j["coefficients"] = coeffs;
    j["key_id"] = key.key_id;
    j["seed"] = key.seed;
    return j;
}

inline UserKey key_from_json(const nlohmann::json& j) {
    UserKey key;
    key.q = j.at("q").get<int>();
    key.q_to = j.at("q_to").get<int>();
    key.block = j.at("block").get<int>();
    key.subset = j.at("subset").get<std::vector<int>>();
    const auto& coeffs = j.at("coefficients");
    key.coefficients.resize(static_cast<Eigen::Index>(coeffs.size()));
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        key.coefficients(static_cast<Eigen::Index>(i)) =
            Complex(coeffs[i][0].get<double>(), coeffs[i][1].get<double>());
    key.key_id = j.at("key_id").get<std::string>();
    key.seed = j.at("seed").get<std::uint64_t>();
    return key;
}

/// In-memory key store with JSON persistence.  Single writer, many readers.
class KeyStore {
public:
    void add(UserKey key) { keys_.push_back(std::move(key)); }

    const UserKey* find(const std::string& key_id) const {
        for (const auto& k : keys_)
            if (k.key_id == key_id) return &k;
        return nullptr;
    }

    std::size_t size() const { return keys_.size(); }
    const std::vector<UserKey>& keys() const { return keys_; }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& k : keys_) arr.push_back(key_to_json(k));
        return arr;
    }

    static KeyStore from_json(const nlohmann::json& arr) {
        KeyStore store;
        for (const auto& j : arr) store.add(key_from_json(j));
        return store;
    }

private:
    std::vector<UserKey> keys_;
};

} // namespace scatcrypt
