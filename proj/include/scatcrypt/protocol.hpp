#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "scatcrypt/errors.hpp"
#include "scatcrypt/foldylax.hpp"
#include "scatcrypt/geometry.hpp"
#include "scatcrypt/holography.hpp"
#include "scatcrypt/image.hpp"
#include "scatcrypt/inversion.hpp"
#include "scatcrypt/keyring.hpp"
#include "scatcrypt/sha256.hpp"
#include "scatcrypt/store.hpp"
#include "scatcrypt/wavefield.hpp"

namespace scatcrypt {

/// FIELD: exact complex-field algebra end to end (default).
/// HOLOGRAM: sensor-side fields are recorded as off-axis holograms, combined
/// per user key, and demodulated — the physically faithful pathway.
enum class DecryptionMode { field, hologram };

inline std::string to_string(DecryptionMode m) {
    return m == DecryptionMode::field ? "field" : "hologram";
}

inline DecryptionMode mode_from_string(const std::string& s) {
    if (s == "field") return DecryptionMode::field;
    if (s == "hologram") return DecryptionMode::hologram;
    throw UsageError("unknown mode '" + s + "' (expected field|hologram)");
}

/// Transaction record binding a ciphertext to its server-held key and the
/// intended recipient.
struct Receipt {
    std::string key_id;
    int q = 0;
    int q_to = 0;
    int block = 0;
    std::string ciphertext_digest;
    std::string credential_token;
};

/// Complex target field with the image as magnitude and zero phase.
inline ComplexField image_to_target(const PlaintextImage& img) {
    img.validate();
    ComplexField f;
    f.geometry = "sensor";
    f.values = img.pixels.cast<Complex>();
    return f;
}

inline std::string credential_token(const std::string& credential, const std::string& key_id) {
    return sha256_hex("cred|" + credential + "|" + key_id);
}

/// Canonical byte serialization of a ciphertext for digest purposes.
inline std::vector<std::uint8_t> ciphertext_canonical_bytes(const CiphertextHologram& ct) {
    std::vector<std::uint8_t> bytes;
    const std::string head = "scatcrypt-ct|" + std::to_string(ct.q) + "|" +
                             std::to_string(ct.q_to) + "|" + std::to_string(ct.block) + "|" +
                             ct.key_id + "|" + ct.transparency.geometry + "|";
    bytes.insert(bytes.end(), head.begin(), head.end());
    detail::put_f64(bytes, ct.reference.amplitude);
    detail::put_f64(bytes, ct.reference.alpha_x);
    detail::put_f64(bytes, ct.reference.alpha_z);
    for (Eigen::Index i = 0; i < ct.transparency.values.size(); ++i)
        detail::put_f64(bytes, ct.transparency.values(i));
    for (Eigen::Index i = 0; i < ct.incident_field.size(); ++i) {
        detail::put_f64(bytes, ct.incident_field(i).real());
        detail::put_f64(bytes, ct.incident_field(i).imag());
    }
    return bytes;
}

inline std::string ciphertext_digest(const CiphertextHologram& ct) {
    return sha256_hex(ciphertext_canonical_bytes(ct));
}

// --- ciphertext / receipt JSON bundles --------------------------------------

inline nlohmann::json ciphertext_to_json(const CiphertextHologram& ct) {
    nlohmann::json j;
    j["format"] = "scatcrypt-ciphertext";
    j["version"] = 1;
    j["q"] = ct.q;
    j["q_to"] = ct.q_to;
    j["block"] = ct.block;
    j["key_id"] = ct.key_id;
    j["plane"] = ct.transparency.geometry;
    j["reference"] = {{"amplitude", ct.reference.amplitude},
                      {"alpha_x", ct.reference.alpha_x},
                      {"alpha_z", ct.reference.alpha_z},
                      {"plane", ct.reference.plane_tag}};
    j["transparency_b64"] = base64_f64(ct.transparency.values);
    j["incident_field_b64"] = base64_c128(ct.incident_field);
    return j;
}

inline CiphertextHologram ciphertext_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "scatcrypt-ciphertext")
        throw IoFailure("not a scatcrypt ciphertext bundle");
    if (j.value("version", 0) != 1) throw UnsupportedVersion("ciphertext bundle version");
    CiphertextHologram ct;
    ct.q = j.at("q").get<int>();
    ct.q_to = j.at("q_to").get<int>();
    ct.block = j.at("block").get<int>();
    ct.key_id = j.at("key_id").get<std::string>();
    ct.transparency.geometry = j.at("plane").get<std::string>();
    const auto& r = j.at("reference");
    ct.reference.amplitude = r.at("amplitude").get<double>();
    ct.reference.alpha_x = r.at("alpha_x").get<double>();
    ct.reference.alpha_z = r.at("alpha_z").get<double>();
    ct.reference.plane_tag = r.at("plane").get<std::string>();
    ct.transparency.values = f64_from_base64(j.at("transparency_b64").get<std::string>());
    ct.incident_field = c128_from_base64(j.at("incident_field_b64").get<std::string>());
    return ct;
}

inline nlohmann::json receipt_to_json(const Receipt& r) {
    return nlohmann::json{{"format", "scatcrypt-receipt"}, {"key_id", r.key_id},
                          {"q", r.q},                      {"q_to", r.q_to},
                          {"block", r.block},              {"digest", r.ciphertext_digest},
                          {"credential_token", r.credential_token}};
}

inline Receipt receipt_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "scatcrypt-receipt") throw IoFailure("not a scatcrypt receipt");
    Receipt r;
    r.key_id = j.at("key_id").get<std::string>();
    r.q = j.at("q").get<int>();
    r.q_to = j.at("q_to").get<int>();
    r.block = j.at("block").get<int>();
    r.ciphertext_digest = j.at("digest").get<std::string>();
    r.credential_token = j.at("credential_token").get<std::string>();
    return r;
}

/// Tunables of the encryption pipeline (see the bundled configs).
struct ProtocolConfig {
    DecryptionMode mode = DecryptionMode::field;
    double epsilon_rel = 1e-3;          // SVD truncation relative to sigma_1
    double ref_alpha_x = 0.4;           // reference tilt direction cosines
    double ref_alpha_z = 0.0;
    double ref_gain = 1.0;              // reference amplitude = gain * max |psi_i|
    double carrier_radius_nyquist = 0.25; // demodulation band radius / Nyquist
    int total_states = 4;               // L
    int subset_size = 3;

    double band_radius_cycles() const { return 0.5 * carrier_radius_nyquist; }
};

/// The cloud encryptor of the protocol: owns the scene, the per-block state
/// matrices, the user registry, the key store, and the secret shuffle seed.
class Encryptor {
public:
    Encryptor(Scene scene, std::vector<ScatteringMatrix> state_matrices,
              std::map<int, std::string> user_credentials, std::uint64_t server_seed,
              ProtocolConfig config)
        : scene_(std::move(scene)),
          state_matrices_(std::move(state_matrices)),
          credentials_(std::move(user_credentials)),
          server_seed_(server_seed),
          config_(std::move(config)) {
        if (static_cast<int>(state_matrices_.size()) != config_.total_states)
            throw ShapeMismatch("expected " + std::to_string(config_.total_states) +
                                " state matrices, got " + std::to_string(state_matrices_.size()));
        sensor_points_ = sample_plane(scene_.sensor);
        hologram_points_ = sample_plane(scene_.hologram);
    }

    const Scene& scene() const { return scene_; }
    const ProtocolConfig& config() const { return config_; }
    const KeyStore& keys() const { return key_store_; }

    /// Replaces the in-memory key store (e.g. with one loaded from disk).
    void adopt_keys(KeyStore store) { key_store_ = std::move(store); }

    /// Resolves a key's logical subset to physical state matrices through the
    /// secret per-block schedule.
    std::vector<ScatteringMatrix> resolve_subset(const UserKey& key) const {
        const BlockSchedule schedule =
            shuffle_block(key.block, config_.total_states, server_seed_);
        std::vector<ScatteringMatrix> resolved;
        resolved.reserve(key.subset.size());
        for (int logical : key.subset)
            resolved.push_back(state_matrices_[static_cast<std::size_t>(schedule.resolve(logical) - 1)]);
        return resolved;
    }

    /// Encrypts a plaintext image for the user pair (q -> q_to): draws the
    /// process key, combines the scheduled states, inverts the combined map,
    /// and records the ciphertext transparency against the reference wave.
    std::pair<CiphertextHologram, Receipt> encrypt(const PlaintextImage& img, int q, int q_to,
                                                   int block, std::uint64_t key_seed) {
        require_user(q);
        require_user(q_to);
        if (img.size() != scene_.sensor_pixels())
            throw DimensionMismatch("plaintext image does not match the sensor grid");

        UserKey key = generate_key(q, q_to, block, config_.total_states, config_.subset_size,
                                   derive_seed(key_seed, "process", static_cast<std::uint64_t>(q),
                                               static_cast<std::uint64_t>(q_to),
                                               static_cast<std::uint64_t>(block)));
        CiphertextHologram ct = make_ciphertext(img, key);
        Receipt receipt;
        receipt.key_id = key.key_id;
        receipt.q = q;
        receipt.q_to = q_to;
        receipt.block = block;
        receipt.ciphertext_digest = ciphertext_digest(ct);
        receipt.credential_token = credential_token(credentials_.at(q_to), key.key_id);
        key_store_.add(std::move(key));
        return {std::move(ct), std::move(receipt)};
    }

    /// Ciphertext synthesis for an explicit key (the encrypt pipeline minus
    /// key drawing); also used by replication runs with forced paper keys.
    CiphertextHologram make_ciphertext(const PlaintextImage& img, const UserKey& key) const {
        key.validate(config_.total_states);
        const std::vector<ScatteringMatrix> resolved = resolve_subset(key);
        const ScatteringMatrix combined = combine_states(resolved, key);
        const SingularSystem system = decompose_relative(combined, config_.epsilon_rel);
        const ComplexField incident = synthesize_incident(system, image_to_target(img));

        ReferenceWave ref;
        ref.plane_tag = "hologram";
        ref.alpha_x = config_.ref_alpha_x;
        ref.alpha_z = config_.ref_alpha_z;
        const double peak = incident.values.size() ? incident.values.cwiseAbs().maxCoeff() : 0.0;
        ref.amplitude = peak > 0.0 ? config_.ref_gain * peak : config_.ref_gain;

        CiphertextHologram ct;
        ct.transparency = hologram_record(incident, ref, hologram_points_, scene_.wavenumber());
        ct.reference = ref;
        ct.q = key.q;
        ct.q_to = key.q_to;
        ct.block = key.block;
        ct.key_id = key.key_id;
        ct.incident_field = incident.values;
        return ct;
    }

    /// psi_l = SM_l psi_i for each given state matrix.  In FIELD mode the
    /// exact stored incident record is used; in HOLOGRAM mode the incident
    /// field is demodulated from the transparency, which is faithful only
    /// when the recorded field fits the carrier-separated band.
    std::vector<ComplexField> reconstruct_state_fields(
        const CiphertextHologram& ct, std::span<const ScatteringMatrix> matrices,
        DecryptionMode mode) const {
        CVector incident;
        if (mode == DecryptionMode::field) {
            incident = ct.incident_field;
        } else {
            if (!carrier_separated(ct.reference, scene_.hologram, scene_.wavenumber(),
                                   config_.band_radius_cycles()))
                throw CarrierOverlap("reference tilt cannot separate hologram orders at plane '" +
                                     scene_.hologram.tag + "'");
            incident = demodulate(ct.transparency, scene_.hologram, ct.reference,
                                  scene_.wavenumber(), config_.band_radius_cycles())
                           .values;
        }
        std::vector<ComplexField> fields;
        fields.reserve(matrices.size());
        for (const auto& m : matrices)
            fields.push_back(ComplexField{m.entries * incident, "sensor"});
        return fields;
    }

    /// Validated decryption: checks the recipient credential and ciphertext
    /// digest, resolves the server-held key, and releases the plaintext.
    PlaintextImage decrypt(const CiphertextHologram& ct, const Receipt& receipt,
                           const std::string& credential) const {
        if (credential_token(credential, receipt.key_id) != receipt.credential_token)
            throw AuthFailure("credential does not match the receipt's recipient");
        if (ciphertext_digest(ct) != receipt.ciphertext_digest)
            throw DigestMismatch("ciphertext does not match the receipt digest");
        const UserKey* key = key_store_.find(receipt.key_id);
        if (!key) throw UnknownReceipt("receipt key id not present in the key store");
        return decrypt_with_key(ct, *key);
    }

    /// Key-level decryption without credential checks.  This is the internal
    /// surface the attack harness drives (simulating a leaked key); it never
    /// mutates the key store.
    PlaintextImage decrypt_with_key(const CiphertextHologram& ct, const UserKey& key) const {
        key.validate(config_.total_states);
        const std::vector<ScatteringMatrix> resolved = resolve_subset(key);
        const std::vector<ComplexField> state_fields =
            reconstruct_state_fields(ct, resolved, DecryptionMode::field);

        Eigen::VectorXd magnitude;
        if (config_.mode == DecryptionMode::field) {
            CVector sum = CVector::Zero(scene_.sensor_pixels());
            for (std::size_t i = 0; i < state_fields.size(); ++i)
                sum += key.coefficients(static_cast<Eigen::Index>(i)) * state_fields[i].values;
            magnitude = sum.cwiseAbs();
        } else {
            magnitude = decrypt_hologram_pathway(ct, key, state_fields);
        }

        PlaintextImage img;
        img.nx = scene_.sensor.nx;
        img.nz = scene_.sensor.nz;
        img.pixels = minmax_normalize(magnitude);
        img.source = "decrypt:" + key.key_id;
        return img;
    }

private:
    /// Eq.-style hologram pathway: record H^(l) per state against the sensor
    /// reference, combine with the key coefficients, demodulate, take the
    /// magnitude.
    Eigen::VectorXd decrypt_hologram_pathway(const CiphertextHologram& ct, const UserKey& key,
                                             std::span<const ComplexField> state_fields) const {
        ReferenceWave sensor_ref = ct.reference;
        sensor_ref.plane_tag = "sensor";
        if (!carrier_separated(sensor_ref, scene_.sensor, scene_.wavenumber(),
                               config_.band_radius_cycles()))
            throw CarrierOverlap("reference tilt cannot separate sensor-plane orders");

        CVector combined = CVector::Zero(scene_.sensor_pixels());
        for (std::size_t i = 0; i < state_fields.size(); ++i) {
            const RealField h = hologram_record(state_fields[i], sensor_ref, sensor_points_,
                                                scene_.wavenumber());
            combined += key.coefficients(static_cast<Eigen::Index>(i)) *
                        h.values.cast<Complex>();
        }
        return demodulate(combined, scene_.sensor, sensor_ref, scene_.wavenumber(),
                          config_.band_radius_cycles())
            .values.cwiseAbs();
    }

    void require_user(int q) const {
        if (!credentials_.contains(q))
            throw UnknownUser("user " + std::to_string(q) + " is not registered");
    }

    Scene scene_;
    std::vector<ScatteringMatrix> state_matrices_;
    std::map<int, std::string> credentials_;
    std::uint64_t server_seed_ = 0;
    ProtocolConfig config_;
    KeyStore key_store_;
    std::vector<Vec3> sensor_points_;
    std::vector<Vec3> hologram_points_;
};

} // namespace scatcrypt
