// Command-line driver for the dynamic scattering-channel encryption
// simulator: medium generation, scattering-matrix computation, encrypt /
// decrypt, attack harnesses, and report assembly.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scatcrypt/scatcrypt.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scatcrypt;

namespace {

using FullConfig = ProjectConfig;

FullConfig load_config(const std::string& path) {
    return parse_project_config(json::parse(read_text_file(path)), path);
}

// --- states file ---------------------------------------------------------------

json state_to_json(const ScatteringState& s) {
    Eigen::VectorXd coords(3 * static_cast<Eigen::Index>(s.positions.size()));
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        coords(3 * static_cast<Eigen::Index>(i)) = s.positions[i].x();
        coords(3 * static_cast<Eigen::Index>(i) + 1) = s.positions[i].y();
        coords(3 * static_cast<Eigen::Index>(i) + 2) = s.positions[i].z();
    }
    return json{{"index", s.state_index},
                {"seed", s.seed},
                {"positions_b64", base64_f64(coords)},
                {"potentials_b64", base64_c128(s.potentials)}};
}

ScatteringState state_from_json(const json& j) {
    ScatteringState s;
    s.state_index = j.at("index").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
    const Eigen::VectorXd coords = f64_from_base64(j.at("positions_b64").get<std::string>());
    if (coords.size() % 3 != 0) throw IoFailure("state positions payload corrupt");
    s.positions.resize(static_cast<std::size_t>(coords.size() / 3));
    for (std::size_t i = 0; i < s.positions.size(); ++i)
        s.positions[i] = Vec3(coords(3 * static_cast<Eigen::Index>(i)),
                              coords(3 * static_cast<Eigen::Index>(i) + 1),
                              coords(3 * static_cast<Eigen::Index>(i) + 2));
    s.potentials = c128_from_base64(j.at("potentials_b64").get<std::string>());
    if (static_cast<std::size_t>(s.potentials.size()) != s.positions.size())
        throw IoFailure("state potentials payload corrupt");
    return s;
}

std::vector<ScatteringState> load_states(const fs::path& path, const Scene& scene) {
    const json j = json::parse(read_text_file(path));
    if (j.value("format", "") != "scatcrypt-states")
        throw IoFailure(path.string() + ": not a states file");
    if (j.value("scene_tag", "") != scene.tag())
        throw ShapeMismatch(path.string() + ": states were sampled for a different scene");
    std::vector<ScatteringState> states;
    for (const json& s : j.at("states")) states.push_back(state_from_json(s));
    return states;
}

// --- run plumbing ---------------------------------------------------------------

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_manifest(const fs::path& out_dir, const std::string& command, const json& seeds,
                    const FullConfig& cfg, const std::vector<std::string>& outputs) {
    json manifest{{"command", command},
                  {"config", cfg.path},
                  {"seeds", seeds},
                  {"out", out_dir.string()},
                  {"mode", to_string(cfg.protocol.mode)},
                  {"timestamp_utc", utc_timestamp()},
                  {"outputs", outputs}};
    write_text_file(out_dir / ("manifest_" + command + ".json"), manifest.dump(2) + "\n");
}

void save_server_secret(const fs::path& run_dir, std::uint64_t server_seed) {
    const fs::path path = run_dir / "server_secret.json";
    write_text_file(path, json{{"server_seed", server_seed}}.dump(2) + "\n");
    fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write,
                    fs::perm_options::replace);
}

std::uint64_t load_server_secret(const fs::path& run_dir) {
    const fs::path path = run_dir / "server_secret.json";
    return json::parse(read_text_file(path)).at("server_seed").get<std::uint64_t>();
}

std::vector<ScatteringMatrix> load_state_matrices(const fs::path& run_dir, const FullConfig& cfg) {
    std::vector<ScatteringMatrix> sms;
    for (int l = 1; l <= cfg.protocol.total_states; ++l) {
        ScatteringMatrix sm;
        sm.entries = load_matrix(run_dir / ("sm_" + std::to_string(l) + ".scm"));
        sm.scene_tag = cfg.scene.tag();
        sm.provenance = "state:" + std::to_string(l);
        if (sm.entries.rows() != cfg.scene.sensor_pixels() ||
            sm.entries.cols() != cfg.scene.hologram_pixels())
            throw ShapeMismatch("sm_" + std::to_string(l) + ".scm does not match the scene");
        sms.push_back(std::move(sm));
    }
    return sms;
}

Encryptor load_encryptor(const FullConfig& cfg, const fs::path& run_dir) {
    Encryptor enc(cfg.scene, load_state_matrices(run_dir, cfg), cfg.users,
                  load_server_secret(run_dir), cfg.protocol);
    const fs::path keys_path = run_dir / "keystore.json";
    if (fs::exists(keys_path))
        enc.adopt_keys(KeyStore::from_json(json::parse(read_text_file(keys_path))));
    return enc;
}

void save_keystore(const Encryptor& enc, const fs::path& run_dir) {
    write_text_file(run_dir / "keystore.json", enc.keys().to_json().dump(2) + "\n");
}

PlaintextImage load_sensor_image(const fs::path& path, const Scene& scene) {
    PlaintextImage img = read_pgm(path);
    if (img.nx != scene.sensor.nx || img.nz != scene.sensor.nz)
        throw DimensionMismatch(path.string() + ": image is " + std::to_string(img.nx) + "x" +
                                std::to_string(img.nz) + " but the sensor is " +
                                std::to_string(scene.sensor.nx) + "x" +
                                std::to_string(scene.sensor.nz));
    return img;
}

PlaintextImage image_from_values(const Eigen::VectorXd& values, int nx, int nz,
                                 const std::string& source) {
    return PlaintextImage{minmax_normalize(values), nx, nz, source};
}

// --- PGM grid stitching -----------------------------------------------------------

PlaintextImage stitch_grid(const std::vector<std::vector<PlaintextImage>>& rows, int gap = 2) {
    int cell_nx = 0, cell_nz = 0, cols = 0;
    for (const auto& row : rows) {
        cols = std::max(cols, static_cast<int>(row.size()));
        for (const auto& img : row) {
            cell_nx = std::max(cell_nx, img.nx);
            cell_nz = std::max(cell_nz, img.nz);
        }
    }
    if (cols == 0 || cell_nx == 0) throw UsageError("no panels to stitch");
    const int out_nx = cols * cell_nx + (cols - 1) * gap;
    const int out_nz = static_cast<int>(rows.size()) * cell_nz +
                       (static_cast<int>(rows.size()) - 1) * gap;
    PlaintextImage out;
    out.nx = out_nx;
    out.nz = out_nz;
    out.source = "grid";
    out.pixels = Eigen::VectorXd::Ones(out_nx * out_nz);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            const PlaintextImage& img = rows[r][c];
            const int z0 = static_cast<int>(r) * (cell_nz + gap);
            const int x0 = static_cast<int>(c) * (cell_nx + gap);
            for (int z = 0; z < img.nz; ++z)
                for (int x = 0; x < img.nx; ++x)
                    out.pixels((z0 + z) * out_nx + x0 + x) = img.pixels(z * img.nx + x);
        }
    }
    return out;
}

// --- subcommand implementations ------------------------------------------------------

int cmd_gen_medium(const std::string& config_path, std::uint64_t seed_medium,
                   std::uint64_t seed_server, const std::string& out) {
    const FullConfig cfg = load_config(config_path);
    const fs::path out_dir(out);
    fs::create_directories(out_dir);

    json states = json::array();
    for (int l = 1; l <= cfg.protocol.total_states; ++l)
        states.push_back(state_to_json(sample_state(cfg.scene.medium, l, seed_medium)));

    const json bundle{{"format", "scatcrypt-states"},
                      {"version", 1},
                      {"scene_tag", cfg.scene.tag()},
                      {"seed_medium", seed_medium},
                      {"L", cfg.protocol.total_states},
                      {"states", states}};
    write_text_file(out_dir / "states.json", bundle.dump() + "\n");
    save_server_secret(out_dir, seed_server);

    write_manifest(out_dir, "gen-medium",
                   json{{"medium", seed_medium}, {"server_secret_file", "server_secret.json"}},
                   cfg, {"states.json", "server_secret.json"});
    std::cout << "sampled " << cfg.protocol.total_states << " states of "
              << cfg.scene.medium.particle_count() << " particles -> "
              << (out_dir / "states.json").string() << "\n";
    return 0;
}

int cmd_compute_sm(const std::string& config_path, const std::string& states_path,
                   const std::string& out) {
    const FullConfig cfg = load_config(config_path);
    const fs::path out_dir(out);
    fs::create_directories(out_dir);
    const auto states = load_states(states_path.empty() ? out_dir / "states.json" : states_path,
                                    cfg.scene);

    std::vector<std::string> outputs;
    for (const auto& state : states) {
        const ScatteringMatrix sm = scattering_matrix(state, cfg.scene);
        const std::string name = "sm_" + std::to_string(state.state_index) + ".scm";
        save_matrix(sm.entries, out_dir / name);
        outputs.push_back(name);
        std::cout << "state " << state.state_index << ": " << sm.entries.rows() << "x"
                  << sm.entries.cols() << " scattering matrix -> " << name << "\n";
    }
    write_manifest(out_dir, "compute-sm", json::object(), cfg, outputs);
    return 0;
}

int cmd_encrypt(const std::string& config_path, const std::string& run,
                const std::string& image_path, int q, int q_to, int block,
                std::uint64_t seed_keys) {
    const FullConfig cfg = load_config(config_path);
    const fs::path run_dir(run);
    Encryptor enc = load_encryptor(cfg, run_dir);
    const PlaintextImage img = load_sensor_image(image_path, cfg.scene);

    auto [ct, receipt] = enc.encrypt(img, q, q_to, block, seed_keys);
    const std::string suffix =
        std::to_string(q) + "_" + std::to_string(q_to) + "_b" + std::to_string(block);
    write_text_file(run_dir / ("ct_" + suffix + ".json"), ciphertext_to_json(ct).dump() + "\n");
    write_text_file(run_dir / ("receipt_" + suffix + ".json"),
                    receipt_to_json(receipt).dump(2) + "\n");
    save_keystore(enc, run_dir);
    write_pgm(image_from_values(ct.transparency.values, cfg.scene.hologram.nx,
                                cfg.scene.hologram.nz, "ciphertext"),
              run_dir / ("ct_" + suffix + ".pgm"));

    write_manifest(run_dir, "encrypt",
                   json{{"keys", seed_keys}, {"server_secret_file", "server_secret.json"}}, cfg,
                   {"ct_" + suffix + ".json", "receipt_" + suffix + ".json", "keystore.json"});
    std::cout << "ciphertext " << ct.key_id.substr(0, 12) << "... for (" << q << " -> " << q_to
              << ", block " << block << ") -> ct_" << suffix << ".json\n";
    return 0;
}

int cmd_decrypt(const std::string& config_path, const std::string& run, const std::string& ct_path,
                const std::string& receipt_path, const std::string& credential,
                const std::string& out_image, const std::string& reference_image,
                const std::string& mode_override) {
    FullConfig cfg = load_config(config_path);
    if (!mode_override.empty()) cfg.protocol.mode = mode_from_string(mode_override);
    Encryptor enc = load_encryptor(cfg, fs::path(run));

    const CiphertextHologram ct = ciphertext_from_json(json::parse(read_text_file(ct_path)));
    const Receipt receipt = receipt_from_json(json::parse(read_text_file(receipt_path)));
    const PlaintextImage img = enc.decrypt(ct, receipt, credential);
    write_pgm(img, out_image);
    std::cout << "plaintext released -> " << out_image << "\n";

    if (!reference_image.empty()) {
        const PlaintextImage ref = load_sensor_image(reference_image, cfg.scene);
        std::cout << "ssim vs reference: " << ssim(img, ref) << "\n";
    }
    return 0;
}

int cmd_attack_cross(const std::string& config_path, const std::string& run,
                     const std::vector<std::string>& images, int block, std::uint64_t seed_keys,
                     const std::string& out) {
    const FullConfig cfg = load_config(config_path);
    const fs::path run_dir(run);
    const fs::path out_dir(out.empty() ? (run_dir / "attack_cross").string() : out);
    fs::create_directories(out_dir / "images");
    Encryptor enc = load_encryptor(cfg, run_dir);

    if (images.size() != cfg.users.size())
        throw UsageError("need one plaintext image per configured user (" +
                         std::to_string(cfg.users.size()) + ")");

    std::vector<UserArtifacts> artifacts;
    std::size_t idx = 0;
    for (const auto& [user, credential] : cfg.users) {
        (void)credential;
        UserArtifacts ua;
        ua.user = user;
        ua.plaintext = load_sensor_image(images[idx++], cfg.scene);
        auto [ct, receipt] = enc.encrypt(ua.plaintext, user, user, block, seed_keys);
        ua.ciphertext = std::move(ct);
        ua.key = *enc.keys().find(receipt.key_id);

        const std::string tag = "user" + std::to_string(user);
        write_pgm(ua.plaintext, out_dir / "images" / ("plain_" + tag + ".pgm"));
        write_pgm(image_from_values(ua.ciphertext.transparency.values, cfg.scene.hologram.nx,
                                    cfg.scene.hologram.nz, "ct"),
                  out_dir / "images" / ("ct_" + tag + ".pgm"));
        write_pgm(enc.decrypt_with_key(ua.ciphertext, ua.key),
                  out_dir / "images" / ("correct_" + tag + ".pgm"));
        artifacts.push_back(std::move(ua));
    }

    const AttackReport report =
        cross_user_attack(enc, artifacts, SsimParams{}, out_dir / "images");
    write_text_file(out_dir / "report.csv", attack_report_csv(report));
    write_text_file(out_dir / "report.json", attack_report_json(report).dump(2) + "\n");
    save_keystore(enc, run_dir);

    write_manifest(out_dir, "attack-cross",
                   json{{"keys", seed_keys}, {"server_secret_file", "server_secret.json"}}, cfg,
                   {"report.csv", "report.json"});
    std::cout << "cross-user attack: correct ssim " << report.correct_ssim << ", max attack ssim "
              << report.max_attack_ssim << " over " << report.trials.size() << " pairs\n";
    return 0;
}

int cmd_attack_random(const std::string& config_path, const std::string& run,
                      const std::string& image_path, int user, int block, int trials,
                      std::uint64_t seed_keys, std::uint64_t seed_attack, const std::string& out) {
    const FullConfig cfg = load_config(config_path);
    const fs::path run_dir(run);
    const fs::path out_dir(out.empty() ? (run_dir / "attack_random").string() : out);
    fs::create_directories(out_dir / "images");
    Encryptor enc = load_encryptor(cfg, run_dir);

    const PlaintextImage img = load_sensor_image(image_path, cfg.scene);
    auto [ct, receipt] = enc.encrypt(img, user, user, block, seed_keys);
    const UserKey correct = *enc.keys().find(receipt.key_id);

    const AttackReport report =
        random_key_attack(enc, ct, img, correct, trials, seed_attack, SsimParams{},
                          out_dir / "images");
    write_pgm(img, out_dir / "images" / "plain.pgm");
    write_pgm(enc.decrypt_with_key(ct, correct), out_dir / "images" / "correct.pgm");

    // Near-miss analysis: wrapped phase distances per trial component.
    const auto distances = key_proximity_analysis(report, correct);
    std::ostringstream prox;
    prox << "trial";
    for (Eigen::Index i = 0; i < correct.coefficients.size(); ++i) prox << ",phase_dist_" << i;
    prox << "\n";
    for (std::size_t t = 0; t < distances.size(); ++t) {
        prox << t;
        for (double d : distances[t]) prox << "," << csv_number(d);
        prox << "\n";
    }

    write_text_file(out_dir / "report.csv", attack_report_csv(report));
    write_text_file(out_dir / "proximity.csv", prox.str());
    write_text_file(out_dir / "report.json", attack_report_json(report).dump(2) + "\n");
    save_keystore(enc, run_dir);

    write_manifest(out_dir, "attack-random",
                   json{{"keys", seed_keys},
                        {"attack", seed_attack},
                        {"server_secret_file", "server_secret.json"}},
                   cfg, {"report.csv", "proximity.csv", "report.json"});
    std::cout << "random-key attack: correct ssim " << report.correct_ssim << ", max over "
              << trials << " trials " << report.max_attack_ssim << "\n";
    return 0;
}

int cmd_report(const std::string& run, const std::string& out) {
    const fs::path run_dir(run);
    const fs::path out_dir(out.empty() ? (run_dir / "report").string() : out);
    fs::create_directories(out_dir);
    json summary;

    const fs::path cross_json = run_dir / "attack_cross" / "report.json";
    if (fs::exists(cross_json)) {
        const json r = json::parse(read_text_file(cross_json));
        summary["cross_user"] = {{"correct_ssim", r.at("correct_ssim")},
                                 {"max_attack_ssim", r.at("max_attack_ssim")},
                                 {"separation_ratio", r.at("separation_ratio")}};

        // Panel grid: one row per user [plaintext | ciphertext | correct
        // reconstruction], then the off-diagonal cross reconstructions.
        std::vector<std::vector<PlaintextImage>> rows;
        const fs::path imgdir = run_dir / "attack_cross" / "images";
        std::vector<int> users;
        for (const auto& entry : fs::directory_iterator(imgdir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("plain_user", 0) == 0)
                users.push_back(std::stoi(name.substr(10, name.size() - 10 - 4)));
        }
        std::sort(users.begin(), users.end());
        for (int u : users) {
            const std::string tag = "user" + std::to_string(u);
            std::vector<PlaintextImage> row{read_pgm(imgdir / ("plain_" + tag + ".pgm")),
                                            read_pgm(imgdir / ("ct_" + tag + ".pgm")),
                                            read_pgm(imgdir / ("correct_" + tag + ".pgm"))};
            for (int a : users)
                if (a != u) {
                    const fs::path p =
                        imgdir / ("victim" + std::to_string(u) + "<-attacker" + std::to_string(a) +
                                  ".pgm");
                    if (fs::exists(p)) row.push_back(read_pgm(p));
                }
            rows.push_back(std::move(row));
        }
        if (!rows.empty()) write_pgm(stitch_grid(rows), out_dir / "cross_user_grid.pgm");
    }

    const fs::path random_json = run_dir / "attack_random" / "report.json";
    if (fs::exists(random_json)) {
        const json r = json::parse(read_text_file(random_json));
        summary["random_key"] = {{"correct_ssim", r.at("correct_ssim")},
                                 {"max_attack_ssim", r.at("max_attack_ssim")},
                                 {"separation_ratio", r.at("separation_ratio")}};
        const fs::path imgdir = run_dir / "attack_random" / "images";
        std::vector<std::vector<PlaintextImage>> rows(2);
        rows[0].push_back(read_pgm(imgdir / "plain.pgm"));
        rows[0].push_back(read_pgm(imgdir / "correct.pgm"));
        for (const json& t : r.at("trials")) {
            const std::string path = t.value("image", "");
            if (!path.empty() && fs::exists(path) && rows[1].size() < 10)
                rows[1].push_back(read_pgm(path));
        }
        if (!rows[1].empty()) write_pgm(stitch_grid(rows), out_dir / "random_key_grid.pgm");
    }

    if (summary.empty())
        throw IoFailure("no attack reports found under " + run_dir.string() +
                        " (run `attack cross` / `attack random` first)");
    write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");
    std::cout << "report -> " << (out_dir / "summary.json").string() << "\n";
    return 0;
}

int cmd_cifar_to_pgm(const std::string& batch_path, int index, const std::string& out) {
    const auto bytes = read_file_bytes(batch_path);
    constexpr std::size_t record = 3073; // label + 3 * 1024 channel bytes
    if (bytes.size() < record || bytes.size() % record != 0)
        throw IoFailure(batch_path + ": not a CIFAR-10 binary batch");
    const std::size_t count = bytes.size() / record;
    if (index < 0 || static_cast<std::size_t>(index) >= count)
        throw UsageError("record index " + std::to_string(index) + " outside 0.." +
                         std::to_string(count - 1));

    const std::size_t base = static_cast<std::size_t>(index) * record + 1;
    PlaintextImage img;
    img.nx = 32;
    img.nz = 32;
    img.source = batch_path + "#" + std::to_string(index);
    img.pixels.resize(1024);
    for (int p = 0; p < 1024; ++p) {
        const double r = bytes[base + static_cast<std::size_t>(p)];
        const double g = bytes[base + 1024 + static_cast<std::size_t>(p)];
        const double b = bytes[base + 2048 + static_cast<std::size_t>(p)];
        img.pixels(p) = (0.299 * r + 0.587 * g + 0.114 * b) / 255.0;
    }
    write_pgm(img, out);
    std::cout << "record " << index << " (grayscale) -> " << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic scattering-channel image encryption simulator"};
    app.require_subcommand(1);

    std::string config_path, run_dir, out_dir, states_path;
    std::string image_path, ct_path, receipt_path, credential, out_image, reference_image;
    std::string mode_override;
    std::vector<std::string> images;
    std::uint64_t seed_medium = 1, seed_server = 2, seed_keys = 3, seed_attack = 4;
    int q = 1, q_to = 1, block = 0, trials = 20, cifar_index = 0;

    auto* gen = app.add_subcommand("gen-medium", "sample the L scattering states of a block");
    gen->add_option("--config", config_path, "scene/protocol config")->required();
    gen->add_option("--seed-medium", seed_medium, "medium sampling seed");
    gen->add_option("--seed-server", seed_server, "secret shuffle seed (stored server-side)");
    gen->add_option("--out", out_dir, "run directory")->required();

    auto* sm = app.add_subcommand("compute-sm", "compute per-state scattering matrices");
    sm->add_option("--config", config_path)->required();
    sm->add_option("--states", states_path, "states.json (default <out>/states.json)");
    sm->add_option("--out", out_dir, "run directory")->required();

    auto* enc = app.add_subcommand("encrypt", "encrypt a plaintext image for a user pair");
    enc->add_option("--config", config_path)->required();
    enc->add_option("--run", run_dir, "run directory with states + matrices")->required();
    enc->add_option("--image", image_path, "plaintext PGM on the sensor grid")->required();
    enc->add_option("--user-from", q);
    enc->add_option("--user-to", q_to);
    enc->add_option("--block", block);
    enc->add_option("--seed-keys", seed_keys);

    auto* dec = app.add_subcommand("decrypt", "decrypt a ciphertext with a receipt + credential");
    dec->add_option("--config", config_path)->required();
    dec->add_option("--run", run_dir)->required();
    dec->add_option("--ciphertext", ct_path)->required();
    dec->add_option("--receipt", receipt_path)->required();
    dec->add_option("--credential", credential)->required();
    dec->add_option("--out", out_image, "output PGM")->required();
    dec->add_option("--reference", reference_image, "optional reference image: prints SSIM");
    dec->add_option("--mode", mode_override, "field|hologram (overrides config)");

    auto* attack = app.add_subcommand("attack", "security evaluation harnesses");
    attack->require_subcommand(1);
    auto* cross = attack->add_subcommand("cross", "decrypt each user with the others' keys");
    cross->add_option("--config", config_path)->required();
    cross->add_option("--run", run_dir)->required();
    cross->add_option("--images", images, "one plaintext PGM per configured user")->required();
    cross->add_option("--block", block);
    cross->add_option("--seed-keys", seed_keys);
    cross->add_option("--out", out_dir, "default <run>/attack_cross");
    auto* random = attack->add_subcommand("random", "random-key brute force with known subset");
    random->add_option("--config", config_path)->required();
    random->add_option("--run", run_dir)->required();
    random->add_option("--image", image_path)->required();
    random->add_option("--user", q);
    random->add_option("--block", block);
    random->add_option("--trials", trials);
    random->add_option("--seed-keys", seed_keys);
    random->add_option("--seed-attack", seed_attack);
    random->add_option("--out", out_dir, "default <run>/attack_random");

    auto* report = app.add_subcommand("report", "assemble panel grids + summaries from a run");
    report->add_option("--run", run_dir)->required();
    report->add_option("--out", out_dir, "default <run>/report");

    auto* cifar = app.add_subcommand("cifar-to-pgm", "convert a CIFAR-10 batch record to PGM");
    cifar->add_option("--batch", image_path, "CIFAR-10 binary batch file")->required();
    cifar->add_option("--index", cifar_index, "record index");
    cifar->add_option("--out", out_image, "output PGM")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_medium(config_path, seed_medium, seed_server, out_dir);
        if (sm->parsed()) return cmd_compute_sm(config_path, states_path, out_dir);
        if (enc->parsed())
            return cmd_encrypt(config_path, run_dir, image_path, q, q_to, block, seed_keys);
        if (dec->parsed())
            return cmd_decrypt(config_path, run_dir, ct_path, receipt_path, credential, out_image,
                               reference_image, mode_override);
        if (cross->parsed())
            return cmd_attack_cross(config_path, run_dir, images, block, seed_keys, out_dir);
        if (random->parsed())
            return cmd_attack_random(config_path, run_dir, image_path, q, block, trials, seed_keys,
                                     seed_attack, out_dir);
        if (report->parsed()) return cmd_report(run_dir, out_dir);
        if (cifar->parsed()) return cmd_cifar_to_pgm(image_path, cifar_index, out_image);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
