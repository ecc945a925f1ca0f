// Minimal end-to-end walkthrough of the library API: build a small scene,
// compute the four state matrices, encrypt a synthetic image for user 1, and
// decrypt it with the issued receipt.

#include <iostream>
#include <map>

#include "scatcrypt/scatcrypt.hpp"

using namespace scatcrypt;

int main() {
    SceneConfig sc;
    sc.hologram = {Vec3::Zero(), 24.0, 24.0, 12, 12, "hologram"};
    sc.sensor = {Vec3::Zero(), 26.0, 26.0, 10, 10, "sensor"};
    sc.medium = {20.0, 20.0, 10.0, 6, 3, 6, -11.0, -3.0, 5.0, 5.0, 0.0};
    const Scene scene = build_scene(sc);

    ProtocolConfig cfg;
    std::vector<ScatteringMatrix> sms;
    for (int l = 1; l <= cfg.total_states; ++l)
        sms.push_back(scattering_matrix(sample_state(scene.medium, l, 12345), scene));

    Encryptor encryptor(scene, std::move(sms), {{1, "demo-pass"}}, /*server_seed=*/777, cfg);

    // A couple of blobs as the plaintext.
    PlaintextImage img;
    img.nx = scene.sensor.nx;
    img.nz = scene.sensor.nz;
    img.pixels.resize(img.size());
    for (int z = 0; z < img.nz; ++z)
        for (int x = 0; x < img.nx; ++x)
            img.pixels(z * img.nx + x) =
                std::exp(-0.08 * ((x - 3) * (x - 3) + (z - 3) * (z - 3))) +
                0.7 * std::exp(-0.15 * ((x - 7) * (x - 7) + (z - 6) * (z - 6)));
    img.pixels = minmax_normalize(img.pixels);

    auto [ciphertext, receipt] = encryptor.encrypt(img, 1, 1, /*block=*/0, /*key_seed=*/42);
    const PlaintextImage out = encryptor.decrypt(ciphertext, receipt, "demo-pass");

    SsimParams params;
    params.window = 5;
    std::cout << "correct-key reconstruction ssim: " << ssim(out, img, params) << "\n";

    UserKey plain_sum = *encryptor.keys().find(receipt.key_id);
    plain_sum.coefficients.setOnes();
    std::cout << "plain-sum (all-ones key) ssim:   "
              << ssim(encryptor.decrypt_with_key(ciphertext, plain_sum), img, params) << "\n";
    return 0;
}
