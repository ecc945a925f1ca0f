#pragma once

// Umbrella header for the whole library.

#include "scatcrypt/attacks.hpp"
#include "scatcrypt/config.hpp"
#include "scatcrypt/errors.hpp"
#include "scatcrypt/foldylax.hpp"
#include "scatcrypt/geometry.hpp"
#include "scatcrypt/holography.hpp"
#include "scatcrypt/image.hpp"
#include "scatcrypt/inversion.hpp"
#include "scatcrypt/keyring.hpp"
#include "scatcrypt/metrics.hpp"
#include "scatcrypt/parallel.hpp"
#include "scatcrypt/protocol.hpp"
#include "scatcrypt/rng.hpp"
#include "scatcrypt/sha256.hpp"
#include "scatcrypt/store.hpp"
#include "scatcrypt/wavefield.hpp"
