#pragma once

#include <stdexcept>
#include <string>

namespace scatcrypt {

// Exit-code categories used by the CLI: 1 usage, 2 validation, 3 numerical,
// 4 I/O, 5 auth.
enum class ErrorCategory { usage = 1, validation = 2, numerical = 3, io = 4, auth = 5 };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& what) : std::runtime_error(what), category_(cat) {}
    ErrorCategory category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
};

#define SCATCRYPT_DEFINE_ERROR(name, cat)                                        \
    class name : public Error {                                                  \
    public:                                                                      \
        explicit name(const std::string& what)                                   \
            : Error(ErrorCategory::cat, std::string(#name) + ": " + what) {}     \
    }

// scene / geometry
SCATCRYPT_DEFINE_ERROR(InvalidGeometry, validation);

// wavefield
SCATCRYPT_DEFINE_ERROR(CoincidentPoints, validation);

// foldylax / inversion
SCATCRYPT_DEFINE_ERROR(SingularSystemError, numerical);
SCATCRYPT_DEFINE_ERROR(NumericalFailure, numerical);
SCATCRYPT_DEFINE_ERROR(EmptySpectrum, numerical);

// holography
SCATCRYPT_DEFINE_ERROR(GeometryMismatch, validation);
SCATCRYPT_DEFINE_ERROR(CarrierOverlap, numerical);

// keyring
SCATCRYPT_DEFINE_ERROR(InvalidSubsetSize, validation);
SCATCRYPT_DEFINE_ERROR(ShapeMismatch, validation);

// metrics
SCATCRYPT_DEFINE_ERROR(DimensionMismatch, validation);
SCATCRYPT_DEFINE_ERROR(WindowTooLarge, validation);

// attacks
SCATCRYPT_DEFINE_ERROR(SubsetMismatch, validation);
SCATCRYPT_DEFINE_ERROR(InsufficientUsers, validation);

// protocol
SCATCRYPT_DEFINE_ERROR(UnknownUser, validation);
SCATCRYPT_DEFINE_ERROR(AuthFailure, auth);
SCATCRYPT_DEFINE_ERROR(DigestMismatch, auth);
SCATCRYPT_DEFINE_ERROR(UnknownReceipt, auth);

// store
SCATCRYPT_DEFINE_ERROR(IoFailure, io);
SCATCRYPT_DEFINE_ERROR(BadMagic, io);
SCATCRYPT_DEFINE_ERROR(BadChecksum, io);
SCATCRYPT_DEFINE_ERROR(UnsupportedVersion, io);

// cli
SCATCRYPT_DEFINE_ERROR(UsageError, usage);

#undef SCATCRYPT_DEFINE_ERROR

} // namespace scatcrypt
