#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ternrep {

enum class ErrorKind {
    Overflow,
    InvalidInput,
    NotPositiveDefinite,
    UnknownFixture,
    IncompleteTransformSet,
    CoverIncomplete,
    ClassUnprovable,
    NoEscapeMatrix,
    EigenvalueBaseNotRepresented,
    MismatchAt,
    CertificateFormat,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Overflow: return "Overflow";
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::UnknownFixture: return "UnknownFixture";
        case ErrorKind::IncompleteTransformSet: return "IncompleteTransformSet";
        case ErrorKind::CoverIncomplete: return "CoverIncomplete";
        case ErrorKind::ClassUnprovable: return "ClassUnprovable";
        case ErrorKind::NoEscapeMatrix: return "NoEscapeMatrix";
        case ErrorKind::EigenvalueBaseNotRepresented: return "EigenvalueBaseNotRepresented";
        case ErrorKind::MismatchAt: return "MismatchAt";
        case ErrorKind::CertificateFormat: return "CertificateFormat";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ternrep
