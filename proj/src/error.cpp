#include "k0calc/error.hpp"

namespace k0calc {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::FieldMismatch: return "FieldMismatch";
        case ErrorKind::DegenerateDivisor: return "DegenerateDivisor";
        case ErrorKind::DegenerateInput: return "DegenerateInput";
        case ErrorKind::ArityError: return "ArityError";
        case ErrorKind::SizeLimit: return "SizeLimit";
        case ErrorKind::CharZeroUnsupported: return "CharZeroUnsupported";
        case ErrorKind::NoEmbedding: return "NoEmbedding";
        case ErrorKind::BoundVarError: return "BoundVarError";
        case ErrorKind::AmbientError: return "AmbientError";
        case ErrorKind::VarError: return "VarError";
        case ErrorKind::NotASentence: return "NotASentence";
        case ErrorKind::NotABijection: return "NotABijection";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::RegistryError: return "RegistryError";
    }
    return "CalcError";
}

}  // namespace k0calc
