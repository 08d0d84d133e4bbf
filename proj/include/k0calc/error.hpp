// error.hpp: error taxonomy shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace k0calc {

enum class ErrorKind {
    FieldMismatch,
    DegenerateDivisor,
    DegenerateInput,
    ArityError,
    SizeLimit,
    CharZeroUnsupported,
    NoEmbedding,
    BoundVarError,
    AmbientError,
    VarError,
    NotASentence,
    NotABijection,
    ParseError,
    RegistryError,
};

const char* error_kind_name(ErrorKind k);

class CalcError : public std::runtime_error {
  public:
    CalcError(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
    throw CalcError(kind, msg);
}

}  // namespace k0calc
