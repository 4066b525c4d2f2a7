#pragma once

#include <complex>
#include <stdexcept>

namespace helmbem {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEuler = 0.57721566490153286061;

enum class HankelKind { First, Second };

// +1 for the first kind, -1 for the second: the sign picked in every ± formula.
inline double kind_sign(HankelKind kind) { return kind == HankelKind::First ? 1.0 : -1.0; }

inline cplx with_kind(HankelKind kind, cplx first) {
    return kind == HankelKind::First ? first : std::conj(first);
}

// Kernel quantities carry the i/4 prefactor, so the second kind is minus the conjugate.
inline cplx kernel_kind(HankelKind kind, cplx first) {
    return kind == HankelKind::First ? first : -std::conj(first);
}

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace helmbem
