#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace magalg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad caller-supplied parameter (zero axis, empty configuration, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Field point within the singularity guard of a magnet.
class SingularFieldPoint : public Error {
public:
    explicit SingularFieldPoint(std::size_t magnet_index)
        : Error("singular field point: within guard distance of magnet " +
                std::to_string(magnet_index)),
          index_(magnet_index) {}

    std::size_t magnet_index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class NotInvariantPlane : public Error {
public:
    explicit NotInvariantPlane(double residual)
        : Error("not an invariant plane (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class TrivialAlgebra : public Error {
public:
    TrivialAlgebra() : Error("trivial algebra") {}
};

}  // namespace magalg
