#pragma once

#include <stdexcept>
#include <string>

namespace curvkit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mesh validation failures.
struct MeshError : Error {
    enum class Code {
        NonManifoldEdge,
        InconsistentOrientation,
        DegenerateFace,
        IndexOutOfRange,
        NotTriangular,
        Invalid,
    };
    Code code;
    MeshError(Code c, const std::string& msg) : Error(msg), code(c) {}
};

struct IoError : Error {
    using Error::Error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

// Iterative solver or projection hit its iteration cap.
struct NoConvergence : Error {
    double residual;
    int iterations;
    NoConvergence(const std::string& msg, double res, int it)
        : Error(msg + " (residual " + std::to_string(res) + " after " + std::to_string(it) +
                " iterations)"),
          residual(res),
          iterations(it) {}
};

struct SingularGradient : Error {
    using Error::Error;
};

struct ZeroNodalVector : Error {
    using Error::Error;
};

struct NonPositiveError : Error {
    using Error::Error;
};

struct DivisionByZero : Error {
    using Error::Error;
};

struct InvalidBracket : Error {
    using Error::Error;
};

struct PlacementFailure : Error {
    using Error::Error;
};

}  // namespace curvkit
