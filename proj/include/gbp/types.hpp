#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace gbp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = int;

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularMatrix : Error {
    using Error::Error;
};
struct NonPositiveDiagonal : Error {
    using Error::Error;
};
struct ZeroDiagonal : Error {
    using Error::Error;
};
struct NotWeaklyDominant : Error {
    using Error::Error;
};
struct NotGeneralizedDominant : Error {
    using Error::Error;
};
struct NonPositiveLambda : Error {
    using Error::Error;
};
struct TreeTooLarge : Error {
    using Error::Error;
};
struct GenerationFailed : Error {
    using Error::Error;
};
struct MissingDiagonal : Error {
    using Error::Error;
};
struct NonSquare : Error {
    using Error::Error;
};

/// Message-passing divisor collapse. Carries the round and the directed edge
/// (from,to) where the guard tripped; from == to marks a node divisor a_i.
struct NumericalFailure : Error {
    int round;
    Index from;
    Index to;
    NumericalFailure(int round_, Index from_, Index to_, const std::string& what_)
        : Error(what_), round(round_), from(from_), to(to_) {}
};

struct ParseError : Error {
    long line;
    ParseError(long line_, const std::string& what_)
        : Error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

}  // namespace gbp
