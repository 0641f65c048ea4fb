#pragma once

#include <stdexcept>
#include <string>

namespace fpphe {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid generator or model parameters.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Requested structure exceeds the vertex budget.
class SizeError : public Error {
public:
    using Error::Error;
};

// A computation would reach past the truncation frontier.
class RangeError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class NoPathError : public Error {
public:
    using Error::Error;
};

class EmbeddingFailure : public Error {
public:
    EmbeddingFailure(const std::string& what, int stuck_leaf, int generation)
        : Error(what), stuck_leaf_(stuck_leaf), generation_(generation) {}

    int stuck_leaf() const { return stuck_leaf_; }
    // Generation of the stuck leaf.
    int generation() const { return generation_; }

private:
    int stuck_leaf_;
    int generation_;
};

// Result would depend on the truncation boundary.
class ContaminationError : public Error {
public:
    using Error::Error;
};

class ConsistencyError : public Error {
public:
    using Error::Error;
};

class VersionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace fpphe
