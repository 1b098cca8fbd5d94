#pragma once

#include <stdexcept>
#include <string>

namespace macrsv {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct OversizePacket : std::runtime_error {
    explicit OversizePacket(const std::string& what) : std::runtime_error(what) {}
};

struct DuplicateSender : std::runtime_error {
    explicit DuplicateSender(const std::string& what) : std::runtime_error(what) {}
};

struct ProtocolViolation : std::runtime_error {
    explicit ProtocolViolation(const std::string& what) : std::runtime_error(what) {}
};

struct TruncationError : std::runtime_error {
    double truncation_mass;
    int n_max;
    TruncationError(const std::string& what, double mass, int n)
        : std::runtime_error(what), truncation_mass(mass), n_max(n) {}
};

struct NoConvergence : std::runtime_error {
    double residual;
    long iterations;
    NoConvergence(const std::string& what, double res, long iters)
        : std::runtime_error(what), residual(res), iterations(iters) {}
};

}  // namespace macrsv
