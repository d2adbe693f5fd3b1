#pragma once

#include <stdexcept>
#include <string>

namespace bsseries {

enum class ErrorKind {
    InvalidInput,
    PoleError,
    DegenerateVolatility,
    TruncationCapExceeded,
    BranchDomain,
    PoleProximity,
    QuadratureUnresolved,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(ErrorKind::InvalidInput, what) {}
};

class PoleError : public Error {
public:
    explicit PoleError(const std::string& what) : Error(ErrorKind::PoleError, what) {}
};

class DegenerateVolatility : public Error {
public:
    explicit DegenerateVolatility(const std::string& what)
        : Error(ErrorKind::DegenerateVolatility, what) {}
};

/// Adaptive truncation did not reach the requested tolerance within j_cap.
/// Carries the best available price (NaN when thrown before any summation).
class TruncationCapExceeded : public Error {
public:
    TruncationCapExceeded(const std::string& what, int j_cap, double best_price, double tail_bound)
        : Error(ErrorKind::TruncationCapExceeded, what),
          j_cap_(j_cap), best_price_(best_price), tail_bound_(tail_bound) {}

    int j_cap() const noexcept { return j_cap_; }
    double best_price() const noexcept { return best_price_; }
    double tail_bound() const noexcept { return tail_bound_; }

private:
    int j_cap_;
    double best_price_;
    double tail_bound_;
};

class BranchDomain : public Error {
public:
    explicit BranchDomain(const std::string& what) : Error(ErrorKind::BranchDomain, what) {}
};

class PoleProximity : public Error {
public:
    explicit PoleProximity(const std::string& what) : Error(ErrorKind::PoleProximity, what) {}
};

class QuadratureUnresolved : public Error {
public:
    QuadratureUnresolved(const std::string& what, double price, double halved_step_price)
        : Error(ErrorKind::QuadratureUnresolved, what),
          price_(price), halved_step_price_(halved_step_price) {}

    double price() const noexcept { return price_; }
    double halved_step_price() const noexcept { return halved_step_price_; }

private:
    double price_;
    double halved_step_price_;
};

} // namespace bsseries
