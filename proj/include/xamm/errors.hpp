#pragma once

#include <stdexcept>
#include <string>

namespace xamm {

/// Base for every error raised by the library.
class AmmError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (non-positive balance, bad weight, ...).
class DomainError : public AmmError {
public:
    using AmmError::AmmError;
};

class NoConvergence : public AmmError {
public:
    using AmmError::AmmError;
};

/// The requested output would leave a balance below the dust floor.
class InsufficientLiquidity : public AmmError {
public:
    using AmmError::AmmError;
};

class SlippageExceeded : public AmmError {
public:
    SlippageExceeded(double amount_out, double min_out)
        : AmmError("slippage exceeded: output " + std::to_string(amount_out) +
                   " below minimum " + std::to_string(min_out)),
          amount_out_(amount_out), min_out_(min_out) {}

    double amount_out() const noexcept { return amount_out_; }
    double min_out() const noexcept { return min_out_; }

private:
    double amount_out_;
    double min_out_;
};

class UnknownAsset : public AmmError {
public:
    explicit UnknownAsset(const std::string& id) : AmmError("unknown asset '" + id + "'") {}
};

class ValidationError : public AmmError {
public:
    using AmmError::AmmError;
};

class InsufficientShares : public AmmError {
public:
    using AmmError::AmmError;
};

}  // namespace xamm
