#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qphase {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition (bad parameter, wrong mode).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The Fock cutoff needed for the requested tail tolerance exceeds the ceiling.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// A quantity is mathematically undefined for the given state, e.g. g2 of the
/// vacuum or a phase parameter whose denominator underflows.
class UndefinedQuantity : public Error {
 public:
  UndefinedQuantity(std::string quantity, const std::string& reason)
      : Error(quantity + ": " + reason), quantity_(std::move(quantity)) {}

  const std::string& quantity() const noexcept { return quantity_; }

 private:
  std::string quantity_;
};

}  // namespace qphase
