#pragma once

#include <cstdint>
#include <string>

#include "pmrc/error.hpp"

namespace pmrc {

// Raw field symbol. Every modulus we accept is below 2^32, so a symbol fits
// in 32 bits and a product of two fits in 64.
using Symbol = std::uint32_t;

bool is_prime(std::uint64_t value) noexcept;

// Smallest prime >= lower_bound.
std::uint64_t smallest_valid_prime(std::uint64_t lower_bound);

/// Prime field F_q. Cheap to copy; two contexts compare equal iff they share
/// the modulus.
///
/// The raw-symbol methods (add, mul, ...) do no range checking and are the
/// hot path used by the matrix code. FieldElement is the checked API.
class Field {
 public:
  static constexpr std::uint64_t kMaxModulus = 0xFFFFFFFFull;

  // Throws NotPrime unless q is a prime in [2, kMaxModulus].
  explicit Field(std::uint64_t q);

  std::uint64_t modulus() const noexcept { return q_; }

  bool contains(std::uint64_t value) const noexcept { return value < q_; }
  Symbol reduce(std::uint64_t value) const noexcept { return static_cast<Symbol>(value % q_); }

  Symbol add(Symbol a, Symbol b) const noexcept {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Symbol>(s >= q_ ? s - q_ : s);
  }
  Symbol sub(Symbol a, Symbol b) const noexcept {
    return static_cast<Symbol>(a >= b ? a - b : q_ - (b - a));
  }
  Symbol neg(Symbol a) const noexcept { return a == 0 ? 0 : static_cast<Symbol>(q_ - a); }
  Symbol mul(Symbol a, Symbol b) const noexcept {
    return static_cast<Symbol>((std::uint64_t{a} * b) % q_);
  }
  // a + b*c
  Symbol mul_add(Symbol a, Symbol b, Symbol c) const noexcept {
    return static_cast<Symbol>((std::uint64_t{a} + std::uint64_t{b} * c) % q_);
  }
  // Throws DivisionByZero for a == 0.
  Symbol inv(Symbol a) const;
  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }
  // 0^0 == 1.
  Symbol pow(Symbol a, std::uint64_t e) const noexcept;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::uint64_t q_;
};

class FieldElement {
 public:
  // value is reduced mod q.
  FieldElement(const Field& field, std::uint64_t value)
      : field_(field), value_(field.reduce(value)) {}

  const Field& field() const noexcept { return field_; }
  Symbol value() const noexcept { return value_; }

  FieldElement inv() const { return {field_, field_.inv(value_)}; }
  FieldElement pow(std::uint64_t e) const { return {field_, field_.pow(value_, e)}; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const { return {field_, field_.neg(value_)}; }

  // Comparing elements of different fields is a FieldMismatch, not false.
  friend bool operator==(const FieldElement& a, const FieldElement& b);

  std::string to_string() const { return std::to_string(value_); }

 private:
  Field field_;
  Symbol value_;
};

enum class ArithOp { Add, Sub, Mul };

FieldElement arith(const FieldElement& a, const FieldElement& b, ArithOp op);

}  // namespace pmrc
