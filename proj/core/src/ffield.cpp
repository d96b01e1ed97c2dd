#include "pmrc/ffield.hpp"

namespace pmrc {

bool is_prime(std::uint64_t value) noexcept {
  if (value < 2) return false;
  if (value < 4) return true;
  if (value % 2 == 0 || value % 3 == 0) return false;
  for (std::uint64_t f = 5; f * f <= value; f += 6) {
    if (value % f == 0 || value % (f + 2) == 0) return false;
  }
  return true;
}

std::uint64_t smallest_valid_prime(std::uint64_t lower_bound) {
  std::uint64_t candidate = lower_bound < 2 ? 2 : lower_bound;
  while (!is_prime(candidate)) {
    ++candidate;
  }
  return candidate;
}

Field::Field(std::uint64_t q) : q_(q) {
  if (q > kMaxModulus || !is_prime(q)) {
    throw Error(Errc::NotPrime, "field modulus " + std::to_string(q) + " is not a supported prime");
  }
}

Symbol Field::inv(Symbol a) const {
  if (a % q_ == 0) throw Error(Errc::DivisionByZero, "inverse of zero");
  // Extended Euclid on signed 64-bit; q < 2^32 so nothing overflows.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(q_), new_r = static_cast<std::int64_t>(a % q_);
  while (new_r != 0) {
    std::int64_t quotient = r / new_r;
    std::int64_t tmp = t - quotient * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quotient * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += static_cast<std::int64_t>(q_);
  return static_cast<Symbol>(t);
}

Symbol Field::pow(Symbol a, std::uint64_t e) const noexcept {
  Symbol result = 1 % q_;
  Symbol base = reduce(a);
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

namespace {

void require_same_field(const FieldElement& a, const FieldElement& b) {
  if (!(a.field() == b.field())) {
    throw Error(Errc::FieldMismatch, "F_" + std::to_string(a.field().modulus()) + " vs F_" +
                                         std::to_string(b.field().modulus()));
  }
}

}  // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {a.field_, a.field_.add(a.value_, b.value_)};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {a.field_, a.field_.sub(a.value_, b.value_)};
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {a.field_, a.field_.mul(a.value_, b.value_)};
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {a.field_, a.field_.div(a.value_, b.value_)};
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return a.value_ == b.value_;
}

FieldElement arith(const FieldElement& a, const FieldElement& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
  }
  return a;
}

}  // namespace pmrc
