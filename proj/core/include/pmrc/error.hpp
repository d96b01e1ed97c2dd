#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmrc {

enum class Errc {
  NotPrime,
  FieldMismatch,
  DivisionByZero,
  DimensionMismatch,
  Singular,
  IndexOutOfRange,
  Inconsistent,
  DuplicatePoint,
  ZeroPoint,
  DegeneratePoints,
  InfeasibleParameters,
  BadFieldOverride,
  FieldTooSmall,
  WrongLength,
  SelfHelp,
  BadHelperCount,
  BadNodeCount,
  WrongBranch,
  DependentBasis,
  RankDeficient,
  ShapeMismatch,
  FieldTooSmallForBytes,
  HeaderMismatch,
  BadShareCount,
  CorruptShare,
  ConfigError,
  RepairBlocked,
  // An invariant established at construction no longer holds (e.g. a
  // repair or reconstruction matrix turned out singular).
  Corruption,
  Io,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pmrc
