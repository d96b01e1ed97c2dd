#include "pmrc/error.hpp"

namespace pmrc {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::Singular: return "Singular";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::Inconsistent: return "Inconsistent";
    case Errc::DuplicatePoint: return "DuplicatePoint";
    case Errc::ZeroPoint: return "ZeroPoint";
    case Errc::DegeneratePoints: return "DegeneratePoints";
    case Errc::InfeasibleParameters: return "InfeasibleParameters";
    case Errc::BadFieldOverride: return "BadFieldOverride";
    case Errc::FieldTooSmall: return "FieldTooSmall";
    case Errc::WrongLength: return "WrongLength";
    case Errc::SelfHelp: return "SelfHelp";
    case Errc::BadHelperCount: return "BadHelperCount";
    case Errc::BadNodeCount: return "BadNodeCount";
    case Errc::WrongBranch: return "WrongBranch";
    case Errc::DependentBasis: return "DependentBasis";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::FieldTooSmallForBytes: return "FieldTooSmallForBytes";
    case Errc::HeaderMismatch: return "HeaderMismatch";
    case Errc::BadShareCount: return "BadShareCount";
    case Errc::CorruptShare: return "CorruptShare";
    case Errc::ConfigError: return "ConfigError";
    case Errc::RepairBlocked: return "RepairBlocked";
    case Errc::Corruption: return "Corruption";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace pmrc
