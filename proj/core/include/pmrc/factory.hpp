#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "pmrc/codec.hpp"
#include "pmrc/mbr.hpp"

namespace pmrc {

struct CodecOptions {
  MbrVariant mbr_variant = MbrVariant::Vandermonde;
  // Non-empty: k node ids that should store the message uncoded. MSR codes
  // solve for the message matrix through reconstruction; MBR and MISER codes
  // use the generator-matrix remap.
  std::vector<NodeId> systematic;
  std::optional<Symbol> miser_rho;
};

std::shared_ptr<const Codec> build_codec(const CodeParams& params, const CodecOptions& options = {});

}  // namespace pmrc
