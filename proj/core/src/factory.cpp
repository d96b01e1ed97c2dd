#include "pmrc/factory.hpp"

#include "pmrc/miser.hpp"
#include "pmrc/msr.hpp"
#include "pmrc/systematizer.hpp"

namespace pmrc {

std::shared_ptr<const Codec> build_codec(const CodeParams& params, const CodecOptions& options) {
  std::shared_ptr<const Codec> codec;
  switch (params.kind) {
    case CodeKind::Mbr:
      codec = std::make_shared<MbrCodec>(params, options.mbr_variant);
      break;
    case CodeKind::Msr:
      codec = msr_build(params);
      break;
    case CodeKind::Miser:
      codec = miser_build(params, options.miser_rho);
      break;
  }
  if (options.systematic.empty()) return codec;
  if (params.kind == CodeKind::Msr) return msr_systematic_remap(std::move(codec), options.systematic);
  return std::make_shared<GeneratorRemapCodec>(std::move(codec), options.systematic);
}

}  // namespace pmrc
