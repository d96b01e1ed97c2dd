#pragma once

#include <memory>

#include "pmrc/codec.hpp"

namespace pmrc {

/// [n, k, d] code carved out of an [n+i, k+i, d+i] parent.
///
/// The parent must be systematic on its first k+i nodes in order (node j
/// stores message symbols (j-1)*alpha .. j*alpha-1). Messages are embedded
/// with their first i*alpha parent symbols pinned to zero, so parent nodes
/// 1..i always store zero rows; those rows are dropped on encode. They act
/// as virtual nodes: a virtual helper's contribution is the inner product of
/// a zero row, i.e. 0, and a collector can always add them as known rows.
class ShortenedCodec final : public Codec {
 public:
  ShortenedCodec(const CodeParams& params, std::shared_ptr<const Codec> parent, std::size_t depth);

  const Codec& parent() const noexcept { return *parent_; }
  std::size_t depth() const noexcept { return depth_; }

  Matrix encode(std::span<const Symbol> message) const override;
  std::vector<Symbol> repair_vector(NodeId failed) const override;
  std::vector<Symbol> repair(NodeId failed, std::span<const NodeId> helpers,
                             std::span<const Symbol> symbols) const override;
  std::vector<Symbol> reconstruct(std::span<const NodeId> nodes, const Matrix& rows) const override;
  std::size_t helpers_required() const noexcept override;
  std::string description() const override;

  // The parent message a user message is embedded as.
  std::vector<Symbol> embed(std::span<const Symbol> message) const;

 private:
  std::shared_ptr<const Codec> parent_;
  std::size_t depth_;
};

}  // namespace pmrc
