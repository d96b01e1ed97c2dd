#pragma once

#include <memory>
#include <span>
#include <vector>

#include "pmrc/codec.hpp"

namespace pmrc {

/// B x (n alpha) generator, blocked as [G_1 ... G_n] with G_i of width alpha:
/// flatten(encode(u)) == u^t G.
struct GeneratorMatrix {
  Matrix G;
  std::size_t n = 0;
  std::size_t alpha = 0;

  // G_i for 1-based node i.
  Matrix block(NodeId node) const;
};

GeneratorMatrix extract_generator(const Codec& codec);

struct SymbolPosition {
  NodeId node = 0;
  std::size_t index = 0;  // 0-based within the node's alpha symbols
  friend bool operator==(const SymbolPosition&, const SymbolPosition&) = default;
};

struct SystematicMap {
  Matrix selected;  // G~: B independent columns of the chosen blocks
  Matrix remap;     // G~^-1; feed u^t G~^-1 to the base code
  std::vector<SymbolPosition> positions;  // where u_j lands, in order
};

// Scans the chosen blocks' columns left to right (in the given node order),
// keeping a column iff it raises the rank, until B are kept. Throws
// RankDeficient if the chosen nodes cannot reach rank B.
SystematicMap make_systematic(const Codec& codec, std::span<const NodeId> systematic_ids);

/// Base code fed with u^t G~^-1, so symbol positions()[j] stores u_j.
/// Repair is unchanged: the remap is a change of message basis, so every
/// node keeps its subspace up to that change.
class GeneratorRemapCodec final : public Codec {
 public:
  GeneratorRemapCodec(std::shared_ptr<const Codec> base, std::vector<NodeId> systematic_ids);

  const Codec& base() const noexcept { return *base_; }
  const SystematicMap& map() const noexcept { return map_; }

  Matrix encode(std::span<const Symbol> message) const override;
  std::vector<Symbol> repair_vector(NodeId failed) const override {
    return base_->repair_vector(failed);
  }
  std::vector<Symbol> repair(NodeId failed, std::span<const NodeId> helpers,
                             std::span<const Symbol> symbols) const override {
    return base_->repair(failed, helpers, symbols);
  }
  std::vector<Symbol> reconstruct(std::span<const NodeId> nodes, const Matrix& rows) const override;
  std::size_t helpers_required() const noexcept override { return base_->helpers_required(); }
  std::string description() const override;

 private:
  std::shared_ptr<const Codec> base_;
  std::vector<NodeId> ids_;
  SystematicMap map_;
};

// True iff column-space(a.block(i)) == column-space(b.block(i)) for every
// node, i.e. the two codes use the same message basis. Column spaces are
// compared through the reduced row echelon form of each block's transpose.
// Throws ShapeMismatch unless n, alpha, B and the field agree.
bool same_subspaces(const GeneratorMatrix& a, const GeneratorMatrix& b);

// True iff some invertible B x B matrix X maps every column space of a onto
// the matching one of b. This accepts b = X a.G blockdiag(Y_1..Y_n) for any
// invertible X and Y_i, and rejects b when a block has lost rank.
//
// X W_i(a) inside W_i(b) is linear in the entries of X; the solution space
// is searched for an invertible member (its basis, then seeded random
// combinations). A true result is always backed by an explicit X. Throws
// ShapeMismatch like same_subspaces.
bool check_equivalence(const GeneratorMatrix& a, const GeneratorMatrix& b);

}  // namespace pmrc
