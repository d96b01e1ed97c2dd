#include "pmrc/shortening.hpp"

namespace pmrc {

ShortenedCodec::ShortenedCodec(const CodeParams& params, std::shared_ptr<const Codec> parent,
                               std::size_t depth)
    : Codec(params), parent_(std::move(parent)), depth_(depth) {
  const auto& pp = parent_->params();
  if (pp.n != params.n + depth || pp.k != params.k + depth || pp.d != params.d + depth ||
      pp.alpha != params.alpha || pp.q != params.q || pp.B != params.B + depth * params.alpha) {
    throw Error(Errc::InfeasibleParameters,
                describe(params) + " is not a depth-" + std::to_string(depth) + " shortening of " +
                    describe(pp));
  }
}

std::vector<Symbol> ShortenedCodec::embed(std::span<const Symbol> message) const {
  std::vector<Symbol> full(depth_ * params().alpha, 0);
  full.insert(full.end(), message.begin(), message.end());
  return full;
}

Matrix ShortenedCodec::encode(std::span<const Symbol> message) const {
  check_message(message);
  Matrix full = parent_->encode(embed(message));
  return row_range(full, depth_, params().n);
}

std::vector<Symbol> ShortenedCodec::repair_vector(NodeId failed) const {
  check_node(failed);
  return parent_->repair_vector(failed + depth_);
}

std::vector<Symbol> ShortenedCodec::repair(NodeId failed, std::span<const NodeId> helpers,
                                           std::span<const Symbol> symbols) const {
  check_helpers(failed, helpers, symbols);
  const std::size_t parent_needed = parent_->helpers_required();
  std::vector<NodeId> parent_helpers;
  std::vector<Symbol> parent_symbols;
  parent_helpers.reserve(parent_needed);
  parent_symbols.reserve(parent_needed);
  for (NodeId v = 1; v <= depth_; ++v) {
    parent_helpers.push_back(v);
    parent_symbols.push_back(0);
  }
  for (std::size_t j = 0; j < helpers.size(); ++j) {
    parent_helpers.push_back(helpers[j] + depth_);
    parent_symbols.push_back(symbols[j]);
  }
  return parent_->repair(failed + depth_, parent_helpers, parent_symbols);
}

std::vector<Symbol> ShortenedCodec::reconstruct(std::span<const NodeId> nodes,
                                                const Matrix& rows) const {
  check_collection(nodes, rows);
  std::vector<NodeId> parent_nodes;
  for (NodeId v = 1; v <= depth_; ++v) parent_nodes.push_back(v);
  for (NodeId id : nodes) parent_nodes.push_back(id + depth_);
  Matrix parent_rows = vstack(Matrix(field(), depth_, params().alpha), rows);
  std::vector<Symbol> full = parent_->reconstruct(parent_nodes, parent_rows);
  const std::size_t pinned = depth_ * params().alpha;
  for (std::size_t i = 0; i < pinned; ++i) {
    if (full[i] != 0) throw Error(Errc::Corruption, "pinned parent symbol decoded nonzero");
  }
  return {full.begin() + static_cast<std::ptrdiff_t>(pinned), full.end()};
}

std::size_t ShortenedCodec::helpers_required() const noexcept {
  return parent_->helpers_required() - depth_;
}

std::string ShortenedCodec::description() const {
  return describe(params()) + " shortened by " + std::to_string(depth_) + " from " +
         parent_->description();
}

}  // namespace pmrc
