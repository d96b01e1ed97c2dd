#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pmrc/code_params.hpp"
#include "pmrc/ffield.hpp"
#include "pmrc/matrix.hpp"

namespace pmrc {

// Node ids are 1-based throughout the public API.
using NodeId = std::size_t;

/// Contract shared by every regenerating code in the library.
///
/// A stripe is a message of params().B symbols; encoding yields an n x alpha
/// code matrix whose row i is what node i stores. Repair of node f is driven
/// by the repair vector mu_f: each helper sends the inner product of its
/// stored row with mu_f, and mu_f depends on f alone, so helpers never need
/// to know who else is helping.
///
/// Implementations are immutable after construction; every method is const
/// and safe to call concurrently.
class Codec {
 public:
  virtual ~Codec() = default;

  const CodeParams& params() const noexcept { return params_; }
  const Field& field() const noexcept { return field_; }

  virtual Matrix encode(std::span<const Symbol> message) const = 0;

  // mu_f; alpha entries.
  virtual std::vector<Symbol> repair_vector(NodeId failed) const = 0;

  // What helper `helper` sends when `failed` is being repaired. Uses only the
  // helper's own content and the failed id.
  Symbol helper_symbol(NodeId helper, std::span<const Symbol> content, NodeId failed) const;

  // symbols[j] is the helper_symbol of helpers[j]. Returns the failed node's
  // alpha stored symbols.
  virtual std::vector<Symbol> repair(NodeId failed, std::span<const NodeId> helpers,
                                     std::span<const Symbol> symbols) const = 0;

  // rows.row(j) is the content of nodes[j]. Returns the B message symbols.
  virtual std::vector<Symbol> reconstruct(std::span<const NodeId> nodes,
                                          const Matrix& rows) const = 0;

  // Number of helpers a repair must contact (d, or n-1 for MISER).
  virtual std::size_t helpers_required() const noexcept { return params_.d; }

  virtual std::string description() const { return describe(params_); }

 protected:
  explicit Codec(const CodeParams& params) : params_(params), field_(params.q) {}

  void check_node(NodeId id) const;
  void check_message(std::span<const Symbol> message) const;
  void check_helpers(NodeId failed, std::span<const NodeId> helpers,
                     std::span<const Symbol> symbols) const;
  void check_collection(std::span<const NodeId> nodes, const Matrix& rows) const;

 private:
  CodeParams params_;
  Field field_;
};

}  // namespace pmrc
