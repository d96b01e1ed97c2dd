#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pmrc/codec.hpp"

namespace pmrc {

/// MISER code for n = d+1, d = 2k-1 (alpha = k, B = k^2), in product-matrix
/// form: M = [S; S^t] with S the k x k message, and
///   Psi = [ I    0      ]
///         [ Phi  rho Phi ]
/// so nodes 1..k store the rows of S and node k+j stores
/// phi_j^t (S + rho S^t). Phi is the Cauchy matrix on xs = 1..k,
/// ys = k+1..2k; rho != 0 and rho^2 != 1. Every repair uses all n-1
/// survivors; the repair vector is the first k entries of psi_f.
class MiserCodec final : public Codec {
 public:
  // rho defaults to the smallest field element with rho != 0, rho^2 != 1.
  explicit MiserCodec(const CodeParams& params, std::optional<Symbol> rho = std::nullopt);

  const Matrix& phi() const noexcept { return phi_; }
  Symbol rho() const noexcept { return rho_; }
  const Matrix& psi() const noexcept { return psi_; }

  Matrix encode(std::span<const Symbol> message) const override;
  std::vector<Symbol> repair_vector(NodeId failed) const override;
  std::vector<Symbol> repair(NodeId failed, std::span<const NodeId> helpers,
                             std::span<const Symbol> symbols) const override;
  std::vector<Symbol> reconstruct(std::span<const NodeId> nodes, const Matrix& rows) const override;
  std::size_t helpers_required() const noexcept override { return params().n - 1; }
  std::string description() const override;

  struct SystematicRepairTrace {
    std::vector<Symbol> combined;  // (S + rho S^t) e_i, from the parity helpers
    std::vector<Symbol> row;       // e_i^t S
  };
  // Node failed <= k; throws WrongBranch otherwise.
  SystematicRepairTrace repair_systematic(NodeId failed, std::span<const NodeId> helpers,
                                          std::span<const Symbol> symbols) const;
  // Node failed > k; throws WrongBranch otherwise.
  std::vector<Symbol> repair_parity(NodeId failed, std::span<const NodeId> helpers,
                                    std::span<const Symbol> symbols) const;

 private:
  // Helper symbols keyed by node id (index 0 unused); checks the helper set.
  std::vector<Symbol> gather(NodeId failed, std::span<const NodeId> helpers,
                             std::span<const Symbol> symbols) const;
  void verify() const;

  Matrix phi_;
  Symbol rho_;
  Matrix psi_;
};

// n = d+1 and d >= 2k-1. For d > 2k-1 this is a ShortenedCodec over a
// [n+i, k+i, 2(k+i)-1] MISER parent, i = d - 2k + 1.
std::shared_ptr<const Codec> miser_build(const CodeParams& params,
                                         std::optional<Symbol> rho = std::nullopt);

}  // namespace pmrc
