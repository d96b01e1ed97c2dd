#pragma once

#include <span>
#include <vector>

#include "pmrc/codec.hpp"

namespace pmrc {

// Message matrix of the product-matrix MBR code:
//   M = [ S   T ]
//       [ T^t 0 ]
// S is k x k symmetric, T is k x (d-k).
struct MbrMessage {
  Matrix S;
  Matrix T;
  Matrix M;
};

// S's upper triangle is filled row-major with the first k(k+1)/2 symbols, T
// row-major with the rest. Throws WrongLength unless |u| = kd - k(k-1)/2.
MbrMessage mbr_pack_message(const Field& field, std::size_t k, std::size_t d,
                            std::span<const Symbol> u);
std::vector<Symbol> mbr_unpack_message(const Matrix& M, std::size_t k);

enum class MbrVariant {
  Vandermonde,       // Psi rows [1, x, ..., x^(d-1)] at x = 1..n
  SystematicCauchy,  // Psi = [[I_k, 0], [Cauchy]]; nodes 1..k store [S T]
  Custom,            // caller-supplied Psi
};

/// Product-matrix MBR code for any k <= d <= n-1. Node i stores psi_i^t M;
/// the repair vector of node f is psi_f itself.
class MbrCodec final : public Codec {
 public:
  explicit MbrCodec(const CodeParams& params, MbrVariant variant = MbrVariant::Vandermonde);
  // Caller-supplied encoding matrix (n x d). Verified exhaustively when
  // n <= kExhaustiveVerifyLimit; throws BadFieldOverride if it fails.
  MbrCodec(const CodeParams& params, Matrix psi);

  const Matrix& psi() const noexcept { return psi_; }
  MbrVariant variant() const noexcept { return variant_; }

  Matrix encode(std::span<const Symbol> message) const override;
  Matrix encode_matrix(const Matrix& M) const;
  std::vector<Symbol> repair_vector(NodeId failed) const override;
  std::vector<Symbol> repair(NodeId failed, std::span<const NodeId> helpers,
                             std::span<const Symbol> symbols) const override;
  std::vector<Symbol> reconstruct(std::span<const NodeId> nodes, const Matrix& rows) const override;
  std::string description() const override;

 private:
  void verify() const;

  Matrix psi_;
  MbrVariant variant_;
};

inline constexpr std::size_t kExhaustiveVerifyLimit = 12;

}  // namespace pmrc
