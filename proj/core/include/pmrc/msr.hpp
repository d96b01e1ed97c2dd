#pragma once

#include <memory>
#include <span>
#include <vector>

#include "pmrc/codec.hpp"

namespace pmrc {

// M = [S1; S2], both alpha x alpha symmetric.
struct MsrMessage {
  Matrix S1;
  Matrix S2;
  Matrix M;
};

// First alpha(alpha+1)/2 symbols fill S1's upper triangle row-major, the rest
// fill S2's. Throws WrongLength unless |u| = alpha(alpha+1).
MsrMessage msr_pack_message(const Field& field, std::size_t alpha, std::span<const Symbol> u);
std::vector<Symbol> msr_unpack_message(const Matrix& M, std::size_t alpha);

// Scans x = 1, 2, ..., q-1 keeping x whenever x^alpha has not been seen, until
// `count` points are found. Throws FieldTooSmall if the field runs out.
std::vector<Symbol> msr_evaluation_points(const Field& field, std::size_t count, std::size_t alpha);

// Scalars a_i and vector b such that, for every message matrix M,
//   psi_l^t M phi_f = psi_f^t M b + sum_i a_i psi_{basis_i}^t M phi_f.
struct IaWitness {
  NodeId failed = 0;
  NodeId helper = 0;
  std::vector<NodeId> basis;
  std::vector<Symbol> a;
  std::vector<Symbol> b;
};

/// Product-matrix MSR code at d = 2k-2 (alpha = k-1, B = alpha(alpha+1)).
///
/// Psi = [Phi, Lambda Phi] where row i of Psi is the Vandermonde row
/// [1, x_i, ..., x_i^(d-1)], so Phi holds the first alpha powers and
/// lambda_i = x_i^alpha. The repair vector of node f is phi_f.
class MsrCodec final : public Codec {
 public:
  explicit MsrCodec(const CodeParams& params);

  // Skips every construction check. Only for exercising the failure paths
  // of reconstruction and the alignment witness.
  static MsrCodec unchecked(const CodeParams& params, Matrix phi, std::vector<Symbol> lambda);

  const Matrix& phi() const noexcept { return phi_; }
  const Matrix& psi() const noexcept { return psi_; }
  const std::vector<Symbol>& lambda() const noexcept { return lambda_; }
  const std::vector<Symbol>& points() const noexcept { return points_; }

  Matrix encode(std::span<const Symbol> message) const override;
  Matrix encode_matrix(const Matrix& M) const { return matmul(psi_, M); }
  std::vector<Symbol> repair_vector(NodeId failed) const override;
  std::vector<Symbol> repair(NodeId failed, std::span<const NodeId> helpers,
                             std::span<const Symbol> symbols) const override;
  std::vector<Symbol> reconstruct(std::span<const NodeId> nodes, const Matrix& rows) const override;

  struct RepairTrace {
    std::vector<Symbol> s1_phi;  // S1 phi_f
    std::vector<Symbol> s2_phi;  // S2 phi_f
    std::vector<Symbol> row;     // phi_f^t S1 + lambda_f phi_f^t S2
  };
  RepairTrace repair_trace(NodeId failed, std::span<const NodeId> helpers,
                           std::span<const Symbol> symbols) const;

  // Recovers the message matrix [S1; S2] from any k rows. Throws Corruption
  // if two of the collected nodes share a lambda.
  Matrix solve_message_matrix(std::span<const NodeId> nodes, const Matrix& rows) const;

  // Throws DependentBasis if the basis phis are dependent, contain f or l,
  // or have the wrong size; Corruption if the lambdas are not distinct.
  IaWitness ia_witness(NodeId failed, NodeId helper, std::span<const NodeId> basis) const;
  bool ia_identity_holds(const IaWitness& witness, const Matrix& M) const;

 private:
  struct Unchecked {};
  MsrCodec(const CodeParams& params, Matrix phi, std::vector<Symbol> lambda, Unchecked);
  void build_psi();
  void verify() const;

  std::vector<Symbol> points_;
  Matrix phi_;
  std::vector<Symbol> lambda_;
  Matrix psi_;
};

// Runs ia_witness for every ordered pair (f, l), l != f, with the basis set
// to the lowest alpha ids outside {f, l}, and checks the identity on
// `messages` random message matrices per pair.
struct IaSweep {
  std::size_t pairs = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
};
IaSweep msr_ia_sweep(const MsrCodec& codec, std::size_t messages, std::uint64_t seed);

/// Systematic form by message remapping: the chosen k nodes store the
/// message verbatim (node ids[j] holds symbols j*alpha .. (j+1)*alpha-1).
/// Encoding first solves for the base message that makes the chosen nodes
/// hold u, which is exactly a reconstruction from those nodes. Repair is
/// untouched.
class SystematicRemap final : public Codec {
 public:
  SystematicRemap(std::shared_ptr<const Codec> base, std::vector<NodeId> systematic_ids);

  const Codec& base() const noexcept { return *base_; }
  const std::vector<NodeId>& systematic_ids() const noexcept { return ids_; }

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
};

// Any MSR parameters with d >= 2k-2. For d > 2k-2 the result is a
// ShortenedCodec over a systematic [n+i, k+i, 2(k+i)-2] parent,
// i = d - 2k + 2; for d = 2k-2 it is a plain MsrCodec.
std::shared_ptr<const Codec> msr_build(const CodeParams& params);

// Requires base.params().kind == Msr. ids must be k distinct nodes.
std::shared_ptr<const Codec> msr_systematic_remap(std::shared_ptr<const Codec> base,
                                                  std::vector<NodeId> systematic_ids);

}  // namespace pmrc
