#include "pmrc/msr.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "pmrc/log.hpp"
#include "pmrc/mbr.hpp"
#include "pmrc/shortening.hpp"

namespace pmrc {

MsrMessage msr_pack_message(const Field& field, std::size_t alpha, std::span<const Symbol> u) {
  const std::size_t triangle = alpha * (alpha + 1) / 2;
  if (u.size() != 2 * triangle) {
    throw Error(Errc::WrongLength, "MSR message of " + std::to_string(u.size()) +
                                       " symbols, expected " + std::to_string(2 * triangle));
  }
  auto fill = [&](std::size_t offset) {
    Matrix S(field, alpha, alpha);
    std::size_t next = offset;
    for (std::size_t i = 0; i < alpha; ++i) {
      for (std::size_t j = i; j < alpha; ++j) {
        S(i, j) = field.reduce(u[next++]);
        S(j, i) = S(i, j);
      }
    }
    return S;
  };
  Matrix S1 = fill(0);
  Matrix S2 = fill(triangle);
  Matrix M = vstack(S1, S2);
  return {std::move(S1), std::move(S2), std::move(M)};
}

std::vector<Symbol> msr_unpack_message(const Matrix& M, std::size_t alpha) {
  std::vector<Symbol> u;
  u.reserve(alpha * (alpha + 1));
  for (std::size_t block = 0; block < 2; ++block)
    for (std::size_t i = 0; i < alpha; ++i)
      for (std::size_t j = i; j < alpha; ++j) u.push_back(M(block * alpha + i, j));
  return u;
}

std::vector<Symbol> msr_evaluation_points(const Field& field, std::size_t count, std::size_t alpha) {
  std::vector<Symbol> points;
  std::set<Symbol> seen_lambda;
  for (std::uint64_t x = 1; x < field.modulus() && points.size() < count; ++x) {
    Symbol lambda = field.pow(static_cast<Symbol>(x), alpha);
    if (seen_lambda.insert(lambda).second) points.push_back(static_cast<Symbol>(x));
  }
  if (points.size() < count) {
    throw Error(Errc::FieldTooSmall, "F_" + std::to_string(field.modulus()) + " has only " +
                                         std::to_string(points.size()) + " distinct x^" +
                                         std::to_string(alpha) + " values, need " +
                                         std::to_string(count));
  }
  return points;
}

// ---------------------------------------------------------------------------

MsrCodec::MsrCodec(const CodeParams& params)
    : Codec(params), phi_(field(), 0, 0), psi_(field(), 0, 0) {
  if (params.kind != CodeKind::Msr) throw Error(Errc::InfeasibleParameters, "not MSR parameters");
  if (params.d + 2 != 2 * params.k) {
    throw Error(Errc::InfeasibleParameters,
                describe(params) + ": MsrCodec needs d = 2k-2; use msr_build for larger d");
  }
  points_ = msr_evaluation_points(field(), params.n, params.alpha);
  phi_ = vandermonde(field(), points_, params.alpha);
  lambda_.resize(params.n);
  for (std::size_t i = 0; i < params.n; ++i) lambda_[i] = field().pow(points_[i], params.alpha);
  build_psi();
  verify();
}

MsrCodec::MsrCodec(const CodeParams& params, Matrix phi, std::vector<Symbol> lambda, Unchecked)
    : Codec(params), phi_(std::move(phi)), lambda_(std::move(lambda)), psi_(field(), 0, 0) {
  if (phi_.rows() != params.n || phi_.cols() != params.alpha || lambda_.size() != params.n) {
    throw Error(Errc::DimensionMismatch, "Phi must be n x alpha with n lambdas");
  }
  build_psi();
}

MsrCodec MsrCodec::unchecked(const CodeParams& params, Matrix phi, std::vector<Symbol> lambda) {
  return MsrCodec(params, std::move(phi), std::move(lambda), Unchecked{});
}

void MsrCodec::build_psi() {
  const std::size_t alpha = params().alpha;
  psi_ = Matrix(field(), params().n, 2 * alpha);
  for (std::size_t i = 0; i < params().n; ++i) {
    for (std::size_t j = 0; j < alpha; ++j) {
      psi_(i, j) = phi_(i, j);
      psi_(i, alpha + j) = field().mul(lambda_[i], phi_(i, j));
    }
  }
}

void MsrCodec::verify() const {
  const auto& p = params();
  if (p.n > kExhaustiveVerifyLimit) {
    log_info(describe(p) + ": skipping exhaustive Psi check above n=" +
             std::to_string(kExhaustiveVerifyLimit) + ", relying on the Vandermonde construction");
    return;
  }
  PsiReport report = verify_msr_psi(phi_, lambda_, p.d);
  if (!report.ok) {
    std::string rows;
    for (auto r : report.witness) rows += (rows.empty() ? "" : ",") + std::to_string(r);
    throw Error(Errc::BadFieldOverride, describe(p) + ": " + report.failure + " {" + rows + "}");
  }
}

Matrix MsrCodec::encode(std::span<const Symbol> message) const {
  check_message(message);
  return encode_matrix(msr_pack_message(field(), params().alpha, message).M);
}

std::vector<Symbol> MsrCodec::repair_vector(NodeId failed) const {
  check_node(failed);
  auto row = phi_.row(failed - 1);
  return {row.begin(), row.end()};
}

MsrCodec::RepairTrace MsrCodec::repair_trace(NodeId failed, std::span<const NodeId> helpers,
                                             std::span<const Symbol> symbols) const {
  check_helpers(failed, helpers, symbols);
  const std::size_t alpha = params().alpha;
  std::vector<std::size_t> rows(helpers.size());
  for (std::size_t j = 0; j < helpers.size(); ++j) rows[j] = helpers[j] - 1;
  Matrix inv = [&] {
    try {
      return invert(select_rows(psi_, rows));
    } catch (const Error& e) {
      throw Error(Errc::Corruption, std::string("repair matrix singular: ") + e.what());
    }
  }();
  std::vector<Symbol> m_phi = mat_vec(inv, symbols);
  RepairTrace trace;
  trace.s1_phi.assign(m_phi.begin(), m_phi.begin() + static_cast<std::ptrdiff_t>(alpha));
  trace.s2_phi.assign(m_phi.begin() + static_cast<std::ptrdiff_t>(alpha), m_phi.end());
  // S1, S2 symmetric: (S phi_f)^t = phi_f^t S.
  const Symbol lambda_f = lambda_[failed - 1];
  trace.row.resize(alpha);
  for (std::size_t j = 0; j < alpha; ++j) {
    trace.row[j] = field().mul_add(trace.s1_phi[j], lambda_f, trace.s2_phi[j]);
  }
  return trace;
}

std::vector<Symbol> MsrCodec::repair(NodeId failed, std::span<const NodeId> helpers,
                                     std::span<const Symbol> symbols) const {
  return repair_trace(failed, helpers, symbols).row;
}

Matrix MsrCodec::solve_message_matrix(std::span<const NodeId> nodes, const Matrix& rows) const {
  check_collection(nodes, rows);
  const Field& f = field();
  const std::size_t k = params().k;
  const std::size_t alpha = params().alpha;
  std::vector<std::size_t> ids(k);
  for (std::size_t j = 0; j < k; ++j) ids[j] = nodes[j] - 1;
  Matrix phi_dc = select_rows(phi_, ids);

  // rows Phi_DC^t = P + Lambda_DC Q with P, Q symmetric. Only the
  // off-diagonal entries are solvable, and only those are used.
  Matrix Z = matmul(rows, transpose(phi_dc));
  Matrix P(f, k, k), Q(f, k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const Symbol li = lambda_[ids[i]];
      const Symbol lj = lambda_[ids[j]];
      if (li == lj) {
        throw Error(Errc::Corruption, "nodes " + std::to_string(nodes[i]) + " and " +
                                          std::to_string(nodes[j]) + " share lambda " +
                                          std::to_string(li));
      }
      // Z_ij = P_ij + l_i Q_ij, Z_ji = P_ij + l_j Q_ij
      const Symbol q = f.div(f.sub(Z(i, j), Z(j, i)), f.sub(li, lj));
      const Symbol p = f.sub(Z(i, j), f.mul(li, q));
      P(i, j) = P(j, i) = p;
      Q(i, j) = Q(j, i) = q;
    }
  }

  // Row i of P without its diagonal is phi_i^t S1 [phi_j]_{j != i}; invert
  // that alpha x alpha block to get phi_i^t S1. The first alpha rows suffice.
  Matrix X1(f, alpha, alpha), X2(f, alpha, alpha);
  for (std::size_t i = 0; i < alpha; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) others.push_back(j);
    Matrix block_inv = [&] {
      try {
        return invert(transpose(select_rows(phi_dc, others)));
      } catch (const Error& e) {
        throw Error(Errc::Corruption, std::string("Phi_DC block singular: ") + e.what());
      }
    }();
    std::vector<Symbol> p_row(alpha), q_row(alpha);
    for (std::size_t t = 0; t < alpha; ++t) {
      p_row[t] = P(i, others[t]);
      q_row[t] = Q(i, others[t]);
    }
    auto s1_row = vec_mat(p_row, block_inv);
    auto s2_row = vec_mat(q_row, block_inv);
    std::copy(s1_row.begin(), s1_row.end(), X1.row(i).begin());
    std::copy(s2_row.begin(), s2_row.end(), X2.row(i).begin());
  }
  std::vector<std::size_t> first(alpha);
  std::iota(first.begin(), first.end(), std::size_t{0});
  Matrix lead_inv = [&] {
    try {
      return invert(select_rows(phi_dc, first));
    } catch (const Error& e) {
      throw Error(Errc::Corruption, std::string("leading Phi_DC block singular: ") + e.what());
    }
  }();
  return vstack(matmul(lead_inv, X1), matmul(lead_inv, X2));
}

std::vector<Symbol> MsrCodec::reconstruct(std::span<const NodeId> nodes, const Matrix& rows) const {
  return msr_unpack_message(solve_message_matrix(nodes, rows), params().alpha);
}

IaWitness MsrCodec::ia_witness(NodeId failed, NodeId helper, std::span<const NodeId> basis) const {
  check_node(failed);
  check_node(helper);
  const Field& f = field();
  const std::size_t alpha = params().alpha;
  for (std::size_t i = 0; i < lambda_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (lambda_[i] == lambda_[j]) {
        throw Error(Errc::Corruption, "lambda of nodes " + std::to_string(j + 1) + " and " +
                                          std::to_string(i + 1) + " coincide");
      }
  if (helper == failed) throw Error(Errc::SelfHelp, "helper equals failed node");
  if (basis.size() != alpha) {
    throw Error(Errc::DependentBasis, "basis needs exactly alpha=" + std::to_string(alpha) +
                                          " nodes, got " + std::to_string(basis.size()));
  }
  std::vector<std::size_t> rows;
  for (NodeId b : basis) {
    check_node(b);
    if (b == failed || b == helper) {
      throw Error(Errc::DependentBasis, "basis contains node " + std::to_string(b));
    }
    rows.push_back(b - 1);
  }
  Matrix basis_phi = select_rows(phi_, rows);  // alpha x alpha, row i = phi_{b_i}^t
  if (rank(basis_phi) != alpha) throw Error(Errc::DependentBasis, "basis phis are dependent");

  // phi_l = sum_i at_i phi_{b_i}  <=>  basis_phi^t at = phi_l
  auto phi_l = phi_.row(helper - 1);
  std::vector<Symbol> a_tilde = solve(transpose(basis_phi), phi_l);

  const Symbol lambda_f = lambda_[failed - 1];
  const Symbol gap_l = f.sub(lambda_[helper - 1], lambda_f);
  IaWitness w;
  w.failed = failed;
  w.helper = helper;
  w.basis.assign(basis.begin(), basis.end());
  w.a.resize(alpha);
  w.b.assign(phi_l.begin(), phi_l.end());
  for (std::size_t i = 0; i < alpha; ++i) {
    const Symbol coeff = f.div(f.mul(a_tilde[i], gap_l), f.sub(lambda_[rows[i]], lambda_f));
    w.a[i] = coeff;
    // b -= (l_l - l_f) at_i (l_i - l_f)^-1 phi_i  ==  b -= coeff * phi_i
    auto phi_i = phi_.row(rows[i]);
    for (std::size_t t = 0; t < alpha; ++t) w.b[t] = f.sub(w.b[t], f.mul(coeff, phi_i[t]));
  }

  std::mt19937_64 rng(0x5eed0000u + failed * 131u + helper);
  std::vector<Symbol> u(params().B);
  for (int trial = 0; trial < 4; ++trial) {
    for (auto& s : u) s = static_cast<Symbol>(rng() % f.modulus());
    if (!ia_identity_holds(w, msr_pack_message(f, alpha, u).M)) {
      throw Error(Errc::Corruption, "alignment identity failed on a sample message");
    }
  }
  return w;
}

bool MsrCodec::ia_identity_holds(const IaWitness& w, const Matrix& M) const {
  const Field& f = field();
  auto phi_f = phi_.row(w.failed - 1);
  auto helper_symbol_of = [&](NodeId node) {
    return dot(f, vec_mat(psi_.row(node - 1), M), phi_f);
  };
  const Symbol lhs = helper_symbol_of(w.helper);
  Symbol rhs = dot(f, vec_mat(psi_.row(w.failed - 1), M), w.b);
  for (std::size_t i = 0; i < w.basis.size(); ++i) {
    rhs = f.mul_add(rhs, w.a[i], helper_symbol_of(w.basis[i]));
  }
  return lhs == rhs;
}

IaSweep msr_ia_sweep(const MsrCodec& codec, std::size_t messages, std::uint64_t seed) {
  const auto& p = codec.params();
  const Field& f = codec.field();
  std::mt19937_64 rng(seed);
  std::vector<Symbol> u(p.B);
  IaSweep out;
  for (NodeId failed = 1; failed <= p.n; ++failed) {
    for (NodeId helper = 1; helper <= p.n; ++helper) {
      if (helper == failed) continue;
      std::vector<NodeId> basis;
      for (NodeId id = 1; id <= p.n && basis.size() < p.alpha; ++id) {
        if (id != failed && id != helper) basis.push_back(id);
      }
      const IaWitness w = codec.ia_witness(failed, helper, basis);
      ++out.pairs;
      for (std::size_t m = 0; m < messages; ++m) {
        for (auto& s : u) s = static_cast<Symbol>(rng() % f.modulus());
        ++out.checks;
        if (!codec.ia_identity_holds(w, msr_pack_message(f, p.alpha, u).M)) ++out.failures;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

SystematicRemap::SystematicRemap(std::shared_ptr<const Codec> base, std::vector<NodeId> systematic_ids)
    : Codec(base->params()), base_(std::move(base)), ids_(std::move(systematic_ids)) {
  if (ids_.size() != params().k) {
    throw Error(Errc::BadNodeCount, std::to_string(ids_.size()) + " systematic ids, expected k=" +
                                        std::to_string(params().k));
  }
  std::set<NodeId> seen;
  for (NodeId id : ids_) {
    check_node(id);
    if (!seen.insert(id).second) throw Error(Errc::BadNodeCount, "systematic id repeated");
  }
  if (params().B != params().k * params().alpha) {
    throw Error(Errc::InfeasibleParameters, "reconstruction remap needs B = k alpha");
  }
}

Matrix SystematicRemap::encode(std::span<const Symbol> message) const {
  check_message(message);
  Matrix U(field(), params().k, params().alpha, {message.begin(), message.end()});
  return base_->encode(base_->reconstruct(ids_, U));
}

std::vector<Symbol> SystematicRemap::reconstruct(std::span<const NodeId> nodes,
                                                 const Matrix& rows) const {
  check_collection(nodes, rows);
  Matrix C = base_->encode(base_->reconstruct(nodes, rows));
  std::vector<Symbol> u;
  u.reserve(params().B);
  for (NodeId id : ids_) {
    auto r = C.row(id - 1);
    u.insert(u.end(), r.begin(), r.end());
  }
  return u;
}

std::string SystematicRemap::description() const {
  std::string ids;
  for (NodeId id : ids_) ids += (ids.empty() ? "" : ",") + std::to_string(id);
  return base_->description() + " systematic on {" + ids + "}";
}

// ---------------------------------------------------------------------------

std::shared_ptr<const Codec> msr_build(const CodeParams& params) {
  if (params.kind != CodeKind::Msr) throw Error(Errc::InfeasibleParameters, "not MSR parameters");
  const std::size_t depth = shortening_depth(params);
  if (depth == 0) return std::make_shared<MsrCodec>(params);

  CodeParams parent = params;
  parent.n += depth;
  parent.k += depth;
  parent.d += depth;
  parent.B += depth * params.alpha;
  auto core = std::make_shared<MsrCodec>(parent);
  std::vector<NodeId> first(parent.k);
  std::iota(first.begin(), first.end(), NodeId{1});
  auto systematic = std::make_shared<SystematicRemap>(std::move(core), std::move(first));
  return std::make_shared<ShortenedCodec>(params, std::move(systematic), depth);
}

std::shared_ptr<const Codec> msr_systematic_remap(std::shared_ptr<const Codec> base,
                                                  std::vector<NodeId> systematic_ids) {
  if (base->params().kind != CodeKind::Msr) {
    throw Error(Errc::InfeasibleParameters, "systematic remap expects an MSR codec");
  }
  return std::make_shared<SystematicRemap>(std::move(base), std::move(systematic_ids));
}

}  // namespace pmrc
