#include "pmrc/mbr.hpp"

#include <numeric>

#include "pmrc/log.hpp"

namespace pmrc {

MbrMessage mbr_pack_message(const Field& field, std::size_t k, std::size_t d,
                            std::span<const Symbol> u) {
  const std::size_t triangle = k * (k + 1) / 2;
  const std::size_t expected = triangle + k * (d - k);
  if (u.size() != expected) {
    throw Error(Errc::WrongLength, "MBR message of " + std::to_string(u.size()) +
                                       " symbols, expected " + std::to_string(expected));
  }
  Matrix S(field, k, k);
  std::size_t next = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      S(i, j) = field.reduce(u[next++]);
      S(j, i) = S(i, j);
    }
  }
  Matrix T(field, k, d - k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d - k; ++j) T(i, j) = field.reduce(u[next++]);

  Matrix M(field, d, d);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) M(i, j) = S(i, j);
    for (std::size_t j = 0; j < d - k; ++j) {
      M(i, k + j) = T(i, j);
      M(k + j, i) = T(i, j);
    }
  }
  return {std::move(S), std::move(T), std::move(M)};
}

std::vector<Symbol> mbr_unpack_message(const Matrix& M, std::size_t k) {
  const std::size_t d = M.rows();
  std::vector<Symbol> u;
  u.reserve(k * (k + 1) / 2 + k * (d - k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) u.push_back(M(i, j));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = k; j < d; ++j) u.push_back(M(i, j));
  return u;
}

namespace {

Matrix default_psi(const CodeParams& p, MbrVariant variant) {
  Field field(p.q);
  if (variant == MbrVariant::Custom) {
    throw Error(Errc::ConfigError, "a custom MBR variant needs an explicit Psi");
  }
  if (variant == MbrVariant::Vandermonde) {
    if (p.q <= p.n) {
      throw Error(Errc::FieldTooSmall, "need " + std::to_string(p.n) +
                                           " distinct nonzero points in F_" + std::to_string(p.q));
    }
    std::vector<Symbol> points(p.n);
    std::iota(points.begin(), points.end(), Symbol{1});
    return vandermonde(field, points, p.d);
  }
  // Cauchy block for the n-k parity rows: xs = 1..n-k, ys = n-k+1..n-k+d.
  const std::size_t parity = p.n - p.k;
  if (p.q - 1 < parity + p.d) {
    throw Error(Errc::FieldTooSmall, "systematic MBR needs " + std::to_string(parity + p.d) +
                                         " distinct nonzero points in F_" + std::to_string(p.q));
  }
  std::vector<Symbol> xs(parity), ys(p.d);
  std::iota(xs.begin(), xs.end(), Symbol{1});
  std::iota(ys.begin(), ys.end(), static_cast<Symbol>(parity + 1));
  Matrix top(field, p.k, p.d);
  for (std::size_t i = 0; i < p.k; ++i) top(i, i) = 1;
  return vstack(top, cauchy(field, xs, ys));
}

}  // namespace

MbrCodec::MbrCodec(const CodeParams& params, MbrVariant variant)
    : Codec(params), psi_(default_psi(params, variant)), variant_(variant) {
  if (params.kind != CodeKind::Mbr) throw Error(Errc::InfeasibleParameters, "not MBR parameters");
  verify();
}

MbrCodec::MbrCodec(const CodeParams& params, Matrix psi)
    : Codec(params), psi_(std::move(psi)), variant_(MbrVariant::Custom) {
  if (params.kind != CodeKind::Mbr) throw Error(Errc::InfeasibleParameters, "not MBR parameters");
  if (psi_.rows() != params.n || psi_.cols() != params.d) {
    throw Error(Errc::DimensionMismatch, "Psi must be n x d");
  }
  verify();
}

void MbrCodec::verify() const {
  const auto& p = params();
  if (p.n > kExhaustiveVerifyLimit) {
    log_info(describe(p) + ": skipping exhaustive Psi check above n=" +
             std::to_string(kExhaustiveVerifyLimit) + ", relying on the structured construction");
    return;
  }
  PsiReport report = verify_mbr_psi(psi_, p.k);
  if (!report.ok) {
    std::string rows;
    for (auto r : report.witness) rows += (rows.empty() ? "" : ",") + std::to_string(r);
    throw Error(Errc::BadFieldOverride, describe(p) + ": " + report.failure + " {" + rows + "}");
  }
}

Matrix MbrCodec::encode_matrix(const Matrix& M) const { return matmul(psi_, M); }

Matrix MbrCodec::encode(std::span<const Symbol> message) const {
  check_message(message);
  return encode_matrix(mbr_pack_message(field(), params().k, params().d, message).M);
}

std::vector<Symbol> MbrCodec::repair_vector(NodeId failed) const {
  check_node(failed);
  auto row = psi_.row(failed - 1);
  return {row.begin(), row.end()};
}

std::vector<Symbol> MbrCodec::repair(NodeId failed, std::span<const NodeId> helpers,
                                     std::span<const Symbol> symbols) const {
  check_helpers(failed, helpers, symbols);
  std::vector<std::size_t> rows(helpers.size());
  for (std::size_t j = 0; j < helpers.size(); ++j) rows[j] = helpers[j] - 1;
  Matrix psi_repair = select_rows(psi_, rows);
  Matrix inv = [&] {
    try {
      return invert(psi_repair);
    } catch (const Error& e) {
      throw Error(Errc::Corruption, std::string("repair matrix singular: ") + e.what());
    }
  }();
  // inv * symbols = M psi_f, whose transpose is psi_f^t M by symmetry of M.
  return mat_vec(inv, symbols);
}

std::vector<Symbol> MbrCodec::reconstruct(std::span<const NodeId> nodes, const Matrix& rows) const {
  check_collection(nodes, rows);
  const std::size_t k = params().k;
  const std::size_t d = params().d;
  std::vector<std::size_t> ids(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) ids[j] = nodes[j] - 1;
  Matrix psi_dc = select_rows(psi_, ids);
  Matrix phi_dc = col_range(psi_dc, 0, k);
  Matrix delta_dc = col_range(psi_dc, k, d - k);
  Matrix phi_inv = [&] {
    try {
      return invert(phi_dc);
    } catch (const Error& e) {
      throw Error(Errc::Corruption, std::string("Phi_DC singular: ") + e.what());
    }
  }();
  // rows = [Phi_DC S + Delta_DC T^t | Phi_DC T]
  Matrix T = matmul(phi_inv, col_range(rows, k, d - k));
  Matrix S = matmul(phi_inv, sub(col_range(rows, 0, k), matmul(delta_dc, transpose(T))));
  Matrix M(field(), d, d);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) M(i, j) = S(i, j);
    for (std::size_t j = 0; j < d - k; ++j) M(i, k + j) = T(i, j);
  }
  return mbr_unpack_message(M, k);
}

std::string MbrCodec::description() const {
  switch (variant_) {
    case MbrVariant::Vandermonde: return describe(params()) + " vandermonde";
    case MbrVariant::SystematicCauchy: return describe(params()) + " systematic-cauchy";
    case MbrVariant::Custom: break;
  }
  return describe(params()) + " custom";
}

}  // namespace pmrc
