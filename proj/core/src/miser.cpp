#include "pmrc/miser.hpp"

#include <numeric>

#include "pmrc/log.hpp"
#include "pmrc/mbr.hpp"
#include "pmrc/shortening.hpp"

namespace pmrc {

namespace {

bool rho_ok(const Field& f, Symbol rho) { return rho != 0 && f.mul(rho, rho) != 1; }

Symbol pick_rho(const Field& f, std::optional<Symbol> requested) {
  if (requested) {
    if (!f.contains(*requested) || !rho_ok(f, *requested)) {
      throw Error(Errc::ConfigError, "rho=" + std::to_string(*requested) +
                                         " must satisfy rho != 0 and rho^2 != 1");
    }
    return *requested;
  }
  for (std::uint64_t r = 1; r < f.modulus(); ++r) {
    if (rho_ok(f, static_cast<Symbol>(r))) return static_cast<Symbol>(r);
  }
  throw Error(Errc::FieldTooSmall, "no rho with rho^2 != 1 in F_" + std::to_string(f.modulus()));
}

Matrix miser_phi(const Field& f, std::size_t k) {
  if (f.modulus() - 1 < 2 * k) {
    throw Error(Errc::FieldTooSmall, "MISER Cauchy matrix needs " + std::to_string(2 * k) +
                                         " distinct nonzero points in F_" +
                                         std::to_string(f.modulus()));
  }
  std::vector<Symbol> xs(k), ys(k);
  std::iota(xs.begin(), xs.end(), Symbol{1});
  std::iota(ys.begin(), ys.end(), static_cast<Symbol>(k + 1));
  return cauchy(f, xs, ys);
}

Matrix invert_or_corrupt(const Matrix& m, const char* what) {
  try {
    return invert(m);
  } catch (const Error& e) {
    throw Error(Errc::Corruption, std::string(what) + ": " + e.what());
  }
}

}  // namespace

MiserCodec::MiserCodec(const CodeParams& params, std::optional<Symbol> rho)
    : Codec(params), phi_(field(), 0, 0), rho_(0), psi_(field(), 0, 0) {
  if (params.kind != CodeKind::Miser) {
    throw Error(Errc::InfeasibleParameters, "not MISER parameters");
  }
  if (params.n != params.d + 1 || params.d + 1 != 2 * params.k) {
    throw Error(Errc::InfeasibleParameters,
                describe(params) + ": MiserCodec needs n = d+1 = 2k; use miser_build for larger d");
  }
  const std::size_t k = params.k;
  phi_ = miser_phi(field(), k);
  rho_ = pick_rho(field(), rho);
  psi_ = Matrix(field(), params.n, 2 * k);
  for (std::size_t i = 0; i < k; ++i) psi_(i, i) = 1;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t t = 0; t < k; ++t) {
      psi_(k + j, t) = phi_(j, t);
      psi_(k + j, k + t) = field().mul(rho_, phi_(j, t));
    }
  }
  verify();
}

void MiserCodec::verify() const {
  const auto& p = params();
  if (p.n > kExhaustiveVerifyLimit) {
    log_info(describe(p) + ": skipping exhaustive minor check above n=" +
             std::to_string(kExhaustiveVerifyLimit) + ", relying on the Cauchy construction");
    return;
  }
  const PsiReport report = verify_square_minors(phi_);
  if (!report.ok) throw Error(Errc::BadFieldOverride, describe(p) + ": Phi has a " + report.failure);
}

Matrix MiserCodec::encode(std::span<const Symbol> message) const {
  check_message(message);
  const std::size_t k = params().k;
  Matrix S(field(), k, k, {message.begin(), message.end()});
  Matrix W = add(S, scale(transpose(S), rho_));
  return vstack(S, matmul(phi_, W));
}

std::vector<Symbol> MiserCodec::repair_vector(NodeId failed) const {
  check_node(failed);
  auto row = psi_.row(failed - 1);
  return {row.begin(), row.begin() + static_cast<std::ptrdiff_t>(params().k)};
}

std::vector<Symbol> MiserCodec::gather(NodeId failed, std::span<const NodeId> helpers,
                                       std::span<const Symbol> symbols) const {
  check_helpers(failed, helpers, symbols);
  std::vector<Symbol> by_node(params().n + 1, 0);
  for (std::size_t j = 0; j < helpers.size(); ++j) by_node[helpers[j]] = symbols[j];
  return by_node;
}

std::vector<Symbol> MiserCodec::repair(NodeId failed, std::span<const NodeId> helpers,
                                       std::span<const Symbol> symbols) const {
  check_node(failed);
  if (failed <= params().k) return repair_systematic(failed, helpers, symbols).row;
  return repair_parity(failed, helpers, symbols);
}

MiserCodec::SystematicRepairTrace MiserCodec::repair_systematic(
    NodeId failed, std::span<const NodeId> helpers, std::span<const Symbol> symbols) const {
  check_node(failed);
  const std::size_t k = params().k;
  if (failed > k) {
    throw Error(Errc::WrongBranch, "node " + std::to_string(failed) + " is a parity node");
  }
  const auto sym = gather(failed, helpers, symbols);
  const Field& f = field();
  const std::size_t i = failed - 1;

  // Unknowns z = [S e_i ; S^t e_i].
  std::vector<Symbol> parity(k);
  for (std::size_t j = 0; j < k; ++j) parity[j] = sym[k + j + 1];
  SystematicRepairTrace trace;
  trace.combined = mat_vec(invert_or_corrupt(phi_, "Phi singular"), parity);

  Matrix A(f, 2 * k, 2 * k);
  std::vector<Symbol> rhs;
  std::size_t r = 0;
  for (std::size_t l = 0; l < k; ++l) {
    if (l == i) continue;
    A(r++, l) = 1;
    rhs.push_back(sym[l + 1]);
  }
  for (std::size_t j = 0; j < k; ++j, ++r) {
    for (std::size_t t = 0; t < k; ++t) {
      A(r, t) = phi_(j, t);
      A(r, k + t) = f.mul(rho_, phi_(j, t));
    }
    rhs.push_back(parity[j]);
  }
  // (S + rho S^t) e_i has i-th entry (1 + rho) S_ii = rho (S e_i)_i + (S^t e_i)_i.
  A(r, i) = rho_;
  A(r, k + i) = 1;
  rhs.push_back(trace.combined[i]);

  auto z = mat_vec(invert_or_corrupt(A, "systematic repair matrix singular"), rhs);
  trace.row.assign(z.begin() + static_cast<std::ptrdiff_t>(k), z.end());
  return trace;
}

std::vector<Symbol> MiserCodec::repair_parity(NodeId failed, std::span<const NodeId> helpers,
                                              std::span<const Symbol> symbols) const {
  check_node(failed);
  const std::size_t k = params().k;
  if (failed <= k) {
    throw Error(Errc::WrongBranch, "node " + std::to_string(failed) + " is a systematic node");
  }
  const auto sym = gather(failed, helpers, symbols);
  const Field& f = field();
  const std::size_t p = failed - k - 1;
  auto phi_f = phi_.row(p);

  // Unknowns z = [S phi_f ; S^t phi_f]; the systematic helpers give S phi_f.
  std::vector<Symbol> s_phi(k);
  for (std::size_t l = 0; l < k; ++l) s_phi[l] = sym[l + 1];

  Matrix A(f, 2 * k, 2 * k);
  std::vector<Symbol> rhs;
  std::size_t r = 0;
  for (std::size_t l = 0; l < k; ++l) {
    A(r++, l) = 1;
    rhs.push_back(s_phi[l]);
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (j == p) continue;
    for (std::size_t t = 0; t < k; ++t) {
      A(r, t) = phi_(j, t);
      A(r, k + t) = f.mul(rho_, phi_(j, t));
    }
    rhs.push_back(sym[k + j + 1]);
    ++r;
  }
  // (S phi_f)^t phi_f = phi_f^t S^t phi_f
  for (std::size_t t = 0; t < k; ++t) A(r, k + t) = phi_f[t];
  rhs.push_back(dot(f, s_phi, phi_f));

  auto z = mat_vec(invert_or_corrupt(A, "parity repair matrix singular"), rhs);
  // phi_f^t S + rho phi_f^t S^t = (S^t phi_f)^t + rho (S phi_f)^t
  std::vector<Symbol> row(k);
  for (std::size_t t = 0; t < k; ++t) row[t] = f.mul_add(z[k + t], rho_, z[t]);
  return row;
}

std::vector<Symbol> MiserCodec::reconstruct(std::span<const NodeId> nodes, const Matrix& rows) const {
  check_collection(nodes, rows);
  const Field& f = field();
  const std::size_t k = params().k;

  Matrix S(f, k, k);
  std::vector<bool> in_p(k, false);
  std::vector<std::size_t> P, Q, T;
  std::vector<std::size_t> q_rows;  // row of `rows` for each Q entry
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const std::size_t id = nodes[j] - 1;
    if (id < k) {
      in_p[id] = true;
      P.push_back(id);
      std::copy(rows.row(j).begin(), rows.row(j).end(), S.row(id).begin());
    } else {
      Q.push_back(id - k);
      q_rows.push_back(j);
    }
  }
  for (std::size_t t = 0; t < k; ++t)
    if (!in_p[t]) T.push_back(t);
  if (Q.empty()) {
    return {S.data().begin(), S.data().end()};
  }

  Matrix R = select_rows(rows, q_rows);  // Phi_(Q,all) (S + rho S^t)
  Matrix phi_q = select_rows(phi_, Q);
  Matrix phi_qt_inv = invert_or_corrupt(submatrix(phi_, Q, T), "Phi_(Q,T) singular");
  Matrix phi_qp = submatrix(phi_, Q, P);

  // Columns P: remove rho S^t part (rows P of S are known), then the S_(P,P)
  // part, leaving Phi_(Q,T) S_(T,P).
  if (!P.empty()) {
    Matrix known_rows = select_rows(S, P);                              // S_(P,all)
    Matrix lhs = sub(select_cols(R, P), scale(matmul(phi_q, transpose(known_rows)), rho_));
    Matrix s_tp = matmul(phi_qt_inv, sub(lhs, matmul(phi_qp, submatrix(S, P, P))));
    for (std::size_t a = 0; a < T.size(); ++a)
      for (std::size_t b = 0; b < P.size(); ++b) S(T[a], P[b]) = s_tp(a, b);
  }

  // Columns T: W = S + rho S^t; W_(P,T) is known now.
  Matrix w_pt(f, P.size(), T.size());
  for (std::size_t a = 0; a < P.size(); ++a)
    for (std::size_t b = 0; b < T.size(); ++b)
      w_pt(a, b) = f.mul_add(S(P[a], T[b]), rho_, S(T[b], P[a]));
  Matrix w_tt = matmul(phi_qt_inv, sub(select_cols(R, T), matmul(phi_qp, w_pt)));

  const Symbol one_plus_rho = f.add(1, rho_);
  const Symbol one_minus_rho2 = f.sub(1, f.mul(rho_, rho_));
  for (std::size_t a = 0; a < T.size(); ++a) {
    S(T[a], T[a]) = f.div(w_tt(a, a), one_plus_rho);
    for (std::size_t b = a + 1; b < T.size(); ++b) {
      // W_ab = S_ab + rho S_ba, W_ba = S_ba + rho S_ab
      S(T[a], T[b]) = f.div(f.sub(w_tt(a, b), f.mul(rho_, w_tt(b, a))), one_minus_rho2);
      S(T[b], T[a]) = f.div(f.sub(w_tt(b, a), f.mul(rho_, w_tt(a, b))), one_minus_rho2);
    }
  }
  return {S.data().begin(), S.data().end()};
}

std::string MiserCodec::description() const {
  return describe(params()) + " rho=" + std::to_string(rho_);
}

std::shared_ptr<const Codec> miser_build(const CodeParams& params, std::optional<Symbol> rho) {
  if (params.kind != CodeKind::Miser) {
    throw Error(Errc::InfeasibleParameters, "not MISER parameters");
  }
  const std::size_t depth = shortening_depth(params);
  if (depth == 0) return std::make_shared<MiserCodec>(params, rho);
  CodeParams parent = params;
  parent.n += depth;
  parent.k += depth;
  parent.d += depth;
  parent.B += depth * params.alpha;
  return std::make_shared<ShortenedCodec>(params, std::make_shared<MiserCodec>(parent, rho), depth);
}

}  // namespace pmrc
