#include "pmrc/codec.hpp"

#include <algorithm>
#include <set>

namespace pmrc {

Symbol Codec::helper_symbol(NodeId helper, std::span<const Symbol> content, NodeId failed) const {
  check_node(helper);
  check_node(failed);
  if (helper == failed) {
    throw Error(Errc::SelfHelp, "node " + std::to_string(helper) + " cannot help repair itself");
  }
  if (content.size() != params_.alpha) {
    throw Error(Errc::WrongLength, "helper content has " + std::to_string(content.size()) +
                                       " symbols, expected " + std::to_string(params_.alpha));
  }
  return dot(field_, content, repair_vector(failed));
}

void Codec::check_node(NodeId id) const {
  if (id < 1 || id > params_.n) {
    throw Error(Errc::IndexOutOfRange,
                "node " + std::to_string(id) + " outside 1.." + std::to_string(params_.n));
  }
}

void Codec::check_message(std::span<const Symbol> message) const {
  if (message.size() != params_.B) {
    throw Error(Errc::WrongLength, "message has " + std::to_string(message.size()) +
                                       " symbols, expected B=" + std::to_string(params_.B));
  }
  for (Symbol s : message) {
    if (!field_.contains(s)) {
      throw Error(Errc::FieldMismatch, "symbol " + std::to_string(s) + " not in F_" +
                                           std::to_string(params_.q));
    }
  }
}

void Codec::check_helpers(NodeId failed, std::span<const NodeId> helpers,
                          std::span<const Symbol> symbols) const {
  check_node(failed);
  if (helpers.size() != helpers_required()) {
    throw Error(Errc::BadHelperCount, std::to_string(helpers.size()) + " helpers, expected " +
                                          std::to_string(helpers_required()));
  }
  if (symbols.size() != helpers.size()) {
    throw Error(Errc::BadHelperCount, std::to_string(symbols.size()) + " symbols for " +
                                          std::to_string(helpers.size()) + " helpers");
  }
  std::set<NodeId> seen;
  for (NodeId h : helpers) {
    check_node(h);
    if (h == failed) {
      throw Error(Errc::SelfHelp, "failed node " + std::to_string(h) + " listed as helper");
    }
    if (!seen.insert(h).second) {
      throw Error(Errc::BadHelperCount, "helper " + std::to_string(h) + " listed twice");
    }
  }
}

void Codec::check_collection(std::span<const NodeId> nodes, const Matrix& rows) const {
  if (nodes.size() != params_.k) {
    throw Error(Errc::BadNodeCount, std::to_string(nodes.size()) + " nodes, expected k=" +
                                        std::to_string(params_.k));
  }
  std::set<NodeId> seen;
  for (NodeId id : nodes) {
    check_node(id);
    if (!seen.insert(id).second) {
      throw Error(Errc::BadNodeCount, "node " + std::to_string(id) + " listed twice");
    }
  }
  if (rows.rows() != nodes.size() || rows.cols() != params_.alpha) {
    throw Error(Errc::DimensionMismatch,
                "collected " + std::to_string(rows.rows()) + "x" + std::to_string(rows.cols()) +
                    ", expected " + std::to_string(nodes.size()) + "x" +
                    std::to_string(params_.alpha));
  }
  if (!(rows.field() == field_)) throw Error(Errc::FieldMismatch, "collected rows over another field");
}

}  // namespace pmrc
