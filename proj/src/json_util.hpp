#pragma once

#include <json.hpp>

#include "fostat/core.hpp"

namespace fostat::detail {

inline Signature parse_signature_json(const nlohmann::json& obj, const std::string& origin) {
  if (!obj.is_object()) throw DomainError(origin + ": signature must be an object");
  Signature sig;
  for (const auto& [name, spec] : obj.items()) {
    if (!spec.is_object() || !spec.contains("arity"))
      throw DomainError(origin + ": signature entry '" + name +
                        "' must be {\"arity\":int[,\"symmetric\":bool]}");
    sig.relations.push_back({name, spec["arity"].get<int>(), spec.value("symmetric", false)});
  }
  return sig;
}

inline nlohmann::json signature_to_json(const Signature& sig) {
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& rel : sig.relations)
    obj[rel.name] = {{"arity", rel.arity}, {"symmetric", rel.symmetric}};
  return obj;
}

}  // namespace fostat::detail
