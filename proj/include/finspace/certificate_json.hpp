#pragma once

#include <memory>
#include <string>

#include "json.hpp"

#include "finspace/hasse_io.hpp"
#include "finspace/splitter.hpp"

namespace finspace {

namespace detail {

inline std::string write_preorder(const Preorder& p) {
  if (p.is_antisymmetric()) return write_hasse(Poset(p), PointDeclarations::All);
  // Non-T0 spaces: declare every point, then every strict relation.
  std::string out;
  for (int x = 0; x < p.size(); ++x) out += "point " + p.label(x) + "\n";
  for (int x = 0; x < p.size(); ++x)
    p.up(x).for_each([&](Element y) {
      if (y != x) out += p.label(x) + " < " + p.label(y) + "\n";
    });
  return out;
}

}  // namespace detail

/// {"space": <hasse text>, "rule": ..., "evidence": {...}, "template": ...,
///  "children": [...], "wedge": ..., "status": ...}
inline nlohmann::json certificate_to_json(const Certificate& c) {
  nlohmann::json j;
  j["space"] = detail::write_preorder(c.space);
  j["rule"] = c.rule;
  j["evidence"] = c.evidence;
  j["template"] = to_text(c.templ);
  j["children"] = nlohmann::json::array();
  for (const auto& ch : c.children) j["children"].push_back(certificate_to_json(*ch));
  j["wedge"] = to_text(c.wedge);
  j["status"] = std::string(to_string(c.status));
  return j;
}

inline CertificatePtr certificate_from_json(const nlohmann::json& j) {
  auto c = std::make_shared<Certificate>();
  c->space = parse_hasse(j.at("space").get<std::string>());
  c->rule = j.at("rule").get<std::string>();
  c->evidence = j.at("evidence");
  c->templ = parse_wedge(j.at("template").get<std::string>());
  for (const auto& ch : j.at("children")) c->children.push_back(certificate_from_json(ch));
  c->wedge = parse_wedge(j.at("wedge").get<std::string>());
  const std::string st = j.at("status").get<std::string>();
  if (st == "ok")
    c->status = SplitStatus::Ok;
  else if (st == "partial")
    c->status = SplitStatus::Partial;
  else if (st == "failed")
    c->status = SplitStatus::Failed;
  else
    throw InvariantError("unknown certificate status '" + st + "'");
  return c;
}

}  // namespace finspace
