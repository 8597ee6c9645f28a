#include "sflab/json_io.hpp"

#include <json.hpp>

#include "sflab/error.hpp"

namespace sflab {

using json = nlohmann::json;

namespace {

json to_json(const Derivation& d) {
  json j;
  j["rule"] = rule_name(d.rule);
  j["ctx"] = json::object();
  for (const auto& [x, t] : d.concl.ctx) j["ctx"][x] = render_type(t);
  j["term"] = render(d.concl.term);
  j["type"] = render_type(d.concl.ty);
  if (d.rule == Rule::AllE) j["inst"] = render_type(d.inst);
  j["children"] = json::array();
  for (const Derivation& c : d.children) j["children"].push_back(to_json(c));
  return j;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::Syntax, std::string("derivation node lacks \"") + key + "\"");
  }
  return j.at(key);
}

std::string text_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw Error(ErrorCode::Syntax, std::string("\"") + key + "\" is not a string");
  return v.get<std::string>();
}

Derivation from_json(const json& j) {
  Derivation d;
  d.rule = parse_rule(text_field(j, "rule"));
  if (j.contains("ctx")) {
    const json& ctx = j.at("ctx");
    if (!ctx.is_object()) throw Error(ErrorCode::Syntax, "\"ctx\" is not an object");
    for (const auto& [x, t] : ctx.items()) {
      if (!t.is_string()) throw Error(ErrorCode::Syntax, "context type is not a string");
      d.concl.ctx.emplace(x, parse_type(t.get<std::string>()));
    }
  }
  d.concl.term = parse_term(text_field(j, "term"));
  d.concl.ty = parse_type(text_field(j, "type"));
  if (j.contains("inst")) d.inst = parse_type(text_field(j, "inst"));
  if (j.contains("children")) {
    const json& cs = j.at("children");
    if (!cs.is_array()) throw Error(ErrorCode::Syntax, "\"children\" is not an array");
    for (const json& c : cs) d.children.push_back(from_json(c));
  }
  return d;
}

}  // namespace

Rule parse_rule(const std::string& name) {
  for (Rule r : {Rule::Id, Rule::ArrI, Rule::ArrE, Rule::AllI, Rule::AllE}) {
    if (name == rule_name(r)) return r;
  }
  throw Error(ErrorCode::Syntax, "unknown rule: " + name);
}

std::string derivation_to_json(const Derivation& d, int indent) { return to_json(d).dump(indent); }

Derivation derivation_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Syntax, e.what());
  }
  // reports from typecheck and idsigma wrap the tree
  if (j.is_object() && !j.contains("rule") && j.contains("derivation")) return from_json(j["derivation"]);
  return from_json(j);
}

}  // namespace sflab
