#include <json.hpp>

#include "stipula/interp.hpp"

namespace stipula {

using nlohmann::json;

namespace {

Value to_value(const json& j, const std::string& what) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) return j.get<std::string>();
  throw ArgumentError(what + ": expected an integer, boolean or string, got " + j.dump());
}

json from_value(const Value& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

const json& member(const json& obj, const char* key, std::size_t step) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ArgumentError("step " + std::to_string(step) + ": missing \"" + key + "\"");
  return *it;
}

std::int64_t integer(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ArgumentError(what + ": expected an integer, got " + j.dump());
  return j.get<std::int64_t>();
}

Location slot(const std::string& qualified) {
  auto dot = qualified.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == qualified.size())
    throw ArgumentError("endowment key '" + qualified + "' must be Party.asset");
  return Location::party(qualified.substr(0, dot), qualified.substr(dot + 1));
}

TraceStep parse_step(const json& j, std::size_t i) {
  if (!j.is_object()) throw ArgumentError("step " + std::to_string(i) + ": expected an object");
  std::string op = member(j, "op", i).get<std::string>();
  std::string at = "step " + std::to_string(i);
  if (op == "init") {
    InitStep s;
    if (auto it = j.find("fields"); it != j.end())
      for (const auto& [k, v] : it->items()) s.fields[k] = to_value(v, at + " field " + k);
    if (auto it = j.find("endowments"); it != j.end())
      for (const auto& [k, v] : it->items()) s.endowments[slot(k)] = integer(v, at + " endowment " + k);
    return s;
  }
  if (op == "invoke") {
    InvokeStep s;
    s.clause = member(j, "clause", i).get<std::string>();
    if (auto it = j.find("value_args"); it != j.end())
      for (const auto& [k, v] : it->items()) s.value_args[k] = to_value(v, at + " argument " + k);
    if (auto it = j.find("asset_args"); it != j.end())
      for (const auto& [k, v] : it->items()) s.asset_args[k] = integer(v, at + " asset argument " + k);
    return s;
  }
  if (op == "tick") {
    TickStep s;
    if (auto it = j.find("n"); it != j.end()) s.n = integer(*it, at + " n");
    return s;
  }
  if (op == "fire") return FireStep{static_cast<int>(integer(member(j, "event", i), at + " event"))};
  throw ArgumentError(at + ": unknown op \"" + op + "\"");
}

}  // namespace

std::vector<TraceStep> parse_trace(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string("trace is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ArgumentError("trace must be a JSON array of steps");
  std::vector<TraceStep> out;
  try {
    for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(parse_step(doc[i], i));
  } catch (const json::type_error& e) {
    throw ArgumentError(std::string("malformed trace step: ") + e.what());
  }
  return out;
}

std::string state_to_json(const RuntimeState& s) {
  json j;
  j["control"] = s.control;
  j["clock"] = s.clock;
  j["fields"] = json::object();
  for (const auto& [k, v] : s.fields) j["fields"][k] = from_value(v);
  j["assets"] = json::object();
  for (const auto& [l, v] : s.assets) j["assets"][l.str()] = v;
  j["pending"] = json::array();
  for (const auto& p : s.pending)
    j["pending"].push_back(
        {{"event", p.event_index}, {"remaining", p.remaining}, {"trigger", p.trigger_state}, {"target", p.target_state}});
  j["messages"] = json::array();
  for (const auto& m : s.messages) j["messages"].push_back({{"party", m.party}, {"value", from_value(m.value)}});
  j["payments"] = json::array();
  for (const auto& p : s.payments)
    j["payments"].push_back({{"from", p.from}, {"to", p.to}, {"param", p.param}, {"amount", p.amount}});
  return j.dump(2);
}

}  // namespace stipula
