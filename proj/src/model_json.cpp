#include <string>

#include "ptkv/error.hpp"
#include "ptkv/model.hpp"

namespace ptkv {

using nlohmann::json;

namespace {

std::string agent_key(Agent a) { return "agent:" + std::to_string(a.index); }

Agent parse_agent_key(const std::string& key) {
  const std::string prefix = "agent:";
  if (key.rfind(prefix, 0) != 0) {
    throw Error(Errc::kInvalidModel, "measure key '" + key + "' is not agent:<n>");
  }
  try {
    std::size_t used = 0;
    unsigned long v = std::stoul(key.substr(prefix.size()), &used);
    if (used + prefix.size() != key.size() || v < 1) throw std::invalid_argument("");
    return Agent{static_cast<unsigned>(v)};
  } catch (const std::exception&) {
    throw Error(Errc::kInvalidModel, "bad agent key '" + key + "'");
  }
}

std::size_t require_world(const ProbModel& m, const std::string& name,
                          const char* where) {
  auto idx = m.world_index(name);
  if (!idx) {
    throw Error(Errc::kInvalidModel,
                std::string("dangling world reference '") + name + "' in " + where);
  }
  return *idx;
}

Rat mass_from_json(const json& v) {
  if (v.is_string()) return parse_rat(v.get<std::string>());
  if (v.is_number_integer()) return Rat(v.get<long>());
  throw Error(Errc::kBadRational, "masses must be rational strings");
}

}  // namespace

json model_to_json(const ProbModel& m) {
  json out;
  out["worlds"] = m.worlds();
  out["domain"] = m.domain();
  json valuation = json::object();
  json term_values = json::object();
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    json props = json::object();
    for (const auto& [p, b] : m.props_at(w)) props[p] = b;
    valuation[m.worlds()[w]] = props;
    json vals = json::object();
    for (const auto& [t, d] : m.terms_at(w)) vals[t] = m.domain().at(d);
    term_values[m.worlds()[w]] = vals;
  }
  out["valuation"] = valuation;
  out["term_values"] = term_values;
  json measures = json::object();
  for (Agent a : m.agents()) {
    json rows = json::object();
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      const Distribution* d = m.measure(a, w);
      if (d == nullptr) continue;
      json row = json::object();
      for (const auto& [u, mass] : d->masses) {
        row[m.worlds().at(u)] = rat_to_json_string(mass);
      }
      rows[m.worlds()[w]] = row;
    }
    measures[agent_key(a)] = rows;
  }
  out["measures"] = measures;
  return out;
}

ProbModel model_from_json(const json& j) {
  try {
    ProbModel m(j.at("worlds").get<std::vector<std::string>>(),
                j.at("domain").get<std::vector<std::string>>());
    if (j.contains("valuation")) {
      for (const auto& [w, props] : j.at("valuation").items()) {
        std::size_t wi = require_world(m, w, "valuation");
        for (const auto& [p, b] : props.items()) m.set_prop(wi, p, b.get<bool>());
      }
    }
    if (j.contains("term_values")) {
      for (const auto& [w, vals] : j.at("term_values").items()) {
        std::size_t wi = require_world(m, w, "term_values");
        for (const auto& [t, d] : vals.items()) {
          auto di = m.value_index(d.get<std::string>());
          if (!di) {
            throw Error(Errc::kInvalidModel, "unknown value '" +
                                                 d.get<std::string>() +
                                                 "' for term " + t);
          }
          m.set_term_value(wi, Term{t}, *di);
        }
      }
    }
    if (j.contains("measures")) {
      for (const auto& [key, rows] : j.at("measures").items()) {
        Agent a = parse_agent_key(key);
        for (const auto& [w, row] : rows.items()) {
          std::size_t wi = require_world(m, w, "measures");
          std::vector<std::pair<std::size_t, Rat>> entries;
          for (const auto& [u, mass] : row.items()) {
            entries.emplace_back(require_world(m, u, "measures"),
                                 mass_from_json(mass));
          }
          m.set_measure(a, wi, Distribution::from_entries(std::move(entries)));
        }
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidModel, std::string("malformed model JSON: ") + e.what());
  }
}

}  // namespace ptkv
