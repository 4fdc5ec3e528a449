#include "ptkv/typespace.hpp"

namespace ptkv::ts {

nlohmann::json trace_to_json(const TypeSpace& space, const std::vector<Formula>& star_axioms) {
  using nlohmann::json;
  const Closure& sigma = space.sigma;
  json stages = json::array();
  for (const Stage& st : space.trace.stages) {
    json elim = json::array();
    for (const Elimination& e : st.eliminated) {
      json profile = json::array();
      for (std::size_t i : e.profile.literals) profile.push_back(sigma.formulas()[i].text());
      json systems = json::array();
      for (const lp::LinearSystem& sys : e.fc_dump) systems.push_back(lp::system_to_json(sys));
      elim.push_back({{"type", e.type_index},
                      {"literals", type_literals(sigma, space.initial[e.type_index])},
                      {"agent", e.agent.index},
                      {"profile", profile},
                      {"disjuncts", e.disjuncts},
                      {"fc", systems}});
    }
    stages.push_back({{"index", st.index}, {"surviving", st.surviving}, {"eliminated", elim}});
  }
  json axioms = json::array();
  for (const Formula& f : star_axioms) axioms.push_back(f.text());
  json agents = json::array();
  for (Agent a : space.agents) agents.push_back(a.index);
  return {{"k_size", space.k_size},
          {"agents", agents},
          {"types", space.initial.size()},
          {"survivors", space.survivors},
          {"stages", stages},
          {"star_axioms", axioms}};
}

}  // namespace ptkv::ts
