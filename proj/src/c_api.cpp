#include "ptkv/ptkv.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "ptkv/axioms.hpp"
#include "ptkv/canonical.hpp"
#include "ptkv/error.hpp"
#include "ptkv/formula.hpp"
#include "ptkv/model.hpp"

struct ptkv_formula {
  ptkv::Formula f;
};

struct ptkv_model {
  ptkv::ProbModel m;
};

namespace {

thread_local std::string g_error;
thread_local long g_position = -1;

ptkv_status fail(ptkv_status s, std::string msg, long position = -1) {
  g_error = std::move(msg);
  g_position = position;
  return s;
}

template <typename Fn>
ptkv_status guarded(Fn&& fn) {
  g_error.clear();
  g_position = -1;
  try {
    return fn();
  } catch (const ptkv::Error& e) {
    long pos = e.position() ? static_cast<long>(*e.position()) : -1;
    return fail(static_cast<ptkv_status>(e.code()), e.what(), pos);
  } catch (const nlohmann::json::exception& e) {
    return fail(PTKV_E_INVALID_MODEL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PTKV_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PTKV_E_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ptkv_status null_arg(const char* what) {
  return fail(PTKV_E_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

ptkv::canon::SatOptions sat_options(const ptkv_sat_options* opts) {
  ptkv::canon::SatOptions o;
  if (!opts) return o;
  if (opts->k_size) o.k_size = ptkv::canon::KSize::parse(opts->k_size);
  o.replicas = opts->replicas;
  if (opts->closure_cap) o.enumerate.closure_cap = opts->closure_cap;
  return o;
}

}  // namespace

extern "C" {

const char* ptkv_status_name(ptkv_status status) {
  if (status == PTKV_OK) return "Ok";
  if (status < PTKV_E_SYNTAX || status > PTKV_E_INTERNAL) return "Unknown";
  return ptkv::errc_name(static_cast<ptkv::Errc>(status));
}

const char* ptkv_last_error(void) { return g_error.c_str(); }

long ptkv_last_error_position(void) { return g_position; }

void ptkv_string_free(char* s) { std::free(s); }

ptkv_status ptkv_formula_parse(const char* text, ptkv_formula** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new ptkv_formula{ptkv::parse(text)};
    return PTKV_OK;
  });
}

ptkv_status ptkv_formula_print(const ptkv_formula* f, char** out) {
  if (!f) return null_arg("formula");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = dup(ptkv::print(f->f));
    return PTKV_OK;
  });
}

ptkv_status ptkv_formula_modal_depth(const ptkv_formula* f, size_t* out) {
  if (!f) return null_arg("formula");
  if (!out) return null_arg("out");
  *out = ptkv::modal_depth(f->f);
  return PTKV_OK;
}

void ptkv_formula_free(ptkv_formula* f) { delete f; }

ptkv_status ptkv_model_from_json(const char* json, ptkv_model** out) {
  if (!json) return null_arg("json");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new ptkv_model{ptkv::model_from_json(nlohmann::json::parse(json))};
    return PTKV_OK;
  });
}

ptkv_status ptkv_model_to_json(const ptkv_model* m, char** out) {
  if (!m) return null_arg("model");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = dup(ptkv::model_to_json(m->m).dump(2));
    return PTKV_OK;
  });
}

ptkv_status ptkv_model_validate(const ptkv_model* m, const ptkv_formula* f, char** report) {
  if (!m) return null_arg("model");
  return guarded([&] {
    std::vector<ptkv::Term> terms;
    if (f) {
      for (const ptkv::Term& t : ptkv::terms_of(f->f)) terms.push_back(t);
    }
    ptkv::ValidationReport r = ptkv::validate(m->m, terms);
    if (report) {
      *report = dup(nlohmann::json{{"ok", r.ok()}, {"violations", r.violations}}.dump(2));
    }
    if (r.ok()) return PTKV_OK;
    std::string msg = "invalid model:";
    for (const std::string& v : r.violations) msg += " " + v + ";";
    return fail(PTKV_E_INVALID_MODEL, msg);
  });
}

void ptkv_model_free(ptkv_model* m) { delete m; }

ptkv_status ptkv_check(const ptkv_model* m, const char* world, const ptkv_formula* f,
                       int* result) {
  if (!m) return null_arg("model");
  if (!world) return null_arg("world");
  if (!f) return null_arg("formula");
  if (!result) return null_arg("result");
  return guarded([&] {
    *result = ptkv::satisfies(m->m, std::string(world), f->f) ? 1 : 0;
    return PTKV_OK;
  });
}

ptkv_status ptkv_sat(const ptkv_formula* f, const ptkv_sat_options* opts, int* sat,
                     char** verdict) {
  if (!f) return null_arg("formula");
  if (!sat) return null_arg("sat");
  return guarded([&] {
    ptkv::canon::SatVerdict v = ptkv::canon::decide_sat(f->f, sat_options(opts));
    if (v.sat && !v.checked) {
      return fail(PTKV_E_INTERNAL, "certificate model failed re-verification");
    }
    *sat = v.sat ? 1 : 0;
    if (verdict) *verdict = dup(ptkv::canon::verdict_to_json(v).dump(2));
    return PTKV_OK;
  });
}

ptkv_status ptkv_closure_report(const ptkv_formula* f, const ptkv_sat_options* opts,
                                char** report) {
  if (!f) return null_arg("formula");
  if (!report) return null_arg("report");
  return guarded([&] {
    *report = dup(ptkv::canon::closure_report(f->f, sat_options(opts)).dump(2));
    return PTKV_OK;
  });
}

ptkv_status ptkv_axioms(uint64_t seed, size_t trials, const char* controls, size_t* failures,
                        char** report) {
  if (!failures) return null_arg("failures");
  return guarded([&] {
    ptkv::axioms::SoundnessOptions o;
    o.seed = seed;
    o.trials = trials;
    if (controls) {
      std::stringstream ss(controls);
      std::string name;
      while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        auto c = ptkv::axioms::control_from_name(name);
        if (!c) {
          return fail(PTKV_E_INVALID_ARGUMENT, "unknown negative control '" + name + "'");
        }
        o.controls.push_back(*c);
      }
    }
    ptkv::axioms::SoundnessReport r = ptkv::axioms::soundness_suite(o);
    *failures = r.total_failures();
    if (report) *report = dup(ptkv::axioms::report_to_json(r).dump(2));
    return PTKV_OK;
  });
}

ptkv_status ptkv_brute_force(const ptkv_formula* f, size_t worlds, size_t domain,
                             size_t denominator, int* found, char** out) {
  if (!f) return null_arg("formula");
  if (!found) return null_arg("found");
  return guarded([&] {
    auto pm = ptkv::canon::brute_force_sat(f->f, {worlds, domain, denominator});
    *found = pm ? 1 : 0;
    if (out) {
      nlohmann::json j = nullptr;
      if (pm) j = {{"model", ptkv::model_to_json(pm->model)}, {"world", pm->model.worlds()[pm->world]}};
      *out = dup(j.dump(2));
    }
    return PTKV_OK;
  });
}

}  // extern "C"
