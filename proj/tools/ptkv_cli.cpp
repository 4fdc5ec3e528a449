// Command-line front end over the C API.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptkv/ptkv.h"

namespace {

constexpr int kExitError = 2;

struct Failure {
  ptkv_status status;
};

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

int report_error(const std::string& kind, const std::string& message, long position = -1) {
  std::cerr << "{\"error\": \"" << json_escape(kind) << "\", \"message\": \""
            << json_escape(message) << "\"";
  if (position >= 0) std::cerr << ", \"position\": " << position;
  std::cerr << "}\n";
  return kExitError;
}

void check(ptkv_status s) {
  if (s != PTKV_OK) throw Failure{s};
}

struct CString {
  char* p = nullptr;
  ~CString() { ptkv_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using FormulaPtr = std::unique_ptr<ptkv_formula, decltype(&ptkv_formula_free)>;
using ModelPtr = std::unique_ptr<ptkv_model, decltype(&ptkv_model_free)>;

FormulaPtr parse_formula(const std::string& text) {
  ptkv_formula* f = nullptr;
  check(ptkv_formula_parse(text.c_str(), &f));
  return FormulaPtr(f, ptkv_formula_free);
}

// Writes to a sibling temporary file and renames it over the target.
void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text << '\n';
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic knowing-value logic: model checking and satisfiability"};
  app.require_subcommand(1);

  std::string formula, model_path, world, output, k_size = "plus-one";
  std::uint64_t seed = 42;
  std::size_t trials = 500, replicas = 0, closure_cap = 0;
  std::size_t bounds_worlds = 3, bounds_domain = 3, bounds_den = 3;
  std::vector<std::string> controls;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--output,-o", output, "Write JSON here instead of stdout");
  };
  auto add_k_size = [&](CLI::App* cmd) {
    cmd->add_option("--k-size", k_size, "Value coordinates: paper, plus-one or N")
        ->envname("PTKV_K_SIZE");
    cmd->add_option("--closure-cap", closure_cap, "Maximum core closure size (default 40)");
  };

  CLI::App* c_check = app.add_subcommand("check", "Evaluate a formula at a world of a model");
  c_check->add_option("--model", model_path, "Model JSON file")->required();
  c_check->add_option("--world", world, "World name")->required();
  c_check->add_option("--formula", formula, "Formula text")->required();
  add_output(c_check);

  CLI::App* c_sat = app.add_subcommand("sat", "Decide satisfiability via the canonical model");
  c_sat->add_option("--formula", formula, "Formula text")->required();
  add_k_size(c_sat);
  c_sat->add_option("--materialize-replicas", replicas,
                    "Expand each world into N replicas with geometric masses");
  add_output(c_sat);

  CLI::App* c_axioms = app.add_subcommand("axioms", "Run the schema soundness suite");
  c_axioms->add_option("--seed", seed, "Random seed")->envname("PTKV_SEED");
  c_axioms->add_option("--trials", trials, "Trials per schema");
  c_axioms->add_option("--negative-control", controls,
                       "Inject an invalid principle: factivity, positive-introspection, "
                       "kv-introspection, kvmon-reversed");
  add_output(c_axioms);

  CLI::App* c_closure = app.add_subcommand("closure", "List the closure and its type space");
  c_closure->add_option("--formula", formula, "Formula text")->required();
  add_k_size(c_closure);
  add_output(c_closure);

  CLI::App* c_search = app.add_subcommand("search", "Bounded exhaustive model search");
  c_search->add_option("--formula", formula, "Formula text")->required();
  c_search->add_option("--bounds-worlds", bounds_worlds, "At most 4 worlds");
  c_search->add_option("--bounds-domain", bounds_domain, "At most 3 values");
  c_search->add_option("--bounds-denominator", bounds_den, "Mass denominators up to 3");
  add_output(c_search);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("Usage", e.what());
  }

  try {
    if (c_check->parsed()) {
      FormulaPtr f = parse_formula(formula);
      ptkv_model* raw = nullptr;
      check(ptkv_model_from_json(read_file(model_path).c_str(), &raw));
      ModelPtr m(raw, ptkv_model_free);
      check(ptkv_model_validate(m.get(), f.get(), nullptr));
      int result = 0;
      check(ptkv_check(m.get(), world.c_str(), f.get(), &result));
      emit(result ? "{\"result\": true}" : "{\"result\": false}", output);
      return result ? 0 : 1;
    }
    ptkv_sat_options opts{k_size.c_str(), replicas, closure_cap};
    if (c_sat->parsed()) {
      FormulaPtr f = parse_formula(formula);
      int sat = 0;
      CString verdict;
      check(ptkv_sat(f.get(), &opts, &sat, &verdict.p));
      emit(verdict.str(), output);
      return sat ? 0 : 1;
    }
    if (c_closure->parsed()) {
      FormulaPtr f = parse_formula(formula);
      CString report;
      check(ptkv_closure_report(f.get(), &opts, &report.p));
      emit(report.str(), output);
      return 0;
    }
    if (c_axioms->parsed()) {
      std::string joined;
      for (const std::string& c : controls) joined += c + ",";
      std::size_t failures = 0;
      CString report;
      check(ptkv_axioms(seed, trials, controls.empty() ? nullptr : joined.c_str(), &failures,
                        &report.p));
      emit(report.str(), output);
      return failures == 0 ? 0 : 1;
    }
    if (c_search->parsed()) {
      FormulaPtr f = parse_formula(formula);
      int found = 0;
      CString result;
      check(ptkv_brute_force(f.get(), bounds_worlds, bounds_domain, bounds_den, &found,
                             &result.p));
      emit(result.str(), output);
      return found ? 0 : 1;
    }
  } catch (const Failure& e) {
    return report_error(ptkv_status_name(e.status), ptkv_last_error(),
                        ptkv_last_error_position());
  } catch (const std::exception& e) {
    return report_error("Io", e.what());
  }
  return kExitError;
}
