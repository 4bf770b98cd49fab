#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

#include "qpadic/parser.hpp"
#include "qpadic/units.hpp"
#include "qpadic/verify.hpp"

using namespace qpadic;

namespace {

int default_precision() {
  if (const char* env = std::getenv("QPADIC_PRECISION")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return kDefaultPrecision;
}

struct ElementCmd {
  std::string field;
  std::string element;
  int precision = default_precision();
  bool json = false;
  int depth = 0;  // decompose only
};

void emit(const ElementCmd& cmd, const std::string& op, const std::string& result) {
  if (cmd.json) {
    nlohmann::ordered_json j;
    j["op"] = op;
    j["field"] = cmd.field;
    j["input"] = cmd.element;
    j["result"] = result;
    j["precision"] = cmd.precision;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << result << "\n";
  }
}

std::string render_full_decomposition(const FullDecomposition& fd) {
  return "pi^" + std::to_string(fd.pi_exponent) + " * w(" + std::to_string(fd.teich.index()) +
         ") * " + fd.unit_part.str();
}

void add_element_command(CLI::App& app, const std::string& name, const std::string& help,
                         std::shared_ptr<ElementCmd> cmd,
                         std::function<std::string(const FieldElement&, const ElementCmd&)> run) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--field", cmd->field, "field specification, e.g. \"Q3(zeta_p^1)\"")
      ->required();
  sub->add_option("element", cmd->element, "element expression")->required();
  sub->add_option("--precision", cmd->precision, "base-p digits retained");
  sub->add_flag("--json", cmd->json, "machine-readable output");
  if (name == "decompose")
    sub->add_option("--depth", cmd->depth, "digit depth (default: stabilization depth)");
  sub->callback([cmd, name, run] {
    FieldSpec spec = parse_field_spec(cmd->field);
    FieldTower tower = make_tower(spec, cmd->precision);
    FieldElement x = parse_element(cmd->element, tower);
    emit(*cmd, name, run(x, *cmd));
  });
}

std::string render_report(const LemmaReport& r, bool timings) {
  std::string line = "[" + status_name(r.status) + "] " + r.lemma_id + " p=" +
                     std::to_string(r.p);
  if (timings) line += " (" + std::to_string(r.elapsed_ms) + " ms)";
  for (const auto& [name, value] : r.witnesses) line += "\n    " + name + ": " + value;
  for (const auto& note : r.notes) line += "\n    note: " + note;
  return line;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact arithmetic in Q_p and its cyclotomic towers, with a finite-level "
               "verification registry"};
  app.require_subcommand(1);

  auto val_cmd = std::make_shared<ElementCmd>();
  add_element_command(app, "val", "exact valuation of an element", val_cmd,
                      [](const FieldElement& x, const ElementCmd&) {
                        return x.valuation().str();
                      });

  auto norm_cmd = std::make_shared<ElementCmd>();
  add_element_command(app, "norm", "field norm down to Q_p", norm_cmd,
                      [](const FieldElement& x, const ElementCmd&) { return x.norm().str(); });

  auto res_cmd = std::make_shared<ElementCmd>();
  add_element_command(app, "residue", "reduction modulo the maximal ideal", res_cmd,
                      [](const FieldElement& x, const ElementCmd&) {
                        return x.residue().str();
                      });

  auto dec_cmd = std::make_shared<ElementCmd>();
  add_element_command(app, "decompose", "pi-power, teichmuller and digit decomposition", dec_cmd,
                      [](const FieldElement& x, const ElementCmd& c) {
                        return render_full_decomposition(full_decomposition(x, c.depth));
                      });

  auto coo_cmd = std::make_shared<ElementCmd>();
  add_element_command(app, "coords", "kummer coordinates in K^x/K^xp", coo_cmd,
                      [](const FieldElement& x, const ElementCmd&) {
                        return kummer_coordinates(x).str();
                      });

  auto pow_cmd = std::make_shared<ElementCmd>();
  add_element_command(app, "is-pth-power", "decide membership in F^xp with witness", pow_cmd,
                      [](const FieldElement& x, const ElementCmd&) {
                        PthPowerResult r = is_pth_power(x);
                        if (!r.is_power) return std::string("false");
                        return "true witness=" + r.witness.str();
                      });

  // verify
  auto vopts = std::make_shared<VerifyOptions>();
  auto vjson = std::make_shared<bool>(false);
  auto vtimings = std::make_shared<bool>(false);
  auto vserial = std::make_shared<bool>(false);
  auto vprimes = std::make_shared<std::string>("2,3,5");
  vopts->precision = default_precision();
  CLI::App* verify = app.add_subcommand("verify", "run registered finite-level checks");
  verify->add_option("ids", vopts->ids, "lemma ids, or 'all'")->expected(-1);
  verify->add_option("--p", *vprimes, "comma-separated primes (default 2,3,5)");
  verify->add_option("--precision", vopts->precision, "base-p digits retained");
  verify->add_flag("--json", *vjson, "machine-readable report array");
  verify->add_flag("--timings", *vtimings, "include wall-clock times (breaks byte determinism)");
  verify->add_flag("--serial", *vserial, "disable parallel class scans");
  verify->add_flag("--slow", vopts->slow_paths, "enable opt-in heavy enumerations");
  verify->callback([vopts, vjson, vtimings, vserial, vprimes] {
    vopts->primes.clear();
    std::string token;
    for (char ch : *vprimes + ",") {
      if (ch == ',') {
        if (!token.empty()) {
          long p = std::atol(token.c_str());
          if (!is_prime(p)) raise(errc::not_prime, "requested p = " + token + " is not prime");
          vopts->primes.push_back(p);
          token.clear();
        }
      } else {
        token += ch;
      }
    }
    if (vopts->primes.empty()) raise(errc::bad_argument, "empty prime list");
    vopts->parallel = !*vserial;
    std::vector<LemmaReport> reports = run_verification(*vopts);
    if (*vjson) {
      std::cout << reports_to_json(reports, *vtimings);
    } else {
      for (const auto& r : reports) std::cout << render_report(r, *vtimings) << "\n";
      long failed = 0;
      for (const auto& r : reports)
        if (r.status == CheckStatus::failed) ++failed;
      std::cout << reports.size() << " reports, " << failed << " failed\n";
    }
    if (!all_verified(reports)) std::exit(1);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
