#include "uncert/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "uncert/catalog.hpp"
#include "uncert/certify.hpp"
#include "uncert/error.hpp"
#include "uncert/mesh.hpp"
#include "uncert/oracle.hpp"
#include "uncert/report.hpp"

namespace uncert {

namespace {

constexpr int kOk = 0;
constexpr int kNumericFailure = 1;
constexpr int kUsage = 2;

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects k=v, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw UsageError("--param " + key + ": '" + text + "' is not a number");
    out[key] = value;
  }
  return out;
}

double default_hbar() {
  const char* env = std::getenv("UNCERT_HBAR");
  if (env == nullptr || *env == '\0') return 1.0;
  char* end = nullptr;
  const double h = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(h > 0.0)) throw UsageError(std::string("UNCERT_HBAR='") + env + "' is not a positive number");
  return h;
}

void write_json(const nlohmann::json& doc, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << doc.dump(2) << "\n";
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  file << doc.dump(2) << "\n";
  if (!file) throw Error("failed writing '" + path + "'");
}

std::string summary_line(const BoundReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << to_string(r.verdict);
  if (r.verdict != Verdict::kUnbounded && std::isfinite(r.bound)) os << " bound=" << r.bound;
  if (r.params) os << " b=" << r.params->b << " gamma=" << r.params->gamma;
  return os.str();
}

struct CertifyOptions {
  std::vector<std::string> params;
  double hbar = 1.0;
  int nmax = 5;
  std::string json_path;
  bool no_oracle = false;
  int dim = 30;
  int restarts = 20;
  std::uint64_t seed = 42;
};

void add_certify_options(CLI::App* cmd, CertifyOptions& o) {
  cmd->add_option("--param", o.params, "parameter k=v (repeatable)");
  cmd->add_option("--hbar", o.hbar, "Planck constant")->check(CLI::PositiveNumber);
  cmd->add_option("--nmax", o.nmax, "highest sheet index solved")->check(CLI::Range(0, 50));
  cmd->add_option("--json", o.json_path, "write the report here instead of stdout");
  cmd->add_flag("--no-oracle", o.no_oracle, "skip the oracle cross-checks");
  cmd->add_option("--dim", o.dim, "Fock dimension of the oracle")->check(CLI::Range(2, 400));
  cmd->add_option("--restarts", o.restarts, "oracle restarts")->check(CLI::Range(1, 10000));
  cmd->add_option("--seed", o.seed, "oracle seed");
}

CertifyConfig make_config(const CertifyOptions& o) {
  CertifyConfig cfg;
  cfg.solver.nmax = o.nmax;
  cfg.run_oracles = !o.no_oracle;
  cfg.fock.dim = o.dim;
  cfg.fock.restarts = o.restarts;
  cfg.fock.seed = o.seed;
  return cfg;
}

int catalog_list(std::ostream& out) {
  for (const auto& e : catalog()) {
    out << e.name << "\n  " << e.summary << "\n  f = " << e.expression(resolve_params(e, {})) << "\n";
    if (!e.params.empty()) {
      out << "  defaults:";
      for (const auto& p : e.params) out << " " << p.name << "=" << p.default_value;
      out << (e.open_params ? " (any --param replaces the whole set)" : "") << "\n";
    }
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lower bounds of uncertainty functionals f(x, y, w) of second moments", "uncert"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  // certify
  auto* certify_cmd = app.add_subcommand("certify", "certify the lower bound of an expression");
  std::string expr;
  CertifyOptions copt;
  certify_cmd->add_option("--expr", expr, "functional of x, y, w, z")->required();
  add_certify_options(certify_cmd, copt);

  // catalog
  auto* catalog_cmd = app.add_subcommand("catalog", "built-in functionals");
  catalog_cmd->require_subcommand(1);
  auto* list_cmd = catalog_cmd->add_subcommand("list", "list catalog entries");
  auto* run_cmd = catalog_cmd->add_subcommand("run", "certify a catalog entry and compare with its closed form");
  std::string entry_name;
  CertifyOptions ropt;
  run_cmd->add_option("name", entry_name, "catalog entry")->required();
  add_certify_options(run_cmd, ropt);

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force minimisation");
  oracle_cmd->require_subcommand(1);
  auto* fock_cmd = oracle_cmd->add_subcommand("fock", "minimise over truncated Fock-space states");
  auto* sheet_cmd = oracle_cmd->add_subcommand("sheet", "minimise over squeezed states of one sheet");
  std::string oexpr;
  std::vector<std::string> oparams;
  double ohbar = 1.0;
  FockConfig fcfg;
  int sheet_n = 0;
  for (auto* cmd : {fock_cmd, sheet_cmd}) {
    cmd->add_option("--expr", oexpr, "functional of x, y, w, z")->required();
    cmd->add_option("--param", oparams, "parameter k=v (repeatable)");
    cmd->add_option("--hbar", ohbar, "Planck constant")->check(CLI::PositiveNumber);
  }
  fock_cmd->add_option("--dim", fcfg.dim, "Fock dimension")->check(CLI::Range(2, 400));
  fock_cmd->add_option("--restarts", fcfg.restarts, "restarts")->check(CLI::Range(1, 10000));
  fock_cmd->add_option("--seed", fcfg.seed, "seed");
  sheet_cmd->add_option("--n", sheet_n, "sheet index")->check(CLI::Range(0, 1000));

  // mesh
  auto* mesh_cmd = app.add_subcommand("mesh", "CSV point sets in (u, v, w)");
  mesh_cmd->require_subcommand(1);
  MeshConfig mcfg;
  std::string mesh_out;
  std::vector<std::pair<CLI::App*, MeshKind>> mesh_kinds;
  for (const auto& [name, kind] : {std::pair{"hyperboloid", MeshKind::kHyperboloid},
                                   std::pair{"heisenberg", MeshKind::kHeisenberg},
                                   std::pair{"triple-line", MeshKind::kTripleLine}}) {
    auto* cmd = mesh_cmd->add_subcommand(name, std::string(name) + " mesh");
    cmd->add_option("--out", mesh_out, "output CSV path")->required();
    cmd->add_option("--nmax", mcfg.nmax, "highest sheet index")->check(CLI::Range(0, 1000));
    cmd->add_option("--hbar", mcfg.hbar, "Planck constant")->check(CLI::PositiveNumber);
    mesh_kinds.emplace_back(cmd, kind);
  }

  // bch
  auto* bch_cmd = app.add_subcommand("bch", "convert (b, gamma) to (r, theta, chi)");
  SqueezeParams sp;
  bch_cmd->add_option("--b", sp.b, "shear")->required();
  bch_cmd->add_option("--gamma", sp.gamma, "log squeeze")->required();

  try {
    const double hbar = default_hbar();
    copt.hbar = ropt.hbar = ohbar = mcfg.hbar = hbar;
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*certify_cmd) {
      const Functional f = parse(expr, parse_params(copt.params), copt.hbar);
      const CertifyConfig cfg = make_config(copt);
      const BoundReport report = certify(f, cfg);
      write_json(report_document(report, f, cfg), copt.json_path, out);
      if (!copt.json_path.empty()) out << summary_line(report) << "\n";
      return report.verdict == Verdict::kInconclusive ? kNumericFailure : kOk;
    }
    if (*list_cmd) return catalog_list(out);
    if (*run_cmd) {
      const CatalogEntry& entry = catalog_entry(entry_name);
      const ParamMap params = resolve_params(entry, parse_params(ropt.params));
      const Functional f = catalog_functional(entry, params, ropt.hbar);
      const CertifyConfig cfg = make_config(ropt);
      const BoundReport report = certify(f, cfg);
      const Expectation expected = entry.expect(params, ropt.hbar);
      write_json(report_document(report, f, cfg, entry.name, &expected), ropt.json_path, out);
      const bool ok = matches(report, expected);
      if (!ropt.json_path.empty()) out << summary_line(report) << (ok ? "" : " (does not match the catalog)") << "\n";
      if (!ok) err << entry.name << ": certified result does not match the catalog expectation\n";
      return ok ? kOk : kNumericFailure;
    }
    if (*fock_cmd || *sheet_cmd) {
      const Functional f = parse(oexpr, parse_params(oparams), ohbar);
      const OracleResult r = *fock_cmd ? fock_minimize(f, fcfg) : parametric_search(f, SheetIndex{sheet_n, ohbar});
      nlohmann::json doc = to_json(r);
      doc["expression"] = f.source();
      doc["hbar"] = ohbar;
      doc["version"] = version();
      out << doc.dump(2) << "\n";
      return std::isfinite(r.value) ? kOk : kNumericFailure;
    }
    for (const auto& [cmd, kind] : mesh_kinds) {
      if (!*cmd) continue;
      emit_mesh(kind, mcfg, mesh_out);
      return kOk;
    }
    if (*bch_cmd) {
      const ComplexSqueeze cs = bch_convert(sp);
      nlohmann::json doc = to_json(cs);
      doc["b"] = sp.b;
      doc["gamma"] = sp.gamma;
      doc["mismatch"] = bogoliubov_mismatch(bogoliubov_lhs(sp), bogoliubov_rhs(cs));
      out << doc.dump(2) << "\n";
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kNumericFailure;
  }
  err << app.help();
  return kUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace uncert
