#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qhelper/errors.hpp"
#include "qhelper/json_io.hpp"
#include "state_spec.hpp"

using nlohmann::json;
using namespace qhelper;

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitIterationsExhausted = 3;

void write_output(const std::string& content, const std::string& out_path) {
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw qhelper::ValidationError("cannot write to '" + out_path + "'");
    f << content;
    if (!content.empty() && content.back() != '\n') f << "\n";
  }
  std::cout << content;
  if (!content.empty() && content.back() != '\n') std::cout << "\n";
}

int env_thread_cap() {
  const char* v = std::getenv("QHELPER_THREADS");
  if (!v) return 0;
  const int n = std::atoi(v);
  return n > 0 ? n : 1;
}

struct CommonOpts {
  std::string state;
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool state_required = true) {
  auto* s = cmd->add_option(
      "--state", opts.state,
      "state preset (bell; isotropic:P meaning P*Phi + (1-P)*I/4; "
      "product:H1,H2 with marginal binary entropies in bits; "
      "random:DA,DB,SEED), inline JSON, or a JSON file");
  if (state_required) s->required();
  cmd->add_option("--format", opts.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", opts.out, "also write the report to this file");
}

// --- entropy ---------------------------------------------------------------

int cmd_entropy(const CommonOpts& opts, const std::vector<std::string>& quantities) {
  const io::AnyState any = cli::load_state(opts.state);
  const DensityOperator rho = io::as_density(any);

  std::vector<std::pair<std::string, double>> rows;
  if (quantities.empty()) {
    std::vector<EntropyReport> reports;
    for (const auto& l : rho.layout().labels())
      reports.push_back(compute_report(rho, EntropyQuantity::H, {{l}}));
    reports.push_back(
        compute_report(rho, EntropyQuantity::H, {rho.layout().labels()}));
    if (rho.layout().size() == 2)
      reports.push_back(compute_report(rho, EntropyQuantity::I,
                                       {{rho.layout().labels()[0]},
                                        {rho.layout().labels()[1]}}));
    for (const auto& rep : reports) {
      const std::string text = rep.to_string();
      rows.emplace_back(text.substr(0, text.find(" =")), rep.value);
    }
  } else {
    for (const auto& q : quantities)
      rows.emplace_back(q, ri::parse_expression(q).evaluate(rho, {}));
  }

  if (opts.format == "csv") {
    std::string out = "quantity,value\n";
    for (const auto& [q, v] : rows) out += q + "," + io::format_double(v) + "\n";
    write_output(out, opts.out);
  } else {
    json rep = json::array();
    for (const auto& [q, v] : rows) rep.push_back({{"quantity", q}, {"value", v}});
    write_output(json{{"state", opts.state}, {"entropies", rep}}.dump(2), opts.out);
  }
  return 0;
}

// --- rates -------------------------------------------------------------------

int cmd_rates(const CommonOpts& opts, const std::string& channel_spec) {
  const DensityOperator rho = io::as_density(cli::load_state(opts.state));
  const io::ChannelSpec spec = cli::load_channel(channel_spec);
  const rates::HelperInstance inst(rho, spec.resolve(rho.layout().dim_of("B")));

  const rates::GlobalPureState phi = rates::build_phi(inst);
  const rates::RatePoint point = rates::rate_pair(phi);
  const double naive = rates::naive_rate(phi);
  const rates::DirectPartTotal direct = rates::direct_part_total(phi);

  std::map<std::string, double> residuals;
  residuals["decomposition"] = rates::decomposition_check(phi);
  residuals["direct_vs_r1"] = std::abs(direct.alice_ebits - point.r1);
  residuals["direct_vs_r2"] = std::abs(direct.helper_qubits - point.r2);

  if (opts.format == "csv") {
    std::string out = "key,value\n";
    out += "r1," + io::format_double(point.r1) + "\n";
    out += "r2," + io::format_double(point.r2) + "\n";
    out += "naive," + io::format_double(naive) + "\n";
    out += "helper_ebits," + io::format_double(direct.helper_ebits) + "\n";
    for (const auto& [k, v] : residuals)
      out += "residual_" + k + "," + io::format_double(v) + "\n";
    write_output(out, opts.out);
  } else {
    write_output(io::rates_report_json(point, naive, residuals, direct), opts.out);
  }
  return 0;
}

// --- frontier -------------------------------------------------------------------

int cmd_frontier(const CommonOpts& opts, const region::FrontierConfig& cfg) {
  const DensityOperator rho = io::as_density(cli::load_state(opts.state));
  const region::FrontierResult result =
      region::trace_frontier(rho, cfg, env_thread_cap());

  if (!opts.out.empty()) {
    const std::string hull_path = opts.out + ".hull.dat";
    std::ofstream f(hull_path, std::ios::binary);
    if (!f) throw qhelper::ValidationError("cannot write to '" + hull_path + "'");
    f << io::hull_datafile(result);
  }
  const std::string report = opts.format == "csv" ? io::frontier_csv(result)
                                                  : io::frontier_json(cfg, result);
  write_output(report, opts.out);

  for (const auto& fp : result.points)
    if (!fp.converged) {
      std::cerr << "warning: optimizer hit max_iters at lambda = " << fp.lambda << "\n";
      return kExitIterationsExhausted;
    }
  return 0;
}

// --- audit ----------------------------------------------------------------------

int cmd_audit(const CommonOpts& opts, int n, std::uint64_t seed, int dim_x, int dim_anc,
              double tolerance) {
  const DensityOperator rho = io::as_density(cli::load_state(opts.state));
  const auto checks = rates::converse_audit(rho, n, seed, dim_x, dim_anc, tolerance);

  if (opts.format == "csv") {
    std::string out = "name,residual,kind,pass\n";
    for (const auto& c : checks)
      out += c.name + "," + io::format_double(c.residual) + "," +
             (c.inequality ? "inequality" : "equality") + "," + (c.pass ? "1" : "0") +
             "\n";
    write_output(out, opts.out);
  } else {
    write_output(io::audit_report_json(checks, n, seed), opts.out);
  }
  return 0;
}

// --- ri --------------------------------------------------------------------------

int cmd_ri(const CommonOpts& opts, const std::string& file, const std::string& cert_path,
           const std::string& bind_spec) {
  json rep;
  rep["file"] = file;

  const std::string text = cli::read_file(file);
  std::istringstream lines(text);
  std::string line;
  json statements = json::array();
  std::vector<ri::RIStatement> parsed;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    try {
      ri::RIStatement s = ri::parse(line);
      parsed.push_back(s);
      statements.push_back({{"line", lineno}, {"canonical", ri::print(s)}});
    } catch (const qhelper::ParseError& e) {
      std::cerr << "error: " << file << " line " << lineno << ": " << e.what() << "\n";
      return kExitBadInput;
    }
  }
  if (parsed.empty())
    throw qhelper::ValidationError("no RI statements in '" + file + "'");
  rep["statements"] = std::move(statements);

  if (!bind_spec.empty()) {
    const io::AnyState any = cli::load_state(bind_spec);
    json evals = json::array();
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      const ri::EvalReport er =
          std::holds_alternative<PureState>(any)
              ? ri::evaluate(parsed[i], std::get<PureState>(any))
              : ri::evaluate(parsed[i], std::get<DensityOperator>(any));
      evals.push_back({{"statement", i},
                       {"lhs", er.lhs.by_resource},
                       {"rhs", er.rhs.by_resource},
                       {"net", er.net}});
    }
    rep["evaluations"] = std::move(evals);
  }

  bool cert_pass = true;
  if (!cert_path.empty()) {
    const io::CertificateSpec spec = io::certificate_from_json(cli::read_file(cert_path));
    const auto samples = io::certificate_samples(spec);
    const ri::CertifyReport cr =
        ri::certify(spec.target, spec.steps, samples, spec.binding, spec.options);
    cert_pass = cr.pass;
    rep["certificate"] = json::parse(io::certify_report_json(cr));
  }

  write_output(rep.dump(2), opts.out);
  return cert_pass ? 0 : 1;
}

// --- presets ------------------------------------------------------------------------

int cmd_presets() {
  std::string out;
  out += "state presets:\n";
  out += "  bell                maximally entangled two-qubit pair\n";
  out += "  isotropic:P         P * Phi + (1 - P) * I/4  (Phi = Bell projector)\n";
  out += "  product:H1,H2       qubit (x) qubit, diagonal spectra with binary\n";
  out += "                      entropies H1 and H2 bits\n";
  out += "  random:DA,DB,SEED   seeded random full-rank source on dims DA x DB\n";
  out += "channel presets (dim comes from the state's B system):\n";
  for (const auto& name : preset_channel_names()) out += "  " + name + "\n";
  out += "builtin resource inequalities (usable as builtin:NAME):\n";
  for (const auto& name : ri::builtin_names())
    out += "  " + name + ": " + ri::print(ri::builtin(name)) + "\n";
  std::cout << out;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rate-region toolkit for quantum source compression with a helper"};
  app.require_subcommand(1);

  CommonOpts entropy_opts;
  std::vector<std::string> entropy_quantities;
  auto* entropy_cmd =
      app.add_subcommand("entropy", "entropy / mutual-information tables");
  add_common(entropy_cmd, entropy_opts);
  entropy_cmd->add_option("quantities", entropy_quantities,
                          "expressions like H(A), H(A|B), I(A;B|C)");

  CommonOpts rates_opts;
  std::string rates_channel;
  auto* rates_cmd = app.add_subcommand(
      "rates", "helper-rate pair (r1, r2), naive rate and consistency residuals");
  add_common(rates_cmd, rates_opts);
  rates_cmd->add_option("--channel", rates_channel, "helper channel spec")->required();

  CommonOpts frontier_opts;
  region::FrontierConfig cfg;
  std::string lambda_csv;
  auto* frontier_cmd =
      app.add_subcommand("frontier", "trace the (r1, r2) Pareto frontier");
  add_common(frontier_cmd, frontier_opts);
  frontier_cmd->add_option("--dim-c", cfg.dim_c, "helper output dimension");
  frontier_cmd->add_option("--dim-e", cfg.dim_e, "helper environment dimension");
  frontier_cmd->add_option("--lambdas", lambda_csv, "comma-separated ascending weights");
  frontier_cmd->add_option("--restarts", cfg.restarts, "random restarts per lambda");
  frontier_cmd->add_option("--seed", cfg.seed, "optimizer seed");
  frontier_cmd->add_option("--max-iters", cfg.max_iters, "iteration cap per restart");
  frontier_cmd->add_option("--step-tol", cfg.step_tol, "terminal pattern step size");
  frontier_cmd->add_option("--obj-tol", cfg.obj_tol, "terminal improvement");

  CommonOpts audit_opts;
  int audit_n = 2;
  std::uint64_t audit_seed = 0;
  int audit_dim_x = 0, audit_dim_anc = 0;
  double audit_tol = 1e-8;
  auto* audit_cmd =
      app.add_subcommand("audit", "numeric audit of the converse's entropy identities");
  add_common(audit_cmd, audit_opts);
  audit_cmd->add_option("--n", audit_n, "number of source copies (1 or 2)");
  audit_cmd->add_option("--seed", audit_seed, "seed for the auxiliary isometry");
  audit_cmd->add_option("--dim-x", audit_dim_x, "auxiliary output dimension");
  audit_cmd->add_option("--dim-anc", audit_dim_anc, "auxiliary ancilla dimension");
  audit_cmd->add_option("--tol", audit_tol, "pass tolerance");

  CommonOpts ri_opts;
  std::string ri_file, ri_cert, ri_bind;
  auto* ri_cmd =
      app.add_subcommand("ri", "parse, evaluate and certify resource inequalities");
  ri_cmd->add_option("file", ri_file, "RI file: one statement per line, # comments")
      ->required();
  ri_cmd->add_option("--certify", ri_cert, "certificate JSON to check");
  ri_cmd->add_option("--bind", ri_bind, "state spec to evaluate statements against");
  ri_cmd->add_option("--out", ri_opts.out, "also write the report to this file");

  auto* presets_cmd = app.add_subcommand("presets", "list presets and conventions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (entropy_cmd->parsed()) return cmd_entropy(entropy_opts, entropy_quantities);
    if (rates_cmd->parsed()) return cmd_rates(rates_opts, rates_channel);
    if (frontier_cmd->parsed()) {
      if (!lambda_csv.empty()) {
        cfg.lambda_grid.clear();
        std::istringstream ss(lambda_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.lambda_grid.push_back(std::stod(tok));
      }
      return cmd_frontier(frontier_opts, cfg);
    }
    if (audit_cmd->parsed())
      return cmd_audit(audit_opts, audit_n, audit_seed, audit_dim_x, audit_dim_anc,
                       audit_tol);
    if (ri_cmd->parsed()) return cmd_ri(ri_opts, ri_file, ri_cert, ri_bind);
    if (presets_cmd->parsed()) return cmd_presets();
  } catch (const qhelper::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return 0;
}
