#include "qhelper/json_io.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "qhelper/errors.hpp"

namespace qhelper::io {

using nlohmann::json;

namespace {

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ValidationError("state json: complex entries must be [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (long long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long long j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, long long rows, long long cols,
                        const char* what) {
  if (!j.is_array() || static_cast<long long>(j.size()) != rows)
    throw ValidationError(std::string(what) + ": expected " + std::to_string(rows) +
                          " rows");
  Matrix m(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<long long>(row.size()) != cols)
      throw ValidationError(std::string(what) + ": expected " + std::to_string(cols) +
                            " columns in row " + std::to_string(i));
    for (long long k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[k]);
  }
  return m;
}

json layout_to_json(const SystemLayout& layout) {
  return {{"labels", layout.labels()}, {"dims", layout.dims()}};
}

SystemLayout layout_from_json(const json& j) {
  if (!j.contains("labels") || !j.contains("dims"))
    throw ValidationError("state json: missing 'labels' or 'dims'");
  return SystemLayout(j.at("labels").get<LabelList>(),
                      j.at("dims").get<std::vector<int>>());
}

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw ValidationError(std::string(what) + ": malformed JSON");
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// --- states ------------------------------------------------------------------

std::string state_to_json(const DensityOperator& rho, int indent) {
  json j = layout_to_json(rho.layout());
  j["matrix"] = matrix_to_json(rho.matrix());
  return j.dump(indent);
}

std::string state_to_json(const PureState& psi, int indent) {
  json j = layout_to_json(psi.layout());
  json vec = json::array();
  for (long long i = 0; i < psi.vector().size(); ++i)
    vec.push_back(complex_to_json(psi.vector()[i]));
  j["vector"] = std::move(vec);
  return j.dump(indent);
}

AnyState state_from_json(const std::string& text) {
  try {
    const json j = parse_json(text, "state json");
    const SystemLayout layout = layout_from_json(j);
    const long long d = layout.total_dim();
    if (j.contains("vector")) {
      const json& jv = j.at("vector");
      if (!jv.is_array() || static_cast<long long>(jv.size()) != d)
        throw ValidationError("state json: vector length does not match dims");
      Vector v(d);
      for (long long i = 0; i < d; ++i) v[i] = complex_from_json(jv[i]);
      return PureState(layout, std::move(v));
    }
    if (j.contains("matrix"))
      return DensityOperator(layout,
                             matrix_from_json(j.at("matrix"), d, d, "state json"));
    throw ValidationError("state json: needs 'matrix' or 'vector'");
  } catch (const json::exception& e) {
    throw ValidationError(std::string("state json: ") + e.what());
  }
}

DensityOperator as_density(const AnyState& s) {
  if (std::holds_alternative<DensityOperator>(s)) return std::get<DensityOperator>(s);
  return std::get<PureState>(s).to_density();
}

// --- channels ------------------------------------------------------------------

StinespringIsometry ChannelSpec::resolve(int dim_in) const {
  if (std::holds_alternative<KrausChannel>(payload_)) {
    const auto& ch = std::get<KrausChannel>(payload_);
    if (ch.dim_in() != dim_in)
      throw DimensionError("channel input dim " + std::to_string(ch.dim_in()) +
                           " does not match system dim " + std::to_string(dim_in));
    return kraus_to_stinespring(ch);
  }
  if (std::holds_alternative<StinespringIsometry>(payload_)) {
    const auto& v = std::get<StinespringIsometry>(payload_);
    if (v.dim_in() != dim_in)
      throw DimensionError("isometry input dim " + std::to_string(v.dim_in()) +
                           " does not match system dim " + std::to_string(dim_in));
    return v;
  }
  if (std::holds_alternative<ChannelParams>(payload_)) {
    const auto& p = std::get<ChannelParams>(payload_);
    if (p.dim_in != dim_in)
      throw DimensionError("params input dim " + std::to_string(p.dim_in) +
                           " does not match system dim " + std::to_string(dim_in));
    return params_to_isometry(p);
  }
  if (std::holds_alternative<ReplacePreset>(payload_)) {
    const auto& r = std::get<ReplacePreset>(payload_);
    return kraus_to_stinespring(replace_channel(dim_in, r.sigma));
  }
  return kraus_to_stinespring(preset_channel(std::get<std::string>(payload_), dim_in));
}

ChannelSpec channel_from_json(const std::string& text) try {
  const json j = parse_json(text, "channel json");
  const std::string kind = j.value("kind", "");
  if (kind == "kraus") {
    const int din = j.at("dim_in").get<int>();
    const int dout = j.at("dim_out").get<int>();
    std::vector<Matrix> ops;
    for (const json& jk : j.at("kraus"))
      ops.push_back(matrix_from_json(jk, dout, din, "channel json"));
    return ChannelSpec(KrausChannel(din, dout, std::move(ops)));
  }
  if (kind == "stinespring") {
    const int din = j.at("dim_in").get<int>();
    const int dout = j.at("dim_out").get<int>();
    const int denv = j.at("dim_env").get<int>();
    Matrix v = matrix_from_json(j.at("v"), static_cast<long long>(dout) * denv, din,
                                "channel json");
    return ChannelSpec(StinespringIsometry(din, dout, denv, std::move(v)));
  }
  if (kind == "params") {
    ChannelParams p;
    p.dim_in = j.at("dim_in").get<int>();
    p.dim_out = j.at("dim_out").get<int>();
    p.dim_env = j.at("dim_env").get<int>();
    p.theta = j.at("theta").get<std::vector<double>>();
    return ChannelSpec(std::move(p));
  }
  if (kind == "preset") {
    const std::string name = j.at("name").get<std::string>();
    if (name == "replace" || name == "trace_and_replace") {
      if (!j.contains("sigma"))
        throw ValidationError("channel json: replace preset needs 'sigma'");
      return ChannelSpec(ChannelSpec::ReplacePreset{
          as_density(state_from_json(j.at("sigma").dump()))});
    }
    return ChannelSpec::preset(name);
  }
  throw ValidationError("channel json: unknown kind '" + kind + "'");
} catch (const json::exception& e) {
  throw ValidationError(std::string("channel json: ") + e.what());
}

std::string channel_to_json(const KrausChannel& ch, int indent) {
  json j{{"kind", "kraus"}, {"dim_in", ch.dim_in()}, {"dim_out", ch.dim_out()}};
  json ops = json::array();
  for (const auto& k : ch.kraus()) ops.push_back(matrix_to_json(k));
  j["kraus"] = std::move(ops);
  return j.dump(indent);
}

std::string channel_to_json(const StinespringIsometry& v, int indent) {
  json j{{"kind", "stinespring"},
         {"dim_in", v.dim_in()},
         {"dim_out", v.dim_out()},
         {"dim_env", v.dim_env()},
         {"v", matrix_to_json(v.v())}};
  return j.dump(indent);
}

std::string channel_to_json(const ChannelParams& p, int indent) {
  json j{{"kind", "params"},
         {"dim_in", p.dim_in},
         {"dim_out", p.dim_out},
         {"dim_env", p.dim_env},
         {"theta", p.theta}};
  return j.dump(indent);
}

// --- frontier -------------------------------------------------------------------

std::string frontier_csv(const region::FrontierResult& result) {
  std::string out = "lambda,r1,r2,converged,iters\n";
  for (const auto& fp : result.points) {
    out += format_double(fp.lambda);
    out += ",";
    out += format_double(fp.point.r1);
    out += ",";
    out += format_double(fp.point.r2);
    out += ",";
    out += fp.converged ? "1" : "0";
    out += ",";
    out += std::to_string(fp.iters);
    out += "\n";
  }
  return out;
}

std::string hull_datafile(const region::FrontierResult& result) {
  std::string out = "# r2 r1\n";
  for (int k = 0; k < result.hull_size(); ++k) {
    const auto& p = result.hull_point(k).point;
    out += format_double(p.r2);
    out += " ";
    out += format_double(p.r1);
    out += "\n";
  }
  return out;
}

namespace {

json frontier_point_json(const region::FrontierPoint& fp) {
  json j{{"lambda", fp.lambda},
         {"r1", fp.point.r1},
         {"r2", fp.point.r2},
         {"converged", fp.converged},
         {"iters", fp.iters}};
  if (fp.point.params) {
    const auto& p = *fp.point.params;
    j["params"] = {{"dim_in", p.dim_in},
                   {"dim_out", p.dim_out},
                   {"dim_env", p.dim_env},
                   {"theta", p.theta}};
  }
  return j;
}

}  // namespace

std::string frontier_json(const region::FrontierConfig& cfg,
                          const region::FrontierResult& result, int indent) {
  json j;
  j["config"] = {{"dim_c", cfg.dim_c},         {"dim_e", cfg.dim_e},
                 {"lambdas", cfg.lambda_grid}, {"restarts", cfg.restarts},
                 {"seed", cfg.seed},           {"max_iters", cfg.max_iters},
                 {"step_tol", cfg.step_tol},   {"obj_tol", cfg.obj_tol}};
  json points = json::array();
  for (const auto& fp : result.points) points.push_back(frontier_point_json(fp));
  j["points"] = std::move(points);
  json hull = json::array();
  for (int k = 0; k < result.hull_size(); ++k) {
    const auto& fp = result.hull_point(k);
    hull.push_back({{"r2", fp.point.r2}, {"r1", fp.point.r1}, {"lambda", fp.lambda}});
  }
  j["hull"] = std::move(hull);
  return j.dump(indent);
}

std::string rates_report_json(const rates::RatePoint& point, double naive,
                              const std::map<std::string, double>& residuals,
                              const rates::DirectPartTotal& direct, int indent) {
  json j{{"r1", point.r1},
         {"r2", point.r2},
         {"naive", naive},
         {"residuals", residuals},
         {"direct_part",
          {{"helper_qubits", direct.helper_qubits},
           {"helper_ebits", direct.helper_ebits},
           {"alice_ebits", direct.alice_ebits}}}};
  return j.dump(indent);
}

std::string audit_report_json(const std::vector<rates::AuditCheck>& checks, int n,
                              std::uint64_t seed, int indent) {
  json rows = json::array();
  bool all = true;
  for (const auto& c : checks) {
    rows.push_back({{"name", c.name},
                    {"residual", c.residual},
                    {"kind", c.inequality ? "inequality" : "equality"},
                    {"pass", c.pass}});
    all = all && c.pass;
  }
  json j{{"n", n}, {"seed", seed}, {"checks", std::move(rows)}, {"pass", all}};
  return j.dump(indent);
}

// --- certificates -----------------------------------------------------------------

namespace {

ri::RIStatement statement_from_field(const json& j, const char* what) {
  if (!j.is_string()) throw ValidationError(std::string(what) + ": expected RI text");
  const std::string text = j.get<std::string>();
  if (text.rfind("builtin:", 0) == 0) return ri::builtin(text.substr(8));
  return ri::parse(text);
}

}  // namespace

CertificateSpec certificate_from_json(const std::string& text) try {
  const json j = parse_json(text, "certificate json");
  CertificateSpec spec;
  if (!j.contains("target") || !j.contains("steps"))
    throw ValidationError("certificate json: needs 'target' and 'steps'");
  spec.target = statement_from_field(j.at("target"), "certificate target");
  for (const json& js : j.at("steps"))
    spec.steps.push_back(statement_from_field(js, "certificate step"));
  if (spec.steps.empty()) throw ValidationError("certificate json: empty steps");
  if (j.contains("bindings"))
    for (const auto& [k, v] : j.at("bindings").items())
      spec.binding.map[k] = v.get<LabelList>();
  spec.options.classical_free = j.value("classical_free", true);
  spec.options.tolerance = j.value("tolerance", spec.options.tolerance);
  if (j.contains("samples")) {
    const json& js = j.at("samples");
    spec.sample_count = js.value("count", spec.sample_count);
    if (js.contains("labels")) spec.sample_labels = js.at("labels").get<LabelList>();
    if (js.contains("dims")) spec.sample_dims = js.at("dims").get<std::vector<int>>();
    spec.seed = js.value("seed", spec.seed);
  }
  if (spec.sample_labels.size() != spec.sample_dims.size())
    throw ValidationError("certificate json: sample labels/dims length mismatch");
  if (spec.sample_count < 1)
    throw ValidationError("certificate json: sample count must be >= 1");
  return spec;
} catch (const json::exception& e) {
  throw ValidationError(std::string("certificate json: ") + e.what());
}

std::vector<PureState> certificate_samples(const CertificateSpec& spec) {
  const SystemLayout layout(spec.sample_labels, spec.sample_dims);
  std::vector<PureState> out;
  out.reserve(spec.sample_count);
  for (int i = 0; i < spec.sample_count; ++i) {
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(i)));
    out.push_back(random_pure(layout, rng));
  }
  return out;
}

std::string certify_report_json(const ri::CertifyReport& report, int indent) {
  json j{{"pass", report.pass},
         {"max_residual", report.max_residual},
         {"residuals", report.residuals},
         {"derived", report.derived},
         {"samples", report.samples}};
  return j.dump(indent);
}

}  // namespace qhelper::io
