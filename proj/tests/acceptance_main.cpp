// Acceptance suite: one criterion per function, one PASS/FAIL line each,
// nonzero exit when anything fails. Tolerances are pinned here, not
// configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "qhelper/errors.hpp"
#include "qhelper/json_io.hpp"

using namespace qhelper;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<bool(std::string&)> run;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(double v) { return io::format_double(v); }

// ---------------------------------------------------------------------------
// 1. Entropy suite: strong subadditivity, Araki-Lieb, purity symmetry and
//    entropy bounds on 200 random states, all within 1e-8, under 10 s.
bool criterion1(std::string& detail) {
  const double t0 = now_seconds();
  double worst = 0.0;
  const std::vector<std::vector<int>> shapes = {{2}, {2, 2}, {2, 2, 2}};
  for (int s = 0; s < 200; ++s) {
    const auto& dims = shapes[s % shapes.size()];
    LabelList labels;
    for (std::size_t i = 0; i < dims.size(); ++i)
      labels.push_back(std::string(1, static_cast<char>('A' + i)));
    Rng rng(mix_seed(0xacce01, s));
    const DensityOperator rho = random_density(SystemLayout(labels, dims), rng);

    // entropy bounds on every nonempty subset
    for (std::size_t mask = 1; mask < (1u << labels.size()); ++mask) {
      LabelList sub;
      for (std::size_t b = 0; b < labels.size(); ++b)
        if (mask & (1u << b)) sub.push_back(labels[b]);
      const double h = entropy(rho, sub);
      const double cap = std::log2(static_cast<double>(rho.layout().dim_of_set(sub)));
      worst = std::max({worst, -h, h - cap});
    }
    // strong subadditivity / nonnegative conditional mutual information
    if (labels.size() == 3)
      worst = std::max(worst, -cond_mutual_info(rho, {"A"}, {"B"}, {"C"}));
    if (labels.size() == 2) worst = std::max(worst, -mutual_info(rho, {"A"}, {"B"}));
    // Araki-Lieb on every bipartition
    if (labels.size() >= 2) {
      for (std::size_t mask = 1; mask + 1 < (1u << labels.size()); ++mask) {
        LabelList x;
        for (std::size_t b = 0; b < labels.size(); ++b)
          if (mask & (1u << b)) x.push_back(labels[b]);
        const LabelList y = rho.layout().complement(x);
        worst = std::max(worst,
                         std::abs(entropy(rho, x) - entropy(rho, y)) - entropy(rho));
      }
    }
    // purity symmetry on the purification
    const PureState psi = purify(rho, "Z");
    const auto& pl = psi.layout().labels();
    for (std::size_t mask = 1; mask + 1 < (1u << pl.size()); ++mask) {
      LabelList x;
      for (std::size_t b = 0; b < pl.size(); ++b)
        if (mask & (1u << b)) x.push_back(pl[b]);
      worst = std::max(worst, std::abs(entropy(psi, x) -
                                       entropy(psi, psi.layout().complement(x))));
    }
  }
  const double elapsed = now_seconds() - t0;
  detail = "worst violation " + fmt(worst) + ", " + fmt(elapsed) + " s";
  return worst <= 1e-8 && elapsed < 10.0;
}

// ---------------------------------------------------------------------------
// 2. Rate-pair anchor points within 1e-9.
bool criterion2(std::string& detail) {
  using namespace rates;
  double worst = 0.0;

  const auto ident = kraus_to_stinespring(identity_channel(2));
  const auto disc = kraus_to_stinespring(discard_channel(2));

  const RatePoint bell = rate_pair(
      build_phi(HelperInstance(bell_pair().to_density(), ident)));
  worst = std::max({worst, std::abs(bell.r1 + 1.0), std::abs(bell.r2 - 1.0)});

  Rng rng(mix_seed(0xacce02, 0));
  const DensityOperator rho = random_density(SystemLayout({"A", "B"}, {2, 2}), rng);
  const RatePoint dp = rate_pair(build_phi(HelperInstance(rho, disc)));
  worst = std::max({worst, std::abs(dp.r1 - entropy(rho, {"A"})), std::abs(dp.r2)});

  const DensityOperator prod = product_state(0.7, 0.4);
  const RatePoint pp = rate_pair(build_phi(HelperInstance(prod, ident)));
  worst = std::max({worst, std::abs(pp.r1 - 0.7), std::abs(pp.r2 - 0.4)});

  detail = "worst anchor deviation " + fmt(worst);
  return worst <= 1e-9;
}

// Shared instance sampler for criteria 3 and 4: rank-2 sources so the
// whole phi state lives on dims (2, 2, 2, 2).
std::vector<rates::HelperInstance> sample_instances() {
  std::vector<rates::HelperInstance> out;
  for (int s = 0; s < 100; ++s) {
    Rng rng(mix_seed(0xacce03, s));
    DensityOperator rho = random_source(2, 2, 2, rng);
    out.emplace_back(std::move(rho), random_isometry(2, 2, 2, mix_seed(0xacce04, s)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 3. H(C) = I(C;E)/2 + I(C;RA)/2 on 100 random instances.
bool criterion3(std::string& detail) {
  double worst = 0.0;
  for (const auto& inst : sample_instances())
    worst = std::max(worst, rates::decomposition_check(rates::build_phi(inst)));
  detail = "max residual " + fmt(worst);
  return worst <= 1e-8;
}

// ---------------------------------------------------------------------------
// 4. Direct-part totals match rate_pair on the same instances.
bool criterion4(std::string& detail) {
  double worst = 0.0;
  for (const auto& inst : sample_instances()) {
    const rates::GlobalPureState g = rates::build_phi(inst);
    const rates::RatePoint p = rates::rate_pair(g);
    const rates::DirectPartTotal d = rates::direct_part_total(g);
    worst = std::max({worst, std::abs(d.helper_qubits - p.r2),
                      std::abs(d.alice_ebits - p.r1)});
  }
  detail = "max deviation " + fmt(worst);
  return worst <= 1e-8;
}

// ---------------------------------------------------------------------------
// 5. Converse audit at n = 2 on 20 random 2-qubit sources, under 60 s.
bool criterion5(std::string& detail) {
  const double t0 = now_seconds();
  double worst = 0.0;
  bool all_pass = true;
  for (int s = 0; s < 20; ++s) {
    Rng rng(mix_seed(0xacce05, s));
    const DensityOperator rho = random_density(SystemLayout({"A", "B"}, {2, 2}), rng);
    const auto checks = rates::converse_audit(rho, 2, mix_seed(0xacce06, s));
    for (const auto& c : checks) {
      all_pass = all_pass && c.pass;
      worst = std::max(worst, c.residual);
    }
  }
  const double elapsed = now_seconds() - t0;
  detail = "max residual " + fmt(worst) + ", " + fmt(elapsed) + " s";
  return all_pass && worst <= 1e-8 && elapsed < 60.0;
}

// ---------------------------------------------------------------------------
// 6. Bell frontier endpoints within 1e-3, hull monotone, under 5 min.
bool criterion6(std::string& detail) {
  const double t0 = now_seconds();
  region::FrontierConfig cfg;  // default 7-point grid, dim_C = dim_E = 2
  cfg.restarts = 8;
  cfg.seed = 20240801;
  const region::FrontierResult result =
      region::trace_frontier(bell_pair().to_density(), cfg);
  const double elapsed = now_seconds() - t0;

  if (result.hull_size() < 2) {
    detail = "degenerate hull";
    return false;
  }
  const auto& lo = result.hull_point(0).point;
  const auto& hi = result.hull_point(result.hull_size() - 1).point;
  const double dev = std::max({std::abs(lo.r1 - 1.0), std::abs(lo.r2),
                               std::abs(hi.r1 + 1.0), std::abs(hi.r2 - 1.0)});
  bool monotone = true;
  for (int k = 1; k < result.hull_size(); ++k)
    monotone = monotone && result.hull_point(k).point.r1 <
                               result.hull_point(k - 1).point.r1 + 1e-8;
  detail = "endpoint deviation " + fmt(dev) + ", " + fmt(elapsed) + " s";
  return dev <= 1e-3 && monotone && elapsed < 300.0;
}

// ---------------------------------------------------------------------------
// 7. Frontier hull weakly dominates the preset-channel oracle sweep on the
//    isotropic(0.75) source.
bool criterion7(std::string& detail) {
  const DensityOperator rho = isotropic_state(0.75);

  std::vector<std::pair<std::string, KrausChannel>> presets;
  presets.emplace_back("identity", identity_channel(2));
  presets.emplace_back("discard", discard_channel(2));
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    presets.emplace_back("dephasing:" + fmt(p), dephasing_channel(p));
    presets.emplace_back("depolarizing:" + fmt(p), depolarizing_channel(p));
  }

  region::FrontierConfig cfg;
  cfg.dim_c = 2;
  cfg.dim_e = 4;  // large enough to contain every preset dilation
  cfg.restarts = 8;
  cfg.seed = 20240802;
  // The frontier is strongly curved for lambda in [0.75, 1.5]; hull chords
  // between sparse tangent points would overshoot the dominance slack, so
  // that band gets a fine grid.
  cfg.lambda_grid = {0.0, 0.25, 0.5};
  for (double l = 0.75; l <= 1.5 + 1e-12; l += 0.03125) cfg.lambda_grid.push_back(l);
  cfg.lambda_grid.insert(cfg.lambda_grid.end(), {2.0, 4.0, 64.0});
  const region::FrontierResult result = region::trace_frontier(rho, cfg);

  double worst_gap = -1e9;
  std::string worst_name;
  for (const auto& [name, ch] : presets) {
    const rates::RatePoint q = rates::rate_pair(
        rates::build_phi(rates::HelperInstance(rho, kraus_to_stinespring(ch))));
    const double gap = region::hull_r1_at(result, q.r2) - q.r1;
    if (gap > worst_gap) {
      worst_gap = gap;
      worst_name = name;
    }
  }
  detail = "worst dominance gap " + fmt(worst_gap) + " at " + worst_name;
  return worst_gap <= 1e-3;
}

// ---------------------------------------------------------------------------
// 8. Built-in certificate passes; a corrupted coefficient fails.
bool criterion8(std::string& detail) {
  std::vector<PureState> states;
  const SystemLayout layout({"A", "B", "R"}, {2, 2, 2});
  for (int i = 0; i < 50; ++i) {
    Rng rng(mix_seed(0xacce08, i));
    states.push_back(random_pure(layout, rng));
  }
  const ri::CertifyReport good = ri::certify(
      ri::builtin("merging"), {ri::builtin("teleportation"), ri::builtin("fqsw")},
      states);
  const ri::RIStatement corrupted = ri::parse(
      "<psi_{A|B|R}> + 0.4 I(A;R) [q->q] >= 0.5 I(A;B) [qq] + <psi_{|AB|R}>");
  const ri::CertifyReport bad = ri::certify(
      ri::builtin("merging"), {ri::builtin("teleportation"), corrupted}, states);
  detail = "good residual " + fmt(good.max_residual) + ", corrupted residual " +
           fmt(bad.max_residual);
  return good.pass && good.max_residual <= 1e-8 && !bad.pass &&
         bad.max_residual > 1e-2;
}

// ---------------------------------------------------------------------------
// 9. Parser corpus: the five printed RIs round-trip; 20 malformed inputs
//    produce positioned errors and CLI exit code 2.
int run_command(const std::string& cmd) {
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

bool criterion9(std::string& detail) {
  const std::vector<std::string> corpus = {
      "H(B) [q->q] >= <rho_B>",
      "<N> + inf [qq] >= Q(N) [q->q]",
      "<psi_{A|B|R}> + I(A;R) [c->c] + H(A|B) [qq] >= <psi_{|AB|R}>",
      "<psi_{A|B|R}> + 0.5 I(A;R) [q->q] >= 0.5 I(A;B) [qq] + <psi_{|AB|R}>",
      "0.5 I(R;B) [q->q] + 0.5 I(E;B) [qq] >= <N:rho_A>",
  };
  for (const auto& text : corpus) {
    const ri::RIStatement s = ri::parse(text);
    if (!ri::structurally_equal(s, ri::parse(ri::print(s)))) {
      detail = "round trip failed for: " + text;
      return false;
    }
  }

  const std::vector<std::string> malformed = {
      "",
      ">= [qq]",
      "[qq] >=",
      "[qq] >= >= [qq]",
      "H(B [q->q] >= <rho_B>",
      "H() [q->q] >= <rho_B>",
      "H(b) [q->q] >= <rho_B>",
      "I(A) [qq] >= 0",
      "I(A;B|) [qq] >= 0",
      "[zz] >= [qq]",
      "[qq >= [qq]",
      "<> >= [qq]",
      "<psi >= [qq]",
      "2 & [qq] >= 0",
      "(H(A) [qq] >= 0",
      "H(A)) [qq] >= 0",
      "0.5 >= [qq]",
      "H(A) H(B) extra >= [qq]",
      "[qq] + >= [qq]",
      "1/0 [qq] >= 0",
  };
  const fs::path dir = fs::temp_directory_path() / "qhelper_acceptance";
  fs::create_directories(dir);
  int positioned = 0;
  for (const auto& text : malformed) {
    try {
      ri::parse(text);
      detail = "malformed input parsed: '" + text + "'";
      return false;
    } catch (const ParseError&) {
      ++positioned;
    }
  }
  int exit2 = 0;
  for (std::size_t i = 0; i < malformed.size(); ++i) {
    const fs::path f = dir / ("bad_" + std::to_string(i) + ".ri");
    std::ofstream(f) << malformed[i] << "\n";
    const int code = run_command(std::string(QHELPER_CLI_PATH) + " ri " + f.string() +
                                 " > /dev/null 2> /dev/null");
    if (code == 2) ++exit2;
  }
  detail = "5/5 round trips, " + std::to_string(positioned) + "/20 positioned errors, " +
           std::to_string(exit2) + "/20 exit code 2";
  return positioned == 20 && exit2 == 20;
}

// ---------------------------------------------------------------------------
// 10. Repeated frontier runs with identical flags emit byte-identical files.
bool criterion10(std::string& detail) {
  const fs::path dir = fs::temp_directory_path() / "qhelper_acceptance";
  fs::create_directories(dir);
  const fs::path out = dir / "det.csv";
  const std::string flags = std::string(QHELPER_CLI_PATH) +
                            " frontier --state bell --format csv --lambdas 0,1,64 "
                            "--restarts 3 --max-iters 150 --seed 99 --out " +
                            out.string() + " > /dev/null 2> /dev/null";
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  if (run_command(flags) != 0) {
    detail = "first run failed";
    return false;
  }
  const std::string a = slurp(out), ah = slurp(out.string() + ".hull.dat");
  fs::remove(out);
  fs::remove(out.string() + ".hull.dat");
  if (run_command(flags) != 0) {
    detail = "second run failed";
    return false;
  }
  const std::string b = slurp(out), bh = slurp(out.string() + ".hull.dat");
  detail = a == b && ah == bh ? "outputs byte-identical" : "outputs differ";
  return a == b && ah == bh && !a.empty();
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "entropy suite on 200 random states", criterion1},
      {2, "rate-pair anchor points", criterion2},
      {3, "helper-output entropy decomposition identity", criterion3},
      {4, "direct-part consistency", criterion4},
      {5, "converse audit at n = 2", criterion5},
      {6, "Bell frontier endpoints", criterion6},
      {7, "frontier dominance over preset sweep", criterion7},
      {8, "resource-inequality certificate", criterion8},
      {9, "parser corpus and positioned errors", criterion9},
      {10, "frontier output determinism", criterion10},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title
              << " (" << detail << ")\n";
    std::cout.flush();
    if (!ok) ++failures;
  }
  return failures;
}
