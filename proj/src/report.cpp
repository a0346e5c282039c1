#include "qepi/report.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qepi/liftproof.hpp"

namespace qepi {

using nlohmann::json;

std::uint64_t fnv1a_hash(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string StateSpec::label() const {
  std::ostringstream os;
  switch (family) {
    case Family::vacuum: return "vacuum";
    case Family::fock: os << "fock(" << n << ")"; break;
    case Family::thermal: os << "thermal(" << nbar << ")"; break;
    case Family::coherent: os << "coherent(" << alpha.real() << (alpha.imag() < 0 ? "" : "+") << alpha.imag() << "i)"; break;
    case Family::cat: os << "cat(" << alpha.real() << (alpha.imag() < 0 ? "" : "+") << alpha.imag() << "i)"; break;
    case Family::fock_mixture: os << "fock_mixture(" << weights.size() << ")"; break;
    case Family::random_full_support: os << "random(" << seed_offset << ")"; break;
  }
  return os.str();
}

DensityMatrix StateSpec::build(int cutoff, std::uint64_t base_seed) const {
  switch (family) {
    case Family::vacuum: return vacuum_state(cutoff);
    case Family::fock: return fock_state(n, cutoff);
    case Family::thermal: return thermal_state(nbar, cutoff);
    case Family::coherent: return coherent_state(alpha, cutoff);
    case Family::cat: return cat_state(alpha, cutoff);
    case Family::fock_mixture: return fock_mixture_state(weights, cutoff);
    case Family::random_full_support:
      return random_full_support_state(base_seed + seed_offset, cutoff);
  }
  throw Error(ErrorCode::InvalidParameter, "StateSpec: unknown family");
}

std::string ClassicalSpec::label() const {
  std::ostringstream os;
  if (kind == Kind::gaussian) os << "gaussian(h=" << h << ")";
  else os << "two_point(" << x << ")";
  return os.str();
}

ClassicalRV ClassicalSpec::build() const {
  if (kind == Kind::gaussian) return gaussian_rv(h);
  return two_point_rv(Complex(x, 0.0));
}

const std::vector<std::pair<std::string, std::string>> kKnownChecks = {
    {"epi", "entropy power inequalities (basic and generalized) and the entropy-sum form"},
    {"monotonicity", "entropy monotonicity of symmetric self-convolutions"},
    {"debruijn", "de Bruijn identity: heat-flow entropy derivative vs KMB Fisher information"},
    {"fisher-stam", "Fisher-information Stam inequality with optimal and uniform weights"},
    {"qc-epi", "quantum-classical entropy power and Fisher inequalities"},
    {"liftproof", "lifting-map identities and the projector decomposition"},
    {"all", "every check above"},
};

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) { ok = true; break; }
    if (!ok)
      throw Error(ErrorCode::ConfigInvalid,
                  "config: unknown key '" + it.key() + "' in " + where);
  }
}

StateSpec parse_state(const json& j) {
  reject_unknown(j, {"family", "n", "nbar", "alpha_re", "alpha_im", "weights",
                     "seed_offset"},
                 "states[]");
  StateSpec s;
  std::string fam = j.at("family").get<std::string>();
  if (fam == "vacuum") s.family = StateSpec::Family::vacuum;
  else if (fam == "fock") { s.family = StateSpec::Family::fock; s.n = j.at("n").get<int>(); }
  else if (fam == "thermal") { s.family = StateSpec::Family::thermal; s.nbar = j.at("nbar").get<double>(); }
  else if (fam == "coherent" || fam == "cat") {
    s.family = fam == "coherent" ? StateSpec::Family::coherent : StateSpec::Family::cat;
    s.alpha = Complex(j.at("alpha_re").get<double>(),
                      j.value("alpha_im", 0.0));
  } else if (fam == "fock_mixture") {
    s.family = StateSpec::Family::fock_mixture;
    s.weights = j.at("weights").get<std::vector<double>>();
  } else if (fam == "random") {
    s.family = StateSpec::Family::random_full_support;
    s.seed_offset = j.value("seed_offset", 0);
  } else {
    throw Error(ErrorCode::ConfigInvalid, "config: unknown state family '" + fam + "'");
  }
  return s;
}

ClassicalSpec parse_classical(const json& j) {
  reject_unknown(j, {"kind", "h", "x"}, "classical[]");
  ClassicalSpec c;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") { c.kind = ClassicalSpec::Kind::gaussian; c.h = j.value("h", 1.0); }
  else if (kind == "two_point") { c.kind = ClassicalSpec::Kind::two_point; c.x = j.value("x", 0.5); }
  else throw Error(ErrorCode::ConfigInvalid, "config: unknown classical kind '" + kind + "'");
  return c;
}

json state_to_json(const StateSpec& s) {
  json j;
  switch (s.family) {
    case StateSpec::Family::vacuum: j["family"] = "vacuum"; break;
    case StateSpec::Family::fock: j["family"] = "fock"; j["n"] = s.n; break;
    case StateSpec::Family::thermal: j["family"] = "thermal"; j["nbar"] = s.nbar; break;
    case StateSpec::Family::coherent:
      j["family"] = "coherent"; j["alpha_re"] = s.alpha.real(); j["alpha_im"] = s.alpha.imag();
      break;
    case StateSpec::Family::cat:
      j["family"] = "cat"; j["alpha_re"] = s.alpha.real(); j["alpha_im"] = s.alpha.imag();
      break;
    case StateSpec::Family::fock_mixture:
      j["family"] = "fock_mixture"; j["weights"] = s.weights; break;
    case StateSpec::Family::random_full_support:
      j["family"] = "random"; j["seed_offset"] = s.seed_offset; break;
  }
  return j;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("config: parse error: ") + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorCode::ConfigInvalid, "config: root must be an object");
  reject_unknown(j,
                 {"schema_version", "cutoff", "lift_cutoff", "seed", "checks",
                  "states", "classical", "collections", "eta_grid", "t_grid",
                  "n_max", "tolerances", "quadrature", "gates", "max_rows",
                  "out_dir"},
                 "root");
  RunConfig c;
  c.schema_version = j.value("schema_version", 0);
  if (c.schema_version != 1)
    throw Error(ErrorCode::ConfigInvalid, "config: schema_version must be 1");
  c.cutoff = j.value("cutoff", 30);
  if (c.cutoff < 2 || c.cutoff > 200)
    throw Error(ErrorCode::ConfigInvalid, "config: cutoff outside [2,200]");
  c.lift_cutoff = j.value("lift_cutoff", 12);
  c.seed = j.value("seed", 1);
  if (!j.contains("checks") || !j["checks"].is_array() || j["checks"].empty())
    throw Error(ErrorCode::ConfigInvalid, "config: empty check list");
  for (const auto& ck : j["checks"]) {
    std::string name = ck.get<std::string>();
    bool known = false;
    for (const auto& [k, desc] : kKnownChecks)
      if (k == name) { known = true; break; }
    if (!known)
      throw Error(ErrorCode::ConfigInvalid, "config: unknown check '" + name + "'");
    c.checks.push_back(name);
  }
  if (j.contains("states"))
    for (const auto& js : j["states"]) c.states.push_back(parse_state(js));
  if (c.states.empty())
    throw Error(ErrorCode::ConfigInvalid, "config: at least one state required");
  if (j.contains("classical"))
    for (const auto& jc : j["classical"]) c.classical.push_back(parse_classical(jc));
  if (j.contains("collections")) {
    c.collections.clear();
    for (const auto& col : j["collections"]) {
      std::string name = col.get<std::string>();
      if (name != "singletons" && name != "pairs" && name != "full")
        throw Error(ErrorCode::ConfigInvalid, "config: unknown collection '" + name + "'");
      c.collections.push_back(name);
    }
  }
  if (j.contains("eta_grid")) c.eta_grid = j["eta_grid"].get<std::vector<double>>();
  if (j.contains("t_grid")) c.t_grid = j["t_grid"].get<std::vector<double>>();
  c.n_max = j.value("n_max", 4);
  if (j.contains("tolerances")) {
    reject_unknown(j["tolerances"], {"entropy", "fisher", "residual"}, "tolerances");
    c.tol_entropy = j["tolerances"].value("entropy", c.tol_entropy);
    c.tol_fisher = j["tolerances"].value("fisher", c.tol_fisher);
    c.tol_residual = j["tolerances"].value("residual", c.tol_residual);
  }
  if (j.contains("quadrature")) {
    reject_unknown(j["quadrature"], {"gauss_hermite_nodes", "lift_nodes", "max_terms"}, "quadrature");
    c.gh_nodes = j["quadrature"].value("gauss_hermite_nodes", c.gh_nodes);
    c.lift_nodes = j["quadrature"].value("lift_nodes", c.lift_nodes);
    c.max_terms = j["quadrature"].value("max_terms", c.max_terms);
  }
  if (j.contains("gates")) {
    reject_unknown(j["gates"], {"trace_deficit", "quad_error"}, "gates");
    c.gate_trace_deficit = j["gates"].value("trace_deficit", c.gate_trace_deficit);
    c.gate_quad_error = j["gates"].value("quad_error", c.gate_quad_error);
  }
  c.max_rows = j.value("max_rows", 10000);
  c.out_dir = j.value("out_dir", c.out_dir);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string RunConfig::canonical_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["cutoff"] = cutoff;
  j["lift_cutoff"] = lift_cutoff;
  j["seed"] = seed;
  j["checks"] = checks;
  json states_j = json::array();
  for (const auto& s : states) states_j.push_back(state_to_json(s));
  j["states"] = states_j;
  json cls = json::array();
  for (const auto& c : classical) {
    json e;
    e["kind"] = c.kind == ClassicalSpec::Kind::gaussian ? "gaussian" : "two_point";
    e["h"] = c.h;
    e["x"] = c.x;
    cls.push_back(e);
  }
  j["classical"] = cls;
  j["collections"] = collections;
  j["eta_grid"] = eta_grid;
  j["t_grid"] = t_grid;
  j["n_max"] = n_max;
  j["tolerances"] = {{"entropy", tol_entropy}, {"fisher", tol_fisher}, {"residual", tol_residual}};
  j["quadrature"] = {{"gauss_hermite_nodes", gh_nodes}, {"lift_nodes", lift_nodes}, {"max_terms", max_terms}};
  j["gates"] = {{"trace_deficit", gate_trace_deficit}, {"quad_error", gate_quad_error}};
  j["max_rows"] = max_rows;
  j["out_dir"] = out_dir;
  return j.dump();
}

int VerificationReport::count(const std::string& status) const {
  int c = 0;
  for (const auto& r : rows)
    if (r.status == status) ++c;
  return c;
}

std::string VerificationReport::to_json(bool include_wall_time) const {
  json j;
  j["schema_version"] = 1;
  j["config_hash"] = config_hash;
  j["summary"] = {{"pass", count("pass")},
                  {"fail", count("fail")},
                  {"skip", count("skip")},
                  {"total", static_cast<int>(rows.size())}};
  json arr = json::array();
  for (const auto& r : rows) {
    json e;
    e["name"] = r.check;
    e["family"] = r.family;
    e["parameters"] = r.params;
    e["n"] = r.n;
    e["cutoff"] = r.cutoff;
    e["lhs"] = r.lhs;
    e["rhs"] = r.rhs;
    e["margin"] = r.margin;
    e["tolerance"] = r.tolerance;
    e["pass"] = r.status;
    e["trace_deficit"] = r.trace_deficit;
    e["quadrature_error"] = r.quad_error;
    if (include_wall_time) e["wall_time"] = r.wall_time;
    if (!r.note.empty()) e["note"] = r.note;
    arr.push_back(e);
  }
  j["checks"] = arr;
  return j.dump(2) + "\n";
}

std::string VerificationReport::to_csv() const {
  std::ostringstream os;
  os << "check,family,params,n,cutoff,lhs,rhs,margin,tolerance,pass,"
        "trace_deficit,quad_err\n";
  os.precision(17);
  for (const auto& r : rows) {
    os << r.check << ',' << r.family << ',' << r.params << ',' << r.n << ','
       << r.cutoff << ',' << r.lhs << ',' << r.rhs << ',' << r.margin << ','
       << r.tolerance << ',' << r.status << ',' << r.trace_deficit << ','
       << r.quad_error << '\n';
  }
  return os.str();
}

namespace {

struct Task {
  std::function<std::vector<CheckRow>()> run;  // tasks run in expansion order
};

bool has_check(const RunConfig& c, const std::string& name) {
  for (const auto& ck : c.checks)
    if (ck == name || ck == "all") return true;
  return false;
}

SubsetCollection collection_by_name(const std::string& name, int n) {
  if (name == "singletons") return SubsetCollection::singletons(n);
  if (name == "pairs") return SubsetCollection::all_pairs(n);
  return SubsetCollection::full_set(n);
}

CheckRow row_from_margin(const InequalityMargin& m, std::string family,
                         std::string params, int n, int cutoff) {
  CheckRow r;
  r.check = m.name;
  r.family = std::move(family);
  r.params = std::move(params);
  r.n = n;
  r.cutoff = cutoff;
  r.lhs = m.lhs;
  r.rhs = m.rhs;
  r.margin = m.margin;
  r.tolerance = m.tolerance;
  r.status = m.pass ? "pass" : "fail";
  r.trace_deficit = m.trace_deficit;
  r.quad_error = m.quad_error;
  return r;
}

CheckRow skip_row(std::string check, std::string family, std::string params,
                  int cutoff, const std::string& why) {
  CheckRow r;
  r.check = std::move(check);
  r.family = std::move(family);
  r.params = std::move(params);
  r.cutoff = cutoff;
  r.status = "skip";
  r.note = why;
  return r;
}

std::vector<Task> expand_tasks(const RunConfig& c) {
  std::vector<Task> tasks;
  const int N = c.cutoff;
  QuadratureBudget budget{c.gh_nodes, c.max_terms};

  auto guarded = [](std::string check, std::string family, std::string params,
                    int cutoff, std::function<std::vector<CheckRow>()> body) {
    return [=]() -> std::vector<CheckRow> {
      try {
        return body();
      } catch (const Error& e) {
        return {skip_row(check, family, params, cutoff, e.what())};
      }
    };
  };

  if (has_check(c, "epi")) {
    for (size_t i = 0; i + 1 < c.states.size(); ++i)
      for (size_t j = i + 1; j < c.states.size(); ++j)
        for (double eta : c.eta_grid) {
          std::string family = c.states[i].label() + "+" + c.states[j].label();
          std::string params = "eta=" + std::to_string(eta);
          StateSpec a = c.states[i], b = c.states[j];
          auto seed = c.seed;
          double tol = c.tol_entropy;
          tasks.push_back(
              {guarded("epi", family, params, N, [=]() {
                 auto rows = epi_basic(a.build(N, seed), b.build(N, seed), eta, tol);
                 std::vector<CheckRow> out;
                 for (const auto& m : rows)
                   out.push_back(row_from_margin(m, family, params, 2, N));
                 return out;
               })});
        }
    // Generalized EPI and the entropy-sum form, only when collections are
    // configured explicitly.
    if (c.states.size() >= 2 && !c.collections.empty()) {
      for (const auto& col : c.collections) {
        int n = static_cast<int>(c.states.size());
        if (col == "pairs" && n < 3) continue;
        std::string family = "joint(" + std::to_string(n) + ")";
        auto states = c.states;
        auto seed = c.seed;
        double tol = c.tol_entropy;
        tasks.push_back(
            {guarded("subset_epi", family, col, N, [=]() {
               std::vector<DensityMatrix> built;
               for (const auto& s : states) built.push_back(s.build(N, seed));
               SubsetCollection C = collection_by_name(col, n);
               auto m = subset_epi_check(built, C, tol);
               std::vector<CheckRow> out;
               out.push_back(row_from_margin(m, family, col, n, N));
               WeightDistribution uni;
               uni.mu.assign(C.elements.size(), 1.0 / C.elements.size());
               bool ok = true;
               for (double w : uni.mu)
                 if (C.r() * w > 1.0) ok = false;
               if (ok) {
                 auto m2 = entropy_sum_form_check(built, C, uni, tol);
                 out.push_back(row_from_margin(m2, family, col + ",mu=uniform", n, N));
               }
               return out;
             })});
      }
    }
  }

  if (has_check(c, "monotonicity")) {
    for (const auto& s : c.states) {
      std::string family = s.label();
      auto seed = c.seed;
      int n_max = c.n_max;
      double tol = c.tol_entropy;
      tasks.push_back(
          {guarded("guha", family, "n_max=" + std::to_string(n_max), N, [=]() {
             auto ms = guha_monotonicity(s.build(N, seed), n_max, tol);
             std::vector<CheckRow> out;
             int k = 2;
             for (const auto& m : ms)
               out.push_back(row_from_margin(m, family, "n=" + std::to_string(k++), n_max, N));
             return out;
           })});
    }
  }

  if (has_check(c, "debruijn")) {
    for (const auto& s : c.states) {
      std::string family = s.label();
      auto seed = c.seed;
      double tol = c.tol_residual;
      tasks.push_back(
          {guarded("debruijn", family, "dt=1e-3", N, [=]() {
             auto r = debruijn_check(s.build(N, seed));
             CheckRow row;
             row.check = "debruijn";
             row.family = family;
             row.params = "dt=1e-3";
             row.n = 1;
             row.cutoff = N;
             row.lhs = r.derivative;
             row.rhs = r.fisher_value;
             row.margin = tol - r.residual_rel;
             row.tolerance = 0.0;
             row.status = r.residual_rel <= tol ? "pass" : "fail";
             return std::vector<CheckRow>{row};
           })});
    }
  }

  if (has_check(c, "fisher-stam")) {
    std::vector<std::string> cols = c.collections;
    if (cols.empty()) cols.push_back("singletons");
    for (const auto& col : cols) {
      int n = static_cast<int>(c.states.size());
      if (n < 2) continue;
      if (col == "pairs" && n < 3) continue;
      std::string family = "joint(" + std::to_string(n) + ")";
      auto states = c.states;
      auto seed = c.seed;
      double tol = c.tol_fisher;
      tasks.push_back(
          {guarded("fisher_stam", family, col, N, [=]() {
             std::vector<DensityMatrix> built;
             for (const auto& s : states) built.push_back(s.build(N, seed));
             SubsetCollection C = collection_by_name(col, n);
             std::vector<CheckRow> out;
             auto m_opt = fisher_stam_check(built, C, std::nullopt, tol);
             out.push_back(row_from_margin(m_opt, family, col + ",mu=optimal", n, N));
             WeightDistribution uni;
             uni.mu.assign(C.elements.size(), 1.0 / C.elements.size());
             auto m_uni = fisher_stam_check(built, C, uni, tol);
             out.push_back(row_from_margin(m_uni, family, col + ",mu=uniform", n, N));
             return out;
           })});
    }
  }

  if (has_check(c, "qc-epi") && !c.classical.empty()) {
    const int n = static_cast<int>(c.states.size());
    if (n >= 1) {
      for (const auto& cl : c.classical) {
        for (double t : c.t_grid) {
          std::string family = "joint(" + std::to_string(n) + ")*" + cl.label();
          std::string params = "paired-singletons,t=" + std::to_string(t);
          auto states = c.states;
          auto seed = c.seed;
          double tol_e = c.tol_entropy, tol_f = c.tol_fisher;
          tasks.push_back(
              {guarded("qc_subset_epi", family, params, N, [=]() {
                 std::vector<DensityMatrix> built;
                 for (const auto& s : states) built.push_back(s.build(N, seed));
                 std::vector<ClassicalRV> rvs(n, cl.build());
                 std::vector<std::pair<std::vector<int>, std::vector<int>>> els;
                 for (int k = 1; k <= n; ++k) els.push_back({{k}, {k}});
                 SubsetCollection C = SubsetCollection::paired(n, n, els);
                 std::vector<CheckRow> out;
                 auto m3 = qc_subset_epi_check(built, rvs, C, tol_e, budget, t);
                 out.push_back(row_from_margin(m3, family, params, n, N));
                 return out;
               })});
          tasks.push_back(
              {guarded("qc_fisher_stam", family, params, N, [=]() {
                 std::vector<DensityMatrix> built;
                 for (const auto& s : states) built.push_back(s.build(N, seed));
                 std::vector<ClassicalRV> rvs(n, cl.build());
                 std::vector<std::pair<std::vector<int>, std::vector<int>>> els;
                 for (int k = 1; k <= n; ++k) els.push_back({{k}, {k}});
                 SubsetCollection C = SubsetCollection::paired(n, n, els);
                 std::vector<CheckRow> out;
                 auto m4 = qc_fisher_stam_check(built, rvs, C, std::nullopt, tol_f, budget, t);
                 out.push_back(row_from_margin(m4, family, params + ",mu=optimal", n, N));
                 return out;
               })});
        }
      }
    }
  }

  if (has_check(c, "liftproof")) {
    const int NL = c.lift_cutoff;
    if (c.states.size() >= 2) {
      std::string family = c.states[0].label() + "+" + c.states[1].label();
      StateSpec sa = c.states[0], sb = c.states[1];
      auto seed = c.seed;
      double tol = c.tol_residual;
      int lift_nodes = c.lift_nodes;
      tasks.push_back(
          {guarded("liftproof", family, "spec=(1,0)", NL, [=]() {
             const int base_cutoff = std::max(NL, 40);
             DensityMatrix r1 = truncate(sa.build(base_cutoff, seed), NL);
             DensityMatrix r2 = truncate(sb.build(base_cutoff, seed), NL);
             InnerProductSpec spec = linear_spec(1, 0.0);
             LiftBudget lb;
             lb.nodes = lift_nodes;
             // Light-tailed probes keep the two-path residuals well clear
             // of the truncation floor at this cutoff.
             Mat T = vacuum_state(NL).entries;
             Mat R = Mat::Zero(NL + 1, NL + 1);
             R(0, 0) = 0.5;
             R(1, 1) = 0.3;
             R(2, 2) = 0.2;
             R(0, 1) = R(1, 0) = 0.1;
             std::vector<CheckRow> out;
             for (const std::vector<int>& v :
                  {std::vector<int>{1}, std::vector<int>{2}, std::vector<int>{1, 2}}) {
               auto res = lift_pairing_check(T, R, r1, r2, v, spec, lb);
               CheckRow row;
               row.check = "lift_pairing";
               row.family = family;
               row.params = "v=" + std::to_string(v.size() == 2 ? 12 : v[0]);
               row.n = 2;
               row.cutoff = NL;
               row.lhs = res.lhs.real();
               row.rhs = res.rhs.real();
               row.margin = tol - res.residual_rel;
               row.status = res.residual_rel <= tol ? "pass" : "fail";
               out.push_back(row);
             }
             for (const std::vector<int>& v : {std::vector<int>{1}, std::vector<int>{1, 2}}) {
               auto res = score_lift_check(r1, r2, annihilation_matrix(NL), v, spec, lb);
               CheckRow row;
               row.check = "score_lift";
               row.family = family;
               row.params = "v=" + std::to_string(v.size() == 2 ? 12 : v[0]);
               row.n = 2;
               row.cutoff = NL;
               row.lhs = res.lhs.real();
               row.rhs = res.rhs.real();
               row.margin = tol - res.residual_rel;
               row.status = res.residual_rel <= tol ? "pass" : "fail";
               out.push_back(row);
             }
             // Projector decomposition at a small per-register cutoff.
             const int NP = 5;
             std::vector<DensityMatrix> pstates = {
                 normalized(truncate(thermal_state(0.4, 40), NP)),
                 normalized(truncate(thermal_state(0.7, 40), NP))};
             std::vector<Mat> ops;
             Mat a = annihilation_matrix(NP);
             int d2 = (NP + 1) * (NP + 1);
             ops.push_back(op_on_slot(a, 0, 2, NP + 1));
             ops.push_back(op_on_slot(a.adjoint() * a, 1, 2, NP + 1) +
                           Mat::Identity(d2, d2));
             auto rep = projector_decomposition_check(pstates, ops, spec);
             CheckRow row;
             row.check = "projector_decomposition";
             row.family = "thermal(0.4)+thermal(0.7)";
             row.params = "n=2";
             row.n = 2;
             row.cutoff = NP;
             double worst = std::max({rep.identity_residual,
                                      rep.orthogonality_residual,
                                      rep.selfadjoint_residual,
                                      rep.pythagoras_residual});
             row.lhs = worst;
             row.rhs = 1e-9;
             row.margin = 1e-9 - worst;
             row.status = worst <= 1e-9 ? "pass" : "fail";
             out.push_back(row);
             return out;
           })});
    }
  }

  return tasks;
}

}  // namespace

VerificationReport run_checks(const RunConfig& config, int jobs) {
  auto tasks = expand_tasks(config);
  if (static_cast<int>(tasks.size()) > config.max_rows)
    throw Error(ErrorCode::BudgetExceeded, "run_checks: task grid exceeds max_rows");

  std::vector<std::vector<CheckRow>> results(tasks.size());
  std::atomic<size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) break;
      auto t0 = std::chrono::steady_clock::now();
      results[i] = tasks[i].run();
      double dt = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0).count();
      for (auto& r : results[i]) r.wall_time = dt / results[i].size();
    }
  };
  int nw = std::max(1, jobs);
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  VerificationReport report;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(
                    fnv1a_hash(config.canonical_json())));
  report.config_hash = buf;
  for (auto& rs : results)
    for (auto& r : rs) report.rows.push_back(std::move(r));
  if (static_cast<int>(report.rows.size()) > config.max_rows)
    throw Error(ErrorCode::BudgetExceeded, "run_checks: row budget exceeded");
  return report;
}

int report_exit_code(const VerificationReport& report,
                     const RunConfig& config) {
  bool diag = false, fail = false;
  for (const auto& r : report.rows) {
    if (r.status == "skip") diag = true;
    if (r.trace_deficit > config.gate_trace_deficit) diag = true;
    if (r.quad_error > config.gate_quad_error) diag = true;
    if (r.status == "fail") fail = true;
  }
  if (diag) return 2;
  if (fail) return 1;
  return 0;
}

void write_report_files(const VerificationReport& report,
                        const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create output dir " + out_dir);
  {
    std::ofstream js(fs::path(out_dir) / "report.json");
    if (!js) throw Error(ErrorCode::IoError, "cannot write report.json");
    js << report.to_json();
  }
  {
    std::ofstream cs(fs::path(out_dir) / "report.csv");
    if (!cs) throw Error(ErrorCode::IoError, "cannot write report.csv");
    cs << report.to_csv();
  }
}

}  // namespace qepi
