// Command-line front end: seeded, config-driven experiments with JSON
// summaries and CSV detail files.
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ad/diagnostics.hpp"
#include "ad/eigentensor.hpp"
#include "ad/equalize.hpp"
#include "ad/estimators.hpp"
#include "ad/experiments.hpp"
#include "ad/groups.hpp"
#include "ad/matching.hpp"
#include "ad/rankpromo.hpp"
#include "ad/rng.hpp"
#include "ad/signals.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out = ".";
  std::string config_path;

  // model
  std::string model = "white";
  int m = 8;
  double snr_db = 20.0;
  std::size_t l = 1;
  double rho = 0.8;
  double chirp_mu = 0.0;
  double noise_sigma2 = 0.0;
  std::vector<double> freqs;
  std::vector<double> amps;
  std::string graph_path;

  // estimate / match / seqgevp
  std::string group = "Z8";
  std::vector<int> factors;
  std::string basis = "natural";
  double tau = -1.0;  // negative: pick default by context
  std::size_t cap = 16;
  double alpha_threshold = 0.1;

  // equalize
  std::string cost = "cma";
  std::string constellation = "qpsk";
  double step = 1e-3;
  int taps = 11;
  int channel_taps = 5;
  std::size_t symbols = 5000;

  // mc-pi / experiments
  std::string mode = "stratified";
  std::size_t strata = 64;
  std::size_t n_total = 6400;
  std::size_t trials = 200;
  double jitter = 0.05;
};

json resolved_config(const Options& o, const std::string& command) {
  json cfg;
  cfg["command"] = command;
  cfg["seed"] = o.seed;
  cfg["threads"] = o.threads;
  cfg["out"] = o.out;
  cfg["model"] = o.model;
  cfg["M"] = o.m;
  cfg["snr_db"] = o.snr_db;
  cfg["L"] = o.l;
  cfg["rho"] = o.rho;
  cfg["chirp_mu"] = o.chirp_mu;
  cfg["noise_sigma2"] = o.noise_sigma2;
  cfg["freqs"] = o.freqs;
  cfg["amps"] = o.amps;
  cfg["graph"] = o.graph_path;
  cfg["group"] = o.group;
  cfg["factors"] = o.factors;
  cfg["basis"] = o.basis;
  cfg["tau"] = o.tau;
  cfg["cap"] = o.cap;
  cfg["alpha_threshold"] = o.alpha_threshold;
  cfg["cost"] = o.cost;
  cfg["constellation"] = o.constellation;
  cfg["step"] = o.step;
  cfg["taps"] = o.taps;
  cfg["channel_taps"] = o.channel_taps;
  cfg["symbols"] = o.symbols;
  cfg["mode"] = o.mode;
  cfg["strata"] = o.strata;
  cfg["n_total"] = o.n_total;
  cfg["trials"] = o.trials;
  cfg["jitter"] = o.jitter;
  return cfg;
}

void write_json(const Options& o, const std::string& name, json body,
                const std::string& command) {
  fs::create_directories(o.out);
  body["config"] = resolved_config(o, command);
  std::ofstream f(fs::path(o.out) / (name + "_summary.json"));
  f << body.dump(2) << "\n";
}

void write_csv(const Options& o, const std::string& name,
               const std::string& header,
               const std::vector<std::string>& rows,
               const std::string& command) {
  fs::create_directories(o.out);
  std::ofstream f(fs::path(o.out) / (name + "_detail.csv"));
  f << "# config " << resolved_config(o, command).dump() << "\n";
  f << header << "\n";
  for (const std::string& r : rows) f << r << "\n";
}

void append_log(const Options& o, const std::string& command) {
  fs::create_directories(o.out);
  std::ofstream f(fs::path(o.out) / "run.log", std::ios::app);
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%S", std::gmtime(&now));
  f << stamp << " " << command << " seed=" << o.seed << "\n";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ad::Graph load_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open graph file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ad::parse_edge_list(ss.str());
}

ad::CovModel model_from_options(const Options& o) {
  ad::CovModel m;
  m.M = o.m;
  if (o.model == "white") {
    m.kind = ad::CovModel::Kind::white;
  } else if (o.model == "ar") {
    m.kind = ad::CovModel::Kind::ar;
    m.ar_rho = o.rho;
  } else if (o.model == "multipath") {
    m.kind = ad::CovModel::Kind::multipath;
  } else if (o.model == "tones" || o.model == "chirp") {
    m.kind = o.model == "tones" ? ad::CovModel::Kind::tones
                                : ad::CovModel::Kind::chirp;
    m.freqs = o.freqs.empty() ? std::vector<double>{1.0} : o.freqs;
    m.amps = o.amps.empty() ? std::vector<double>(m.freqs.size(), 1.0) : o.amps;
    m.noise_sigma2 = o.noise_sigma2;
    m.chirp_mu = o.chirp_mu;
  } else if (o.model == "graph-diffusion") {
    m.kind = ad::CovModel::Kind::graph_diffusion;
    m.graph = o.graph_path.empty() ? ad::cycle_graph(o.m)
                                   : load_graph(o.graph_path);
    m.M = m.graph.n;
  } else {
    throw std::invalid_argument("unknown model: " + o.model);
  }
  return m;
}

json diagnostics_json(const ad::DiagnosticsRecord& rec) {
  return json{{"alpha", rec.alpha},
              {"psi", rec.psi},
              {"kappa", rec.kappa},
              {"h_struct", rec.h_struct},
              {"r_eff", rec.r_eff}};
}

json trace_json(const ad::SeqGevpTrace& trace) {
  json its = json::array();
  for (const ad::SeqGevpIteration& it : trace.iterations) {
    its.push_back(json{{"lambda_min", it.lambda_min},
                       {"permutation", it.rounded_perm.cycle_notation()},
                       {"residual", it.residual},
                       {"accepted", it.accepted}});
  }
  json elements = json::array();
  for (const ad::Permutation& p : trace.final_group.elements) {
    if (elements.size() >= 128) break;
    elements.push_back(p.cycle_notation());
  }
  const char* term = trace.termination == ad::SeqGevpTermination::rejection
                         ? "rejection"
                     : trace.termination == ad::SeqGevpTermination::cap
                         ? "cap"
                         : "basis_exhausted";
  return json{{"iterations", its},
              {"final_group",
               json{{"label", trace.final_group.label},
                    {"order", trace.final_group.size()},
                    {"elements", elements}}},
              {"termination", term},
              {"tau", trace.tau}};
}

json match_json(const ad::MatchReport& report) {
  json ranked = json::array();
  for (const auto& [label, dcv] : report.ranked) {
    ranked.push_back(json{{"group", label}, {"dcv", dcv}});
  }
  return json{{"selected", report.selected},
              {"alpha_gate", report.alpha_gate},
              {"ranked", ranked},
              {"kappa_trajectory", report.kappa_trajectory},
              {"notes", report.notes}};
}

// ---------------------------------------------------------------------------
// Config files: flat JSON object, or one key=value per line with '#' comments.

const std::set<std::string>& allowed_config_keys() {
  static const std::set<std::string> keys = {
      "seed",     "threads",   "out",           "model",
      "M",        "snr_db",    "L",             "rho",
      "chirp_mu", "noise_sigma2", "graph",      "group",
      "basis",    "tau",       "cap",           "alpha_threshold",
      "cost",     "constellation", "step",      "taps",
      "channel_taps", "symbols", "mode",        "strata",
      "n_total",  "trials",    "jitter"};
  return keys;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();
  std::map<std::string, std::string> kv;

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("config parse error: " +
                                  std::string(e.what()));
    }
    for (const auto& [key, value] : j.items()) {
      kv[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      const auto begin = line.find_first_not_of(" \t\r");
      if (begin == std::string::npos || line[begin] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("config parse error at line " +
                                    std::to_string(lineno) +
                                    ": expected key=value");
      }
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string()
                                      : s.substr(a, b - a + 1);
      };
      const std::string key = trim(line.substr(0, eq));
      if (!allowed_config_keys().count(key)) {
        throw std::invalid_argument("unknown config key at line " +
                                    std::to_string(lineno) + ": " + key);
      }
      kv[key] = trim(line.substr(eq + 1));
    }
  }
  for (const auto& [key, value] : kv) {
    (void)value;
    if (!allowed_config_keys().count(key)) {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  return kv;
}

void apply_config(Options& o, const std::map<std::string, std::string>& kv,
                  const std::map<std::string, std::vector<CLI::Option*>>& cli_opts) {
  auto fresh = [&](const std::string& key) {
    const auto it = cli_opts.find(key);
    if (it == cli_opts.end()) return true;
    for (const CLI::Option* opt : it->second) {
      if (opt->count() > 0) return false;
    }
    return true;
  };
  for (const auto& [key, value] : kv) {
    if (!fresh(key)) continue;  // explicit flags win over the config file
    try {
      if (key == "seed") o.seed = std::stoull(value);
      else if (key == "threads") o.threads = std::stoul(value);
      else if (key == "out") o.out = value;
      else if (key == "model") o.model = value;
      else if (key == "M") o.m = std::stoi(value);
      else if (key == "snr_db") o.snr_db = std::stod(value);
      else if (key == "L") o.l = std::stoull(value);
      else if (key == "rho") o.rho = std::stod(value);
      else if (key == "chirp_mu") o.chirp_mu = std::stod(value);
      else if (key == "noise_sigma2") o.noise_sigma2 = std::stod(value);
      else if (key == "graph") o.graph_path = value;
      else if (key == "group") o.group = value;
      else if (key == "basis") o.basis = value;
      else if (key == "tau") o.tau = std::stod(value);
      else if (key == "cap") o.cap = std::stoull(value);
      else if (key == "alpha_threshold") o.alpha_threshold = std::stod(value);
      else if (key == "cost") o.cost = value;
      else if (key == "constellation") o.constellation = value;
      else if (key == "step") o.step = std::stod(value);
      else if (key == "taps") o.taps = std::stoi(value);
      else if (key == "channel_taps") o.channel_taps = std::stoi(value);
      else if (key == "symbols") o.symbols = std::stoull(value);
      else if (key == "mode") o.mode = value;
      else if (key == "strata") o.strata = std::stoull(value);
      else if (key == "n_total") o.n_total = std::stoull(value);
      else if (key == "trials") o.trials = std::stoull(value);
      else if (key == "jitter") o.jitter = std::stod(value);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad value for config key " + key + ": " +
                                  value);
    }
  }
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

int cmd_diagnose(const Options& o) {
  const ad::HermitianMatrix r = ad::build_covariance(model_from_options(o));
  const ad::DiagnosticsRecord rec = ad::diagnostics_record(r);
  write_json(o, "diagnose", diagnostics_json(rec), "diagnose");
  const ad::EigDecomposition eig = ad::hermitian_eig(r);
  std::vector<std::string> rows;
  for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
    rows.push_back(std::to_string(k) + "," + fmt(eig.eigenvalues[k]));
  }
  write_csv(o, "diagnose", "index,eigenvalue", rows, "diagnose");
  std::printf("%s\n", diagnostics_json(rec).dump(2).c_str());
  return kExitOk;
}

int cmd_estimate(const Options& o) {
  const ad::CovModel model = model_from_options(o);
  const ad::SnapshotSet snaps =
      ad::sample_snapshots(model, o.l, o.snr_db, o.seed);
  ad::CovEstimate est;
  if (!o.factors.empty()) {
    est = ad::fast_path_abelian(o.factors, snaps);
  } else {
    const ad::FiniteGroup g = ad::parse_group_spec(o.group, o.m);
    est = ad::group_avg_covariance(ad::Representation{g}, snaps);
  }
  json body{{"group", est.group_label},
            {"L", est.L_used},
            {"d_eff_claimed", est.d_eff_claimed},
            {"fast_path", est.fast_path},
            {"diagnostics", diagnostics_json(ad::diagnostics_record(est.R_hat))}};
  write_json(o, "estimate", body, "estimate");
  std::vector<std::string> rows;
  const int m = static_cast<int>(est.R_hat.dim());
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) {
      rows.push_back(std::to_string(p) + "," + std::to_string(q) + "," +
                     fmt(est.R_hat(p, q).real()) + "," +
                     fmt(est.R_hat(p, q).imag()));
    }
  }
  write_csv(o, "estimate", "row,col,re,im", rows, "estimate");
  std::printf("%s\n", body.dump(2).c_str());
  return kExitOk;
}

int cmd_match(const Options& o) {
  const ad::CovModel model = model_from_options(o);
  const ad::SnapshotSet snaps =
      ad::sample_snapshots(model, o.l, o.snr_db, o.seed);
  ad::PipelineConfig cfg;
  cfg.alpha_threshold = o.alpha_threshold;
  if (o.tau >= 0.0) cfg.tau = o.tau;
  cfg.seq_cap = o.cap;
  const ad::MatchReport report = ad::pipeline(snaps, cfg);
  const json body = match_json(report);
  write_json(o, "match", body, "match");
  std::vector<std::string> rows;
  for (const auto& [label, dcv] : report.ranked) {
    rows.push_back(label + "," + fmt(dcv));
  }
  write_csv(o, "match", "group,dcv", rows, "match");
  std::printf("%s\n", body.dump(2).c_str());
  return kExitOk;
}

int cmd_seqgevp(const Options& o) {
  ad::CovModel model;
  if (!o.graph_path.empty()) {
    model.kind = ad::CovModel::Kind::graph_diffusion;
    model.graph = load_graph(o.graph_path);
    model.M = model.graph.n;
  } else {
    model = model_from_options(o);
  }
  const ad::HermitianMatrix r = ad::build_covariance(model);
  const int degree = static_cast<int>(r.dim());
  ad::GeneratorBasis basis;
  if (o.basis == "natural") {
    basis = ad::natural_basis(degree);
  } else if (o.basis == "transpositions") {
    basis = ad::transposition_basis(degree);
  } else {
    throw std::invalid_argument("unknown basis: " + o.basis);
  }
  const double tau = o.tau >= 0.0 ? o.tau : ad::kTauNoiseless;
  const ad::SeqGevpTrace trace = ad::sequential_gevp(r, basis, tau, o.cap);
  const json body = trace_json(trace);
  write_json(o, "seqgevp", body, "seqgevp");
  std::vector<std::string> rows;
  for (const ad::SeqGevpIteration& it : trace.iterations) {
    rows.push_back(fmt(it.lambda_min) + ",\"" +
                   it.rounded_perm.cycle_notation() + "\"," +
                   fmt(it.residual) + "," + (it.accepted ? "1" : "0"));
  }
  write_csv(o, "seqgevp", "lambda_min,permutation,residual,accepted", rows,
            "seqgevp");
  std::printf("%s\n", body.dump(2).c_str());
  return kExitOk;
}

int cmd_equalize(const Options& o) {
  ad::EqualizerConfig base;
  base.constellation = ad::parse_constellation(o.constellation);
  if (o.cost == "cma") base.cost = ad::EqCost::cma;
  else if (o.cost == "mma") base.cost = ad::EqCost::mma;
  else if (o.cost == "zm") base.cost = ad::EqCost::ad_zm;
  else throw std::invalid_argument("unknown cost: " + o.cost);
  base.n_taps = o.taps;
  base.step = o.step;
  base.n_symbols = o.symbols;
  base.snr_db = o.snr_db;
  base.channel = ad::rayleigh_channel(o.channel_taps, 3.0, o.seed);
  const ad::PhaseStats stats = ad::phase_ensemble(base, o.trials, o.seed);
  json body{{"std_deg", stats.std_deg},
            {"predicted_deg", stats.predicted_deg},
            {"n_trials", o.trials},
            {"n_failed", stats.n_failed}};
  write_json(o, "equalize", body, "equalize");
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < stats.residuals.size(); ++i) {
    rows.push_back(std::to_string(i) + "," + fmt(stats.residuals[i]));
  }
  write_csv(o, "equalize", "trial,residual_rad", rows, "equalize");
  std::printf("%s\n", body.dump(2).c_str());
  return kExitOk;
}

int cmd_mc_pi(const Options& o) {
  const ad::McPiMode mode = o.mode == "plain" ? ad::McPiMode::plain
                                              : ad::McPiMode::stratified;
  if (o.mode != "plain" && o.mode != "stratified") {
    throw std::invalid_argument("unknown mode: " + o.mode);
  }
  const ad::McPiResult r = ad::mc_pi(mode, o.strata, o.n_total, o.seed);
  json body{{"mode", o.mode},
            {"estimate", r.estimate},
            {"abs_error", r.abs_error},
            {"n_total", r.n_total},
            {"rounds", r.rounds}};
  write_json(o, "mc_pi", body, "mc-pi");
  write_csv(o, "mc_pi", "mode,estimate,abs_error,n_total,rounds",
            {o.mode + "," + fmt(r.estimate) + "," + fmt(r.abs_error) + "," +
             std::to_string(r.n_total) + "," + std::to_string(r.rounds)},
            "mc-pi");
  std::printf("%s\n", body.dump(2).c_str());
  return kExitOk;
}

int experiment_converse(const Options& o) {
  const ad::ConverseResult res =
      ad::converse_experiment(o.m, o.trials, o.seed, o.threads);
  double worst = 1.0;
  for (double v : res.var_ratio) {
    if (std::abs(v - 1.0) > std::abs(worst - 1.0)) worst = v;
  }
  json body{{"lambda", res.lambda},
            {"var_ratio", res.var_ratio},
            {"worst_ratio", worst}};
  write_json(o, "converse", body, "experiment converse");
  std::vector<std::string> rows;
  for (std::size_t k = 0; k < res.lambda.size(); ++k) {
    rows.push_back(std::to_string(k) + "," + fmt(res.lambda[k]) + "," +
                   fmt(res.var_ratio[k]));
  }
  write_csv(o, "converse", "bin,lambda,var_ratio", rows, "experiment converse");
  std::printf("%s\n", body.dump(2).c_str());
  return kExitOk;
}

int experiment_gl_continuum(const Options& o) {
  const std::vector<ad::ContinuumPoint> pts =
      ad::gl_continuum_experiment(o.m, o.trials, o.seed);
  double lo = pts.front().mse, hi = pts.front().mse;
  json arr = json::array();
  std::vector<std::string> rows;
  for (const ad::ContinuumPoint& p : pts) {
    lo = std::min(lo, p.mse);
    hi = std::max(hi, p.mse);
    arr.push_back(json{{"group_order", p.group_order},
                       {"L", p.snapshots},
                       {"mse", p.mse}});
    rows.push_back(std::to_string(p.group_order) + "," +
                   std::to_string(p.snapshots) + "," + fmt(p.mse));
  }
  json body{{"points", arr}, {"spread", hi / lo - 1.0}};
  write_json(o, "gl_continuum", body, "experiment gl-continuum");
  write_csv(o, "gl_continuum", "group_order,L,mse", rows,
            "experiment gl-continuum");
  std::printf("%s\n", body.dump(2).c_str());
  return kExitOk;
}

int experiment_supergroup(const Options& o) {
  const ad::SupergroupResult res =
      ad::supergroup_experiment(o.m, o.trials, o.seed);
  json body{{"mse_full", res.mse_full},
            {"mse_sub", res.mse_sub},
            {"ratio", res.ratio}};
  write_json(o, "supergroup", body, "experiment supergroup");
  write_csv(o, "supergroup", "group,mse",
            {"full," + fmt(res.mse_full), "subgroup," + fmt(res.mse_sub)},
            "experiment supergroup");
  std::printf("%s\n", body.dump(2).c_str());
  return kExitOk;
}

int experiment_scaling_dichotomy(const Options& o) {
  const ad::DichotomyResult res =
      ad::scaling_dichotomy_experiment(o.trials, o.seed);
  auto series = [](const ad::DichotomySeries& s) {
    return json{{"sigma_kappa", s.sigma_kappa},
                {"sigma_psi", s.sigma_psi},
                {"beta_kappa", s.fit_kappa.beta},
                {"beta_psi", s.fit_psi.beta},
                {"r2_kappa", s.fit_kappa.r2},
                {"r2_psi", s.fit_psi.r2}};
  };
  json body{{"snr_db", res.snr_db},
            {"matched", series(res.matched)},
            {"mismatched", series(res.mismatched)}};
  write_json(o, "scaling_dichotomy", body, "experiment scaling-dichotomy");
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < res.snr_db.size(); ++i) {
    rows.push_back(fmt(res.snr_db[i]) + "," +
                   fmt(res.matched.sigma_kappa[i]) + "," +
                   fmt(res.matched.sigma_psi[i]) + "," +
                   fmt(res.mismatched.sigma_kappa[i]) + "," +
                   fmt(res.mismatched.sigma_psi[i]));
  }
  write_csv(o, "scaling_dichotomy",
            "snr_db,matched_sigma_kappa,matched_sigma_psi,"
            "mismatched_sigma_kappa,mismatched_sigma_psi",
            rows, "experiment scaling-dichotomy");
  std::printf("%s\n", body.dump(2).c_str());
  return kExitOk;
}

int experiment_coding_rate(const Options& o) {
  const int m = 8;
  std::vector<ad::CovModel> models;
  std::vector<std::string> names;

  ad::CovModel spike;
  spike.kind = ad::CovModel::Kind::multipath;
  spike.M = m;
  spike.mp_delays = {0, 1, 2, 3, 4, 5, 6, 7};
  spike.mp_amps.assign(8, 1.0);
  models.push_back(spike);
  names.push_back("sparse-spike");

  ad::CovModel two_tone;
  two_tone.kind = ad::CovModel::Kind::tones;
  two_tone.M = m;
  two_tone.freqs = {1.0, 2.0};
  two_tone.amps = {1.0, 0.6};
  models.push_back(two_tone);
  names.push_back("two-tone");

  ad::CovModel ar_profile;
  ar_profile.kind = ad::CovModel::Kind::tones;
  ar_profile.M = m;
  ar_profile.freqs = {0.0, 1.0, 2.0, 3.0};
  ar_profile.amps = {1.0, 0.8, 0.64, 0.512};
  models.push_back(ar_profile);
  names.push_back("ar-profile");

  ad::CovModel ma_like;
  ma_like.kind = ad::CovModel::Kind::multipath;
  ma_like.M = m;
  models.push_back(ma_like);
  names.push_back("ma-like");

  ad::CovModel graph;
  graph.kind = ad::CovModel::Kind::graph_diffusion;
  graph.M = m;
  graph.graph = ad::cycle_graph(m);
  models.push_back(graph);
  names.push_back("graph");

  ad::CovModel white;
  white.kind = ad::CovModel::Kind::white;
  white.M = m;
  models.push_back(white);
  names.push_back("white");

  ad::CodingRateConfig cfg;
  cfg.trials = o.trials;
  const std::vector<ad::CodingRateRow> rows =
      ad::coding_rate_experiment(models, names, ad::cyclic_group(m), o.seed,
                                 cfg);
  json arr = json::array();
  std::vector<std::string> csv;
  for (const ad::CodingRateRow& r : rows) {
    arr.push_back(json{{"model", r.model},
                       {"h_struct", r.h_struct},
                       {"n_star", r.n_star},
                       {"ratio", r.ratio},
                       {"diffuse", r.diffuse}});
    csv.push_back(r.model + "," + fmt(r.h_struct) + "," +
                  std::to_string(r.n_star) + "," + fmt(r.ratio) + "," +
                  (r.diffuse ? "1" : "0"));
  }
  json body{{"rows", arr}};
  write_json(o, "coding_rate", body, "experiment coding-rate");
  write_csv(o, "coding_rate", "model,h_struct,n_star,ratio,diffuse", csv,
            "experiment coding-rate");
  std::printf("%s\n", body.dump(2).c_str());
  return kExitOk;
}

int experiment_level2(const Options& o) {
  const ad::TwoClassSample sample =
      ad::two_class_profiles(o.trials, 4, o.jitter, o.seed);
  const ad::SeparationReport rep = ad::two_class_separation(sample);
  json body{{"mean_flat", rep.mean_flat},
            {"mean_ramped", rep.mean_ramped},
            {"pooled_sigma", rep.pooled_sigma},
            {"separation", rep.separation}};
  write_json(o, "level2", body, "experiment level2");
  const ad::FiniteGroup s4 = ad::symmetric_group(4);
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < sample.flat.size(); ++i) {
    rows.push_back("flat," + std::to_string(i) + "," +
                   fmt(ad::level2_estimate(sample.flat[i], s4).psi2));
    rows.push_back("ramped," + std::to_string(i) + "," +
                   fmt(ad::level2_estimate(sample.ramped[i], s4).psi2));
  }
  write_csv(o, "level2", "class,sample,psi2", rows, "experiment level2");
  std::printf("%s\n", body.dump(2).c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group-averaged estimation toolkit"};
  app.require_subcommand(1);

  Options o;
  std::map<std::string, std::vector<CLI::Option*>> opts;

  // Global flags shared by every subcommand.
  opts["seed"].push_back(app.add_option("--seed", o.seed, "Random seed")
                             ->capture_default_str());
  opts["threads"].push_back(
      app.add_option("--threads", o.threads, "Worker thread bound")
          ->capture_default_str());
  opts["out"].push_back(app.add_option("--out", o.out, "Output directory")
                            ->capture_default_str());
  app.add_option("--config", o.config_path,
                 "Config file (key=value lines or flat JSON)");
  opts["M"].push_back(app.add_option("--M", o.m, "Vector dimension")
                          ->capture_default_str());
  opts["snr_db"].push_back(app.add_option("--snr-db", o.snr_db, "SNR in dB")
                               ->capture_default_str());
  opts["trials"].push_back(app.add_option("--trials", o.trials, "Trial count")
                               ->capture_default_str());

  CLI::App* diagnose = app.add_subcommand("diagnose", "Covariance diagnostics");
  CLI::App* estimate = app.add_subcommand("estimate", "Group-averaged covariance");
  CLI::App* match = app.add_subcommand("match", "Blind group identification");
  CLI::App* seqgevp = app.add_subcommand("seqgevp", "Sequential generator discovery");
  CLI::App* equalize = app.add_subcommand("equalize", "Blind equalizer phase ensemble");
  CLI::App* mcpi = app.add_subcommand("mc-pi", "Monte Carlo pi demonstration");
  CLI::App* experiment = app.add_subcommand("experiment", "Named experiment");

  for (CLI::App* c : {diagnose, estimate, match, seqgevp, equalize, mcpi,
                      experiment}) {
    c->fallthrough();  // global flags are accepted after the subcommand too
  }
  for (CLI::App* c : {diagnose, estimate, match, seqgevp}) {
    opts["model"].push_back(
        c->add_option("--model", o.model,
                      "white|ar|multipath|tones|chirp|graph-diffusion"));
    opts["rho"].push_back(c->add_option("--rho", o.rho, "AR coefficient"));
    opts["chirp_mu"].push_back(
        c->add_option("--chirp-mu", o.chirp_mu, "Chirp rate"));
    opts["noise_sigma2"].push_back(
        c->add_option("--noise-sigma2", o.noise_sigma2, "Tone noise floor"));
    c->add_option("--freq", o.freqs, "Tone frequencies (bins)");
    c->add_option("--amp", o.amps, "Tone amplitudes");
    opts["graph"].push_back(
        c->add_option("--graph", o.graph_path, "Edge-list file"));
    opts["L"].push_back(c->add_option("--L", o.l, "Snapshot count"));
  }
  opts["group"].push_back(
      estimate->add_option("--group", o.group, "Group spec, e.g. Z8"));
  estimate->add_option("--factors", o.factors, "Abelian fast-path factors");
  opts["alpha_threshold"].push_back(
      match->add_option("--alpha-threshold", o.alpha_threshold,
                        "Whiteness gate"));
  opts["basis"].push_back(
      seqgevp->add_option("--basis", o.basis, "natural|transpositions"));
  opts["tau"].push_back(app.add_option("--tau", o.tau, "Residual threshold"));
  opts["cap"].push_back(app.add_option("--cap", o.cap, "Iteration cap"));

  opts["cost"].push_back(equalize->add_option("--cost", o.cost, "cma|mma|zm"));
  opts["constellation"].push_back(
      equalize->add_option("--const", o.constellation,
                           "bpsk|qpsk|8psk|qam16"));
  opts["step"].push_back(equalize->add_option("--step", o.step, "SGD step size"));
  opts["taps"].push_back(
      equalize->add_option("--taps", o.taps, "Equalizer taps (odd)"));
  opts["channel_taps"].push_back(
      equalize->add_option("--channel-taps", o.channel_taps, "Channel taps"));
  opts["symbols"].push_back(
      equalize->add_option("--symbols", o.symbols, "Symbols per trial"));

  opts["mode"].push_back(mcpi->add_option("--mode", o.mode, "plain|stratified"));
  opts["strata"].push_back(
      mcpi->add_option("--strata", o.strata, "Stratum count"));
  opts["n_total"].push_back(mcpi->add_option("--n", o.n_total, "Total draws"));

  std::string experiment_name;
  experiment->add_option("name", experiment_name,
                         "gl-continuum|scaling-dichotomy|coding-rate|"
                         "supergroup|converse|level2")
      ->required();
  opts["jitter"].push_back(
      experiment->add_option("--jitter", o.jitter, "Profile jitter sigma"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (!o.config_path.empty()) {
      apply_config(o, parse_config_file(o.config_path), opts);
    }

    std::string command;
    int rc = kExitOk;
    if (app.got_subcommand(diagnose)) {
      command = "diagnose";
      rc = cmd_diagnose(o);
    } else if (app.got_subcommand(estimate)) {
      command = "estimate";
      rc = cmd_estimate(o);
    } else if (app.got_subcommand(match)) {
      command = "match";
      rc = cmd_match(o);
    } else if (app.got_subcommand(seqgevp)) {
      command = "seqgevp";
      rc = cmd_seqgevp(o);
    } else if (app.got_subcommand(equalize)) {
      command = "equalize";
      rc = cmd_equalize(o);
    } else if (app.got_subcommand(mcpi)) {
      command = "mc-pi";
      rc = cmd_mc_pi(o);
    } else {
      command = "experiment " + experiment_name;
      if (experiment_name == "converse") rc = experiment_converse(o);
      else if (experiment_name == "gl-continuum") rc = experiment_gl_continuum(o);
      else if (experiment_name == "supergroup") rc = experiment_supergroup(o);
      else if (experiment_name == "scaling-dichotomy")
        rc = experiment_scaling_dichotomy(o);
      else if (experiment_name == "coding-rate") rc = experiment_coding_rate(o);
      else if (experiment_name == "level2") rc = experiment_level2(o);
      else throw std::invalid_argument("unknown experiment: " + experiment_name);
    }
    append_log(o, command);
    return rc;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
}
