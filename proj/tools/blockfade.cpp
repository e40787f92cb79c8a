#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "blockfade/bounds.hpp"
#include "blockfade/codelength.hpp"
#include "blockfade/highsnr.hpp"
#include "blockfade/model_io.hpp"
#include "blockfade/prediction.hpp"
#include "blockfade/simkit.hpp"
#include "blockfade/unit_energy.hpp"

using namespace blockfade;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
const auto kStart = std::chrono::steady_clock::now();

struct Common {
  std::string model_path;
  std::string format = "json";
  std::string output;
  double tol = 1e-9;
  int jobs = 0;
  bool db = false;
  std::string snr_text;
  std::string snr_grid;
  std::map<std::string, std::string> params;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return fmt(v.get<double>());
  return v.dump();
}

class Emitter {
 public:
  Emitter(Common& c, std::string sub) : c_(c), sub_(std::move(sub)) {}

  json manifest() const {
    json m;
    m["subcommand"] = sub_;
    m["model"] = c_.model_path;
    m["parameters"] = c_.params;
    m["output"] = c_.output.empty() ? "-" : c_.output;
    m["version"] = kVersion;
    m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - kStart).count();
    return m;
  }

  void emit_json(json body) const {
    body["manifest"] = manifest();
    write(body.dump(2) + "\n");
  }

  void emit_table(const Table& t) const {
    if (c_.format == "json") {
      json rows = json::array();
      for (const auto& r : t.rows) {
        json o;
        for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = r[i];
        rows.push_back(o);
      }
      emit_json({{"rows", rows}});
      return;
    }
    std::ostringstream os;
    os << "# " << manifest().dump() << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(cell(r[i]));
      os << "\n";
    }
    write(os.str());
  }

 private:
  void write(const std::string& s) const {
    if (c_.output.empty() || c_.output == "-") {
      std::cout << s;
      return;
    }
    std::ofstream out(c_.output);
    if (!out) throw InvalidParameter("cannot write output file '" + c_.output + "'");
    out << s;
  }

  Common& c_;
  std::string sub_;
};

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidParameter(what + ": cannot parse '" + s + "'");
  }
  if (used != s.size()) throw InvalidParameter(what + ": cannot parse '" + s + "'");
  return v;
}

double to_linear(const Common& c, double x) { return c.db ? std::pow(10.0, x / 10.0) : x; }

std::vector<double> snr_values(const Common& c, bool required = true) {
  std::vector<double> out;
  if (!c.snr_grid.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(c.snr_grid);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw InvalidParameter("--snr-grid must be lo:hi:points");
    const double lo = to_linear(c, parse_double(parts[0], "--snr-grid lo"));
    const double hi = to_linear(c, parse_double(parts[1], "--snr-grid hi"));
    const double pts = parse_double(parts[2], "--snr-grid points");
    if (pts != std::floor(pts) || pts < 1) throw InvalidParameter("--snr-grid points must be a positive integer");
    out = log_grid(lo, hi, static_cast<int>(pts));
  } else if (!c.snr_text.empty()) {
    std::stringstream ss(c.snr_text);
    std::string p;
    while (std::getline(ss, p, ',')) out.push_back(to_linear(c, parse_double(p, "--snr")));
  }
  if (required && out.empty()) throw InvalidParameter("an SNR is required: --snr or --snr-grid");
  for (double s : out)
    if (!(s > 0.0)) throw InvalidParameter("SNR must be positive (linear scale unless --db)");
  return out;
}

QuadOptions quad(const Common& c) {
  QuadOptions q;
  q.rel_tol = c.tol;
  return q;
}

SpectralModel need_model(const Common& c) {
  if (c.model_path.empty()) throw InvalidParameter("--model is required");
  return load_model(c.model_path);
}

void add_common(CLI::App* sub, Common& c, bool model, bool snr) {
  if (model) sub->add_option("--model", c.model_path, "Model JSON file");
  if (snr) {
    sub->add_option("--snr", c.snr_text, "SNR value(s), comma separated, linear unless --db");
    sub->add_option("--snr-grid", c.snr_grid, "Log-spaced SNR grid lo:hi:points");
    sub->add_flag("--db", c.db, "Interpret SNR values in dB");
  }
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--output", c.output, "Output file (default stdout)");
  sub->add_option("--tol", c.tol, "Relative quadrature tolerance (env BLOCKFADE_TOL)");
  sub->add_option("--jobs", c.jobs, "Worker threads (0 = runtime default)");
}

// ---------------------------------------------------------------------------

int run_spectrum_eval(Common& c, int grid) {
  const SpectralModel m = need_model(c);
  const int T = m.T();
  Table t;
  t.columns = {"omega"};
  for (int p = 0; p < T; ++p)
    for (int q = 0; q < T; ++q) {
      const std::string e = std::to_string(p + 1) + std::to_string(q + 1);
      t.columns.push_back("re_" + e);
      t.columns.push_back("im_" + e);
    }
  for (int k = 0; k < grid; ++k) {
    const double w = -kPi + (k + 0.5) * kTwoPi / grid;
    const CMatrix s = m.eval(w);
    std::vector<json> row{w};
    for (int p = 0; p < T; ++p)
      for (int q = 0; q < T; ++q) {
        row.push_back(s(p, q).real());
        row.push_back(s(p, q).imag());
      }
    t.rows.push_back(row);
  }
  Emitter(c, "spectrum-eval").emit_table(t);
  return 0;
}

int run_prelog(Common& c, int grid) {
  const SpectralModel m = need_model(c);
  std::vector<double> g = snr_values(c, false);
  if (g.empty()) g = default_prelog_grid();
  const PrelogReport r = prelog_report(m, g, grid, kRankThreshold, quad(c));
  json out{{"prelog_rank", r.prelog_rank},
           {"prelog_slope", r.prelog_slope},
           {"rank_measures", r.rank_measures},
           {"snr_grid", r.snr_grid},
           {"ambiguous_grid_points", r.ambiguous},
           {"disagreement", r.disagreement},
           {"rank_grid", grid},
           {"requested_tol", c.tol}};
  Emitter(c, "prelog").emit_json(out);
  return 0;
}

int run_fading_number(Common& c) {
  const SpectralModel m = need_model(c);
  const QuadResult ld = logdet_sigma(m, kInf, quad(c));
  const double f = fading_number(m, quad(c));
  Emitter(c, "fading-number")
      .emit_json({{"fading_number", f}, {"logdet_sigma_inf", ld.value}, {"achieved_error", ld.error / m.T()},
                  {"requested_tol", c.tol}});
  return 0;
}

int run_bounds(Common& c, const std::string& xmin_text, int history) {
  const SpectralModel m = need_model(c);
  Table t;
  t.columns = {"snr", "x_min", "lower", "upper", "lower_flags", "upper_flags", "logdet_error"};
  for (double snr : snr_values(c)) {
    const double x = xmin_text == "auto" ? 0.5 * std::sqrt(snr) : parse_double(xmin_text, "--xmin");
    const BoundPoint p = bound_point(m, snr, x, history, quad(c));
    auto join = [](const std::vector<std::string>& f) {
      std::string s;
      for (const auto& x : f) s += (s.empty() ? "" : ";") + x;
      return s;
    };
    t.rows.push_back({snr, x, p.lower.value, p.upper.value, join(p.lower.flags), join(p.upper.flags),
                      logdet_sigma(m, snr, quad(c)).error});
  }
  Emitter(c, "bounds").emit_table(t);
  return 0;
}

int run_two_level(Common& c, double e1, double e2, double a1, double a2) {
  Table t;
  t.columns = {"snr", "lower", "upper"};
  for (const auto& p : two_level_bounds(e1, e2, a1, a2, snr_values(c))) t.rows.push_back({p.snr, p.lower, p.upper});
  Emitter(c, "two-level").emit_table(t);
  return 0;
}

json scan_json(const SubsetScan& s) {
  json entries = json::array();
  for (const auto& e : s.entries) entries.push_back({{"subset", subset_label(e.mask)}, {"psi", e.psi}});
  json argmin = json::array();
  for (unsigned m : s.argmin) argmin.push_back(subset_label(m));
  return {{"snr", s.snr}, {"cp", s.cp}, {"argmin", argmin}, {"entries", entries},
          {"szasz_symmetric", s.szasz_symmetric}};
}

int run_cp(Common& c, const std::string& closed_form) {
  const SpectralModel m = need_model(c);
  const std::vector<double> snrs = snr_values(c);
  auto closed = [&](double snr) -> json {
    if (closed_form == "none") return nullptr;
    const auto* base = std::get_if<kind::ConstantWithinBlock>(&m.kind());
    if (const auto* gm = std::get_if<kind::BlockGaussMarkov>(&m.kind()); gm && gm->T == 1)
      return cp_block_gauss_markov(1, snr, gm->rho1);
    if (base) {
      if (const auto* g = std::get_if<kind::BlockGaussMarkov>(&base->base->kind()))
        return cp_block_gauss_markov(base->T, snr, g->rho1);
      if (const auto* sp = base->base->scalar_piecewise(); sp && sp->segments().size() == 1)
        return cp_block_indep_constant(base->T, snr);
    }
    return nullptr;
  };
  if (snrs.size() == 1 && c.format == "json") {
    json out = scan_json(cp_scan(m, snrs[0], quad(c)));
    out["closed_form"] = closed(snrs[0]);
    out["requested_tol"] = c.tol;
    Emitter(c, "cp").emit_json(out);
    return 0;
  }
  Table t;
  t.columns = {"snr", "cp", "argmin", "closed_form"};
  for (double snr : snrs) {
    const SubsetScan s = cp_scan(m, snr, quad(c));
    std::string am;
    for (unsigned x : s.argmin) am += (am.empty() ? "" : ";") + subset_label(x);
    t.rows.push_back({snr, s.cp, am, closed(snr)});
  }
  Emitter(c, "cp").emit_table(t);
  return 0;
}

int run_cp_crossover(Common& c, const std::string& m1, const std::string& m2, double lo, double hi) {
  const SpectralModel m = need_model(c);
  const unsigned a = parse_subset(m1, m.T()), b = parse_subset(m2, m.T());
  json xs = json::array();
  for (const auto& x : cp_crossover(m, a, b, lo, hi, 1e-9, quad(c)))
    xs.push_back({{"snr", x.snr}, {"bracket", {x.bracket_lo, x.bracket_hi}}, {"achieved_snr_tol", x.bracket_hi - x.bracket_lo}});
  Emitter(c, "cp-crossover").emit_json({{"m1", subset_label(a)}, {"m2", subset_label(b)}, {"search", {lo, hi}}, {"crossovers", xs}});
  return 0;
}

int run_tau(Common& c, const std::string& arcs, int n, int restarts, std::uint64_t seed, bool ladder) {
  const ArcSet set = ArcSet::parse(arcs);
  json out{{"arcs", set.to_string()}, {"measure", set.measure()}};
  if (set.arcs().size() == 1)
    out["tau"] = tau_arc(2.0 * set.arcs()[0].half_width);
  else
    out["tau"] = nullptr;
  if (n >= 2) {
    FeketeOptions fo;
    fo.restarts = restarts;
    fo.seed = seed;
    if (ladder) {
      const FeketeLadder l = fekete_ladder(set, n, fo);
      json steps = json::array();
      for (const auto& st : l.steps) steps.push_back({{"n", st.n}, {"tau_n", st.tau_n}, {"converged", st.converged}});
      out["ladder"] = {{"steps", steps}, {"monotone", l.monotone}};
      out["ladder"]["tau_limit"] = l.tau_limit ? json(*l.tau_limit) : json(nullptr);
    }
    const FeketeResult r = tau_fekete(set, n, fo);
    out["fekete"] = {{"n", r.n}, {"tau_n", r.tau_n}, {"log_v", r.log_v}, {"converged", r.converged},
                     {"restarts", r.restarts}, {"points", r.points}};
  }
  Emitter(c, "tau").emit_json(out);
  return 0;
}

int run_scaling(Common& c, double r, double pe, const std::string& tau_text, const std::string& arcs) {
  double tau = 0.0;
  std::string source;
  if (!tau_text.empty()) {
    tau = parse_double(tau_text, "--tau");
    source = "given";
  } else if (!arcs.empty()) {
    const ArcSet set = ArcSet::parse(arcs);
    if (set.arcs().size() == 1) {
      tau = tau_arc(2.0 * set.arcs()[0].half_width);
      source = "single-arc closed form";
    } else {
      tau = tau_fekete(set, 24).tau_n;
      source = "fekete n=24 (an upper estimate of tau)";
    }
  } else {
    throw InvalidParameter("scaling needs --tau or --arcs");
  }
  const double bound = scaling_lower_bound(r, pe, tau);
  Emitter(c, "scaling").emit_json({{"r", r}, {"pe", pe}, {"tau", tau}, {"tau_source", source}, {"liminf_n_over_log_snr", bound}});
  return 0;
}

int run_exponent(Common& c, const std::string& channel, const std::string& rate_text, const std::string& offset_text) {
  Table t;
  t.columns = {"snr", "rate", "exponent", "above_capacity", "rho"};
  for (double snr : snr_values(c)) {
    double rate;
    if (!rate_text.empty()) {
      rate = parse_double(rate_text, "--rate");
    } else if (!offset_text.empty()) {
      const double d = parse_double(offset_text, "--rate-offset");
      rate = channel == "awgn" ? std::log(snr) - d : std::log(snr) - std::log(std::log(snr)) - d;
    } else {
      throw InvalidParameter("exponent needs --rate or --rate-offset");
    }
    const Exponent e = channel == "awgn" ? awgn_exponent(rate, snr) : rayleigh_exponent(rate, snr, c.tol);
    t.rows.push_back({snr, rate, e.value, e.above_capacity, channel == "awgn" ? json(nullptr) : json(e.rho)});
  }
  if (t.rows.size() == 1 && c.format == "json") {
    json o;
    for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = t.rows[0][i];
    o["channel"] = channel;
    Emitter(c, "exponent").emit_json(o);
  } else {
    Emitter(c, "exponent").emit_table(t);
  }
  return 0;
}

int run_simulate(Common& c, int paths, int len, std::uint64_t seed, int history) {
  const SpectralModel m = need_model(c);
  const std::vector<double> snrs = snr_values(c);
  Table t;
  t.columns = {"snr", "position", "analytic_sigma", "empirical_mean", "stderr", "z_score"};
  for (double snr : snrs) {
    SimConfig cfg;
    cfg.model = &m;
    cfg.num_paths = paths;
    cfg.snr = snr;
    cfg.seed = seed;
    const int h = history >= 0 ? history : std::max(0, len - m.T());
    cfg.path_len = len > 0 ? len : h + m.T();
    const EmpiricalVariance e = empirical_prediction_variance(cfg, h);
    for (int i = 0; i < m.T(); ++i)
      t.rows.push_back({snr, i + 1, e.analytic[i], e.mean[i], e.stderr_[i], (e.mean[i] - e.analytic[i]) / e.stderr_[i]});
  }
  if (c.format == "json") c.format = "csv";
  Emitter(c, "simulate").emit_table(t);
  return 0;
}

// Cross-module identities; returns the number of failures.
int run_validate(Common& c) {
  std::vector<SpectralModel> models;
  if (!c.model_path.empty()) {
    models.push_back(need_model(c));
  } else {
    models.push_back(SpectralModel::scalar_gauss_markov(0.9));
    models.push_back(SpectralModel::block_gauss_markov(2, 0.5, 0.8));
    models.push_back(SpectralModel::constant_within_block(3, SpectralModel::scalar(flat_spectrum())));
    models.push_back(SpectralModel::constant_within_block(2, SpectralModel::scalar_gauss_markov(0.6)));
    models.push_back(example5_model(0.8));
  }
  Table t;
  t.columns = {"model", "check", "value", "tolerance", "pass"};
  int failures = 0;
  auto record = [&](const SpectralModel& m, const std::string& name, double value, double tol, bool pass) {
    t.rows.push_back({m.kind_name() + " T=" + std::to_string(m.T()), name, value, tol, pass});
    if (!pass) ++failures;
  };
  for (const auto& m : models) {
    SigmaOptions so;
    so.quad = quad(c);
    const double snr = 5.0;
    const PredictionSummary ps = per_symbol_sigmas(m, snr, 256, so);
    const bool regular = std::isfinite(ps.logdet_sigma_snr);
    record(m, "ldl_vs_logdet", ps.ldl_gap, 1e-4, regular && ps.ldl_gap < 1e-4);
    const BoundPoint bp = bound_point(m, 100.0, 5.0, 64, quad(c));
    record(m, "lower_le_upper", bp.upper.value - bp.lower.value, 0.0, bp.lower.value <= bp.upper.value);
    if (const auto* cw = std::get_if<kind::ConstantWithinBlock>(&m.kind())) {
      double closed = kInf;
      if (const auto* g = std::get_if<kind::BlockGaussMarkov>(&cw->base->kind()))
        closed = cp_block_gauss_markov(cw->T, 2.0, g->rho1);
      else if (const auto* sp = cw->base->scalar_piecewise(); sp && sp->segments().size() == 1)
        closed = cp_block_indep_constant(cw->T, 2.0);
      if (std::isfinite(closed)) {
        const double d = std::abs(cp_scan(m, 2.0, quad(c)).cp - closed);
        record(m, "scan_vs_closed_form", d, 1e-6, d < 1e-6);
      }
    }
  }
  if (c.format == "json" && c.output.empty()) c.format = "csv";
  Emitter(c, "validate").emit_table(t);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-stationary noncoherent fading toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Common c;
  if (const char* env = std::getenv("BLOCKFADE_TOL")) {
    try {
      c.tol = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "error: BLOCKFADE_TOL must be a number\n";
      return 2;
    }
  }

  int grid = 1024, rank_grid = kRankGrid, history = 64, n = 0, restarts = 8, paths = 10000, len = 0, sim_history = -1;
  std::uint64_t seed = 1;
  bool ladder = false;
  std::string xmin = "auto", closed_form = "auto", m1, m2, arcs, tau_text, rate_text, offset_text, channel;
  double lo = 1e-6, hi = 1e8, r = 1.0, pe = 0.0, e1 = 1e-8, e2 = 1e-4, a1 = 0.3, a2 = 0.6;

  auto* se = app.add_subcommand("spectrum-eval", "Evaluate S(e^{j omega}) on a midpoint grid");
  add_common(se, c, true, false);
  se->add_option("--grid", grid, "Grid points");

  auto* pl = app.add_subcommand("prelog", "Pre-log by rank measure and by log-det slope");
  add_common(pl, c, true, true);
  pl->add_option("--grid", rank_grid, "Rank-profile grid points");

  auto* fn = app.add_subcommand("fading-number", "Fading number of a regular process");
  add_common(fn, c, true, false);

  auto* bd = app.add_subcommand("bounds", "Capacity lower and upper bounds");
  add_common(bd, c, true, true);
  bd->add_option("--xmin", xmin, "Pilot amplitude x_min or 'auto' (sqrt(snr)/2)");
  bd->add_option("--history", history, "Finite history for T > 1");

  auto* tl = app.add_subcommand("two-level", "Two-level spectrum bounds");
  add_common(tl, c, false, true);
  tl->add_option("--eps1", e1);
  tl->add_option("--eps2", e2);
  tl->add_option("--a1", a1);
  tl->add_option("--a2", a2);

  auto* cp = app.add_subcommand("cp", "Capacity per unit energy by subset scan");
  add_common(cp, c, true, true);
  cp->add_option("--closed-form", closed_form, "auto|none")->check(CLI::IsMember({"auto", "none"}));
  cp->add_flag("--scan", "Subset scan (always performed)");

  auto* cx = app.add_subcommand("cp-crossover", "SNR where two subsets exchange optimality");
  add_common(cx, c, true, false);
  cx->add_option("--m1", m1)->required();
  cx->add_option("--m2", m2)->required();
  cx->add_option("--lo", lo);
  cx->add_option("--hi", hi);

  auto* tu = app.add_subcommand("tau", "Transfinite diameter of an arc set");
  add_common(tu, c, false, false);
  tu->add_option("--arcs", arcs, "center:angle[,center:angle...]")->required();
  tu->add_option("--n", n, "Fekete point count (0 = closed form only)");
  tu->add_option("--restarts", restarts);
  tu->add_option("--seed", seed);
  tu->add_flag("--ladder", ladder, "Also run n = 2..N and fit the n -> infinity limit");

  auto* sc = app.add_subcommand("scaling", "Necessary codeword-length scaling");
  add_common(sc, c, false, false);
  sc->add_option("--r", r)->required();
  sc->add_option("--pe", pe)->required();
  sc->add_option("--tau", tau_text);
  sc->add_option("--arcs", arcs);

  auto* ex = app.add_subcommand("exponent", "Random-coding exponents");
  add_common(ex, c, false, true);
  ex->add_option("channel", channel, "awgn|rayleigh")->required()->check(CLI::IsMember({"awgn", "rayleigh"}));
  ex->add_option("--rate", rate_text, "Rate in nats");
  ex->add_option("--rate-offset", offset_text,
                 "awgn: R = log snr - d; rayleigh: R = log snr - log log snr - d");

  auto* sm = app.add_subcommand("simulate", "Monte-Carlo prediction variances");
  add_common(sm, c, true, true);
  sm->add_option("--paths", paths);
  sm->add_option("--len", len, "Path length in symbols (default history + T)");
  sm->add_option("--seed", seed);
  sm->add_option("--history", sim_history, "Predictor history (default len - T)");

  auto* va = app.add_subcommand("validate", "Cross-module identity suite");
  add_common(va, c, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (c.jobs > 0) omp_set_num_threads(c.jobs);
  for (const auto* sub : app.get_subcommands())
    for (const auto* opt : sub->get_options())
      if (opt->count() > 0 && !opt->get_name().empty() && opt->get_name() != "--help")
        c.params[opt->get_name()] = opt->as<std::string>();
  if (!(c.tol > 0.0)) {
    std::cerr << "error: tolerance must be positive\n";
    return 2;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "spectrum-eval") return run_spectrum_eval(c, grid);
    if (name == "prelog") return run_prelog(c, rank_grid);
    if (name == "fading-number") return run_fading_number(c);
    if (name == "bounds") return run_bounds(c, xmin, history);
    if (name == "two-level") return run_two_level(c, e1, e2, a1, a2);
    if (name == "cp") return run_cp(c, closed_form);
    if (name == "cp-crossover") return run_cp_crossover(c, m1, m2, lo, hi);
    if (name == "tau") return run_tau(c, arcs, n, restarts, seed, ladder);
    if (name == "scaling") return run_scaling(c, r, pe, tau_text, arcs);
    if (name == "exponent") return run_exponent(c, channel, rate_text, offset_text);
    if (name == "simulate") return run_simulate(c, paths, len, seed, sim_history);
    if (name == "validate") return run_validate(c);
  } catch (const ModelParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
