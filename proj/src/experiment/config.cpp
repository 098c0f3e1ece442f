#include "qpe/experiment/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "qpe/errors.hpp"

namespace qpe::experiment {

using nlohmann::json;

const char* to_string(Model m) { return m == Model::Vmf ? "vmf" : "field"; }

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::None: return "none";
    case SweepAxis::Kappa: return "kappa";
    case SweepAxis::MBar: return "m_bar";
    case SweepAxis::DeltaSq: return "delta_sq";
    case SweepAxis::Ms: return "M_s";
    case SweepAxis::Omega1Ratio: return "omega1_ratio";
  }
  return "none";
}

const char* to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

Grid Grid::linspace(double start, double stop, std::size_t count) {
  Grid g;
  if (count == 1) return Grid{{start}};
  for (std::size_t k = 0; k < count; ++k) g.values.push_back(start + (stop - start) * k / double(count - 1));
  return g;
}

Grid Grid::logspace(double start, double stop, std::size_t count) {
  if (!(start > 0.0) || !(stop > 0.0)) raise(ErrorKind::Config, "logspace endpoints must be positive");
  Grid g;
  if (count == 1) return Grid{{start}};
  const double a = std::log(start), b = std::log(stop);
  for (std::size_t k = 0; k < count; ++k) g.values.push_back(std::exp(a + (b - a) * k / double(count - 1)));
  g.values.front() = start;
  g.values.back() = stop;
  return g;
}

bool Grid::strictly_monotone() const {
  if (values.size() < 2) return !values.empty();
  const bool up = values[1] > values[0];
  for (std::size_t k = 1; k < values.size(); ++k)
    if (up ? !(values[k] > values[k - 1]) : !(values[k] < values[k - 1])) return false;
  return true;
}

double ExperimentConfig::external_cost() const {
  double e = extra_external_cost;
  if (m_s > 0) e += thermo::state_prep_cost(env, m_s);
  if (measurement_cost) e += thermo::measurement_cost_bound(env);
  return e;
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

namespace {

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported as unknown.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_ + " must be an object");
  }

  [[noreturn]] static void fail(const std::string& msg) { raise(ErrorKind::Config, msg); }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (const json* v = find(key)) {
      try {
        out = v->get<T>();
      } catch (const json::exception&) {
        fail(path_ + "." + key + " has the wrong type");
      }
    }
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(path_ + "." + key + " must be a number");
      out = v->get<double>();
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(path_ + "." + key + " must be an integer");
      out = v->get<int>();
    }
  }

  void optional_number(const std::string& key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) out.reset();
      else if (v->is_number()) out = v->get<double>();
      else fail(path_ + "." + key + " must be a number or null");
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) out = parse_numbers(*v, path_ + "." + key);
  }

  void grid(const std::string& key, Grid& out) {
    if (const json* v = find(key)) out = parse_grid(*v, path_ + "." + key);
  }

  Reader child(const std::string& key) {
    static const json empty = json::object();
    const json* v = find(key);
    return Reader(v ? *v : empty, path_ + "." + key);
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) fail("unknown key " + path_ + "." + it.key());
  }

  static std::vector<double> parse_numbers(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(where + " must contain only numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  static Grid parse_grid(const json& v, const std::string& where) {
    if (v.is_array()) return Grid{parse_numbers(v, where)};
    Reader r(v, where);
    std::string kind = "linspace";
    double start = 0.0, stop = 0.0;
    int count = 0;
    r.get("kind", kind);
    r.number("start", start);
    r.number("stop", stop);
    r.integer("count", count);
    r.finish();
    if (count < 1) fail(where + ".count must be at least 1");
    if (kind == "linspace") return Grid::linspace(start, stop, static_cast<std::size_t>(count));
    if (kind == "logspace") {
      if (!(start > 0.0 && stop > 0.0)) fail(where + ": logspace endpoints must be positive");
      return Grid::logspace(start, stop, static_cast<std::size_t>(count));
    }
    fail(where + ".kind must be \"linspace\" or \"logspace\"");
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

SweepAxis parse_axis(const std::string& s) {
  if (s == "none") return SweepAxis::None;
  if (s == "kappa") return SweepAxis::Kappa;
  if (s == "m_bar") return SweepAxis::MBar;
  if (s == "delta_sq") return SweepAxis::DeltaSq;
  if (s == "M_s") return SweepAxis::Ms;
  if (s == "omega1_ratio") return SweepAxis::Omega1Ratio;
  raise(ErrorKind::Config, "sweep.axis must be one of none, kappa, m_bar, delta_sq, M_s, omega1_ratio");
}

json grid_json(const Grid& g) { return g.values; }

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg = default_config();
  Reader root(doc, "config");

  if (const json* m = root.find("model")) {
    if (*m == "vmf") cfg.model = Model::Vmf;
    else if (*m == "field") cfg.model = Model::Field;
    else Reader::fail("config.model must be \"vmf\" or \"field\"");
  }
  {
    Reader r = root.child("vmf");
    r.number("kappa", cfg.vmf.kappa);
    r.number("phi", cfg.vmf.phi);
    r.finish();
  }
  {
    Reader r = root.child("field");
    r.number("m_bar", cfg.field.m_bar);
    r.number("g", cfg.field.g);
    r.number("k_m", cfg.field.k_m);
    r.number("k_theta", cfg.field.k_theta);
    r.finish();
  }
  {
    Reader r = root.child("target");
    r.number("delta_sq", cfg.delta_sq);
    r.finish();
  }
  {
    Reader r = root.child("corrections");
    r.integer("M_s", cfg.m_s);
    r.integer("M_m", cfg.m_m);
    r.finish();
  }
  {
    Reader r = root.child("thermal");
    r.number("xi", cfg.env.xi);
    r.optional_number("xi_m", cfg.xi_m);
    r.number("omega0_ratio", cfg.env.omega0_ratio);
    r.number("omega1_ratio", cfg.env.omega1_ratio);
    r.finish();
  }
  {
    Reader r = root.child("external_cost");
    r.get("measurement", cfg.measurement_cost);
    r.number("extra", cfg.extra_external_cost);
    std::string counting = "effective";
    r.get("round_counting", counting);
    if (counting == "effective") cfg.round_counting = RoundCounting::Effective;
    else if (counting == "literal") cfg.round_counting = RoundCounting::Literal;
    else Reader::fail("config.external_cost.round_counting must be \"effective\" or \"literal\"");
    r.finish();
  }
  {
    Reader r = root.child("sweep");
    std::string axis = "none";
    r.get("axis", axis);
    cfg.axis = parse_axis(axis);
    r.grid("grid", cfg.grid);
    r.finish();
  }
  if (const json* n = root.find("n_max"); n && !n->is_null()) {
    if (!n->is_number_integer() || n->get<long long>() < 1) Reader::fail("config.n_max must be a positive integer or null");
    cfg.n_max = n->get<std::size_t>();
  }
  if (const json* s = root.find("seed")) {
    if (!s->is_number_unsigned()) Reader::fail("config.seed must be a nonnegative integer");
    cfg.seed = s->get<std::uint64_t>();
  }
  if (const json* s = root.find("mc_samples")) {
    if (!s->is_number_unsigned()) Reader::fail("config.mc_samples must be a nonnegative integer");
    cfg.mc_samples = s->get<std::size_t>();
  }
  if (const json* w = root.find("workers")) {
    if (!w->is_number_unsigned()) Reader::fail("config.workers must be a nonnegative integer");
    cfg.workers = w->get<unsigned>();
  }
  {
    Reader r = root.child("output");
    r.get("path", cfg.output_path);
    std::string fmt = "csv";
    r.get("format", fmt);
    if (fmt == "csv") cfg.format = Format::Csv;
    else if (fmt == "json") cfg.format = Format::Json;
    else Reader::fail("config.output.format must be \"csv\" or \"json\"");
    r.finish();
  }
  {
    Reader figs = root.child("figures");
    {
      Reader r = figs.child("fig2");
      r.numbers("kappas", cfg.fig2.kappas);
      r.number("phi", cfg.fig2.phi);
      r.numbers("phis", cfg.fig2.phis);
      r.grid("inv_kappa", cfg.fig2.inv_kappa);
      r.finish();
    }
    {
      Reader r = figs.child("fig3");
      r.numbers("gs", cfg.fig3.gs);
      r.numbers("delta_sqs", cfg.fig3.delta_sqs);
      r.grid("inv_m_bar", cfg.fig3.inv_m_bar);
      r.finish();
    }
    {
      Reader r = figs.child("fig4");
      if (const json* v = r.find("M_s")) {
        cfg.fig4.m_s.clear();
        for (double x : Reader::parse_numbers(*v, "config.figures.fig4.M_s")) {
          if (x != std::floor(x)) Reader::fail("config.figures.fig4.M_s must contain integers");
          cfg.fig4.m_s.push_back(static_cast<int>(x));
        }
      }
      r.grid("inv_m_bar", cfg.fig4.inv_m_bar);
      r.finish();
    }
    {
      Reader r = figs.child("fig5");
      r.numbers("omega1_ratios", cfg.fig5.omega1_ratios);
      r.grid("inv_m_bar", cfg.fig5.inv_m_bar);
      r.finish();
    }
    {
      Reader r = figs.child("fig7");
      r.numbers("m_bars", cfg.fig7.m_bars);
      r.numbers("gs", cfg.fig7.gs);
      r.finish();
    }
    figs.finish();
  }
  {
    Reader r = root.child("sweet_spot");
    r.number("span", cfg.sweet_spot.span);
    int count = static_cast<int>(cfg.sweet_spot.count);
    r.integer("count", count);
    if (count < 3) Reader::fail("config.sweet_spot.count must be at least 3");
    cfg.sweet_spot.count = static_cast<std::size_t>(count);
    r.number("onset_factor", cfg.sweet_spot.onset_factor);
    r.finish();
  }
  root.finish();
  return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["model"] = to_string(cfg.model);
  j["vmf"] = {{"kappa", cfg.vmf.kappa}, {"phi", cfg.vmf.phi}};
  j["field"] = {{"m_bar", cfg.field.m_bar}, {"g", cfg.field.g}, {"k_m", cfg.field.k_m}, {"k_theta", cfg.field.k_theta}};
  j["target"] = {{"delta_sq", cfg.delta_sq}};
  j["corrections"] = {{"M_s", cfg.m_s}, {"M_m", cfg.m_m}};
  j["thermal"] = {{"xi", cfg.env.xi},
                  {"xi_m", cfg.xi_m ? json(*cfg.xi_m) : json(nullptr)},
                  {"omega0_ratio", cfg.env.omega0_ratio},
                  {"omega1_ratio", cfg.env.omega1_ratio}};
  j["external_cost"] = {{"measurement", cfg.measurement_cost},
                        {"extra", cfg.extra_external_cost},
                        {"round_counting", cfg.round_counting == RoundCounting::Effective ? "effective" : "literal"}};
  j["sweep"] = {{"axis", to_string(cfg.axis)}, {"grid", grid_json(cfg.grid)}};
  j["n_max"] = cfg.n_max ? json(*cfg.n_max) : json(nullptr);
  j["seed"] = cfg.seed;
  j["mc_samples"] = cfg.mc_samples;
  j["workers"] = cfg.workers;
  j["output"] = {{"path", cfg.output_path}, {"format", to_string(cfg.format)}};
  j["figures"] = {
      {"fig2", {{"kappas", cfg.fig2.kappas}, {"phi", cfg.fig2.phi}, {"phis", cfg.fig2.phis}, {"inv_kappa", grid_json(cfg.fig2.inv_kappa)}}},
      {"fig3", {{"gs", cfg.fig3.gs}, {"delta_sqs", cfg.fig3.delta_sqs}, {"inv_m_bar", grid_json(cfg.fig3.inv_m_bar)}}},
      {"fig4", {{"M_s", cfg.fig4.m_s}, {"inv_m_bar", grid_json(cfg.fig4.inv_m_bar)}}},
      {"fig5", {{"omega1_ratios", cfg.fig5.omega1_ratios}, {"inv_m_bar", grid_json(cfg.fig5.inv_m_bar)}}},
      {"fig7", {{"m_bars", cfg.fig7.m_bars}, {"gs", cfg.fig7.gs}}},
  };
  j["sweet_spot"] = {{"span", cfg.sweet_spot.span}, {"count", cfg.sweet_spot.count}, {"onset_factor", cfg.sweet_spot.onset_factor}};
  return j;
}

std::string Diagnostics::to_text() const {
  std::ostringstream os;
  for (const auto& e : errors) os << "error: " << e << "\n";
  for (const auto& w : warnings) os << "warning: " << w << "\n";
  if (errors.empty()) os << "ok\n";
  return os.str();
}

json Diagnostics::to_json() const { return json{{"ok", ok()}, {"errors", errors}, {"warnings", warnings}}; }

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_positive(Diagnostics& d, double v, const std::string& name) {
  if (!(v > 0.0) || !std::isfinite(v)) d.errors.push_back(name + " must be positive and finite (got " + num(v) + ")");
}

void check_grid(Diagnostics& d, const Grid& g, const std::string& name, bool positive) {
  if (g.values.empty()) {
    d.errors.push_back(name + " is empty");
    return;
  }
  if (!g.strictly_monotone()) d.errors.push_back(name + " is not strictly monotone");
  if (positive)
    for (double v : g.values)
      if (!(v > 0.0) || !std::isfinite(v)) {
        d.errors.push_back(name + " contains a non-positive value (" + num(v) + ")");
        break;
      }
}

void check_list(Diagnostics& d, const std::vector<double>& v, const std::string& name) {
  if (v.empty()) d.errors.push_back(name + " is empty");
  for (double x : v)
    if (!(x > 0.0) || !std::isfinite(x)) {
      d.errors.push_back(name + " contains a non-positive value (" + num(x) + ")");
      break;
    }
}

void field_warnings(Diagnostics& d, const std::vector<double>& m_bars, double g, const std::string& where) {
  std::size_t low = 0, strong = 0;
  double worst_m = INFINITY;
  for (double m : m_bars) {
    if (m < 100.0) ++low, worst_m = std::min(worst_m, m);
    if (g * g / m > 0.1) ++strong;
  }
  if (low) d.warnings.push_back(where + ": " + std::to_string(low) + " m_bar value(s) below 100 (lowest " + num(worst_m) +
                                ") fall outside the semiclassical regime");
  if (strong) d.warnings.push_back(where + ": " + std::to_string(strong) + " point(s) with g^2/m_bar > 0.1 at g = " + num(g));
}

}  // namespace

Diagnostics validate_config(const ExperimentConfig& cfg) {
  Diagnostics d;
  check_positive(d, cfg.vmf.kappa, "vmf.kappa");
  if (!std::isfinite(cfg.vmf.phi)) d.errors.push_back("vmf.phi must be finite");
  check_positive(d, cfg.field.m_bar, "field.m_bar");
  check_positive(d, cfg.field.k_m, "field.k_m");
  check_positive(d, cfg.field.k_theta, "field.k_theta");
  if (!std::isfinite(cfg.field.g)) d.errors.push_back("field.g must be finite");
  else if (cfg.field.g == 0.0) d.errors.push_back("field.g must be nonzero");
  check_positive(d, cfg.delta_sq, "target.delta_sq");

  if (cfg.m_s < 0) d.errors.push_back("corrections.M_s must be nonnegative");
  if (cfg.m_m < 0) d.errors.push_back("corrections.M_m must be nonnegative");
  check_positive(d, cfg.env.xi, "thermal.xi");
  if (cfg.xi_m) check_positive(d, *cfg.xi_m, "thermal.xi_m");
  check_positive(d, cfg.env.omega0_ratio, "thermal.omega0_ratio");
  check_positive(d, cfg.env.omega1_ratio, "thermal.omega1_ratio");
  if (!(cfg.extra_external_cost >= 0.0)) d.errors.push_back("external_cost.extra must be nonnegative");
  if (d.ok() && cfg.m_m > 0 && !(cfg.corrections().measurement_factor() > 0.0))
    d.errors.push_back("corrections.M_m = " + std::to_string(cfg.m_m) +
                       " leaves the pointer too hot: 2 gamma_m - 1 <= 0, the measurement carries no information");

  if (cfg.n_max && *cfg.n_max < 1) d.errors.push_back("n_max must be at least 1");
  if (cfg.mc_samples != 0 && cfg.mc_samples < 10'000) d.errors.push_back("mc_samples must be 0 or at least 10000");

  if (cfg.axis != SweepAxis::None) {
    const bool positive = cfg.axis != SweepAxis::Ms;
    check_grid(d, cfg.grid, "sweep.grid", positive);
    if (cfg.axis == SweepAxis::Ms)
      for (double v : cfg.grid.values)
        if (v < 0.0 || v != std::floor(v)) {
          d.errors.push_back("sweep.grid for M_s must contain nonnegative integers");
          break;
        }
    if (cfg.axis == SweepAxis::Kappa && cfg.model != Model::Vmf) d.errors.push_back("sweep.axis kappa requires model vmf");
    if ((cfg.axis == SweepAxis::MBar) && cfg.model != Model::Field) d.errors.push_back("sweep.axis m_bar requires model field");
    if (cfg.axis == SweepAxis::Omega1Ratio && !cfg.measurement_cost)
      d.warnings.push_back("sweep over omega1_ratio has no effect unless external_cost.measurement is true");
  }

  check_list(d, cfg.fig2.kappas, "figures.fig2.kappas");
  check_list(d, cfg.fig2.phis, "figures.fig2.phis");
  check_grid(d, cfg.fig2.inv_kappa, "figures.fig2.inv_kappa", true);
  check_list(d, cfg.fig3.gs, "figures.fig3.gs");
  check_list(d, cfg.fig3.delta_sqs, "figures.fig3.delta_sqs");
  check_grid(d, cfg.fig3.inv_m_bar, "figures.fig3.inv_m_bar", true);
  if (cfg.fig4.m_s.empty()) d.errors.push_back("figures.fig4.M_s is empty");
  for (int m : cfg.fig4.m_s)
    if (m < 1) {
      d.errors.push_back("figures.fig4.M_s values must be at least 1");
      break;
    }
  check_grid(d, cfg.fig4.inv_m_bar, "figures.fig4.inv_m_bar", true);
  check_list(d, cfg.fig5.omega1_ratios, "figures.fig5.omega1_ratios");
  check_grid(d, cfg.fig5.inv_m_bar, "figures.fig5.inv_m_bar", true);
  check_list(d, cfg.fig7.m_bars, "figures.fig7.m_bars");
  check_list(d, cfg.fig7.gs, "figures.fig7.gs");
  if (!(cfg.sweet_spot.span > 1.0)) d.errors.push_back("sweet_spot.span must exceed 1");
  if (!(cfg.sweet_spot.onset_factor > 1.0)) d.errors.push_back("sweet_spot.onset_factor must exceed 1");

  if (cfg.model == Model::Field && d.ok()) {
    std::vector<double> m_bars{cfg.field.m_bar};
    if (cfg.axis == SweepAxis::MBar) m_bars = cfg.grid.values;
    field_warnings(d, m_bars, cfg.field.g, "field model");
  }
  return d;
}

void require_valid(const ExperimentConfig& cfg) {
  const Diagnostics d = validate_config(cfg);
  if (d.ok()) return;
  std::string msg = "invalid configuration:";
  for (const auto& e : d.errors) msg += "\n  " + e;
  raise(ErrorKind::Config, msg);
}

}  // namespace qpe::experiment
