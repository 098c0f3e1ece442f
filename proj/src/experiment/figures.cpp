#include "qpe/experiment/figures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "qpe/errors.hpp"
#include "qpe/experiment/parallel.hpp"

namespace qpe::experiment {
namespace {

using Row = std::vector<Cell>;
using Rows = std::vector<Row>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Cell count(std::size_t n) { return static_cast<long long>(n); }

// Fills cells by column name so row builders stay readable.
class RowBuilder {
 public:
  explicit RowBuilder(const std::vector<Column>& cols) : cols_(cols), cells_(cols.size()) {}

  RowBuilder& set(const std::string& name, Cell v) {
    for (std::size_t k = 0; k < cols_.size(); ++k)
      if (cols_[k].name == name) {
        cells_[k] = std::move(v);
        return *this;
      }
    raise(ErrorKind::Structure, "no column named " + name);
  }
  Row take() { return std::move(cells_); }

 private:
  const std::vector<Column>& cols_;
  Row cells_;
};

std::optional<std::string> status_of(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Unattainable: return "unattainable";
    case ErrorKind::RealEigenvalues: return "real_eigenvalues";
    case ErrorKind::NonInformative: return "non_informative";
    default: return std::nullopt;
  }
}

// Runs fn and records "ok" or the flagged error in the status column. Errors
// that are not row-level conditions propagate.
template <class Fn>
void guarded(RowBuilder& b, Fn&& fn) {
  try {
    fn();
    b.set("status", std::string("ok"));
  } catch (const Error& e) {
    const auto s = status_of(e);
    if (!s) throw;
    b.set("status", *s);
  }
}

Column c_status() { return {"status", "", "status", "ok, unattainable, real_eigenvalues or non_informative"}; }
Column c_validity() { return {"outside_validity", "", "", "m_bar < 100 or g^2/m_bar > 0.1"}; }

std::vector<double> reciprocals(const Grid& g) {
  std::vector<double> out;
  for (double v : g.values) out.push_back(1.0 / v);
  return out;
}

Table make_table(std::string name, std::vector<Column> cols, const std::vector<Rows>& blocks) {
  Table t{std::move(name), std::move(cols), {}};
  for (const auto& block : blocks)
    for (const auto& row : block) t.add_row(row);
  return t;
}

struct Plans {
  RawComplexity raw;
  TrueComplexity truec;
  OptimalResource opt;
  OptimalResource opt_literal;
  ResourceBreakdown r_nc;
  ResourceBreakdown r_nc_literal;
};

Plans plan_all(std::span<const double> f, const Target& t, double energy_per_gate, double e_ext) {
  const Planner planner(f);
  Plans p;
  p.raw = planner.raw_complexity(t);
  p.truec = planner.true_complexity(t);
  p.opt = planner.optimal_resource(t, energy_per_gate, e_ext, RoundCounting::Effective);
  p.opt_literal = planner.optimal_resource(t, energy_per_gate, e_ext, RoundCounting::Literal);
  p.r_nc = resource_of_plan(p.truec.plan, energy_per_gate, e_ext, RoundCounting::Effective);
  p.r_nc_literal = resource_of_plan(p.truec.plan, energy_per_gate, e_ext, RoundCounting::Literal);
  return p;
}

std::vector<std::string> collect_warnings(const ExperimentConfig& cfg) { return validate_config(cfg).warnings; }

Result make_result(const ExperimentConfig& cfg, std::string subcommand) {
  Result r;
  r.subcommand = std::move(subcommand);
  r.config = to_json(cfg);
  r.warnings = collect_warnings(cfg);
  return r;
}

}  // namespace

FieldPoint evaluate_field(const FieldParams& p, std::optional<std::size_t> n_max) {
  FieldPoint out;
  out.params = p;
  out.integrals = field_integrals(p);
  out.channel = field_channel(p);
  const std::size_t n = n_max.value_or(default_n_max(n_opt_estimate_field(p)));
  out.series = sequence_qfi(out.channel, BlochVector(0.0, 0.0, 1.0), n, "field");
  return out;
}

VmfPoint evaluate_vmf(const VmfParams& p, std::optional<std::size_t> n_max) {
  VmfPoint out;
  out.params = p;
  out.channel = vmf_channel(p);
  out.lambdas = covariant_lambdas(out.channel);
  const double est = out.lambdas.perp < 1.0 ? n_opt_estimate_vmf(out.lambdas.perp) : kNaN;
  const std::size_t n = n_max.value_or(default_n_max(est));
  out.series = sequence_qfi(out.channel, BlochVector(1.0, 0.0, 0.0), n, "vmf");
  return out;
}

PlateauScan scan_plateau(const FieldParams& base, const Target& t, const SweetSpotOptions& opt, double e_ext,
                         std::optional<std::size_t> n_max, unsigned workers) {
  PlateauScan scan;
  scan.analytic = sweet_spot(base.g, t, base.k_m, base.k_theta);
  const double m0 = scan.analytic.m_bar0;
  scan.m_bars = Grid::logspace(m0 / opt.span, m0 * opt.span, opt.count).values;

  struct Point {
    double resource = kNaN;
    std::size_t gates = 0;
  };
  const auto points = parallel_map<Point>(scan.m_bars.size(), workers, [&](std::size_t i) {
    FieldParams p = base;
    p.m_bar = scan.m_bars[i];
    const FieldPoint fp = evaluate_field(p, n_max);
    const Planner planner(fp.series.values());
    const TrueComplexity tc = planner.true_complexity(t);
    return Point{resource_of_plan(tc.plan, p.m_bar, e_ext).total, tc.gates};
  });
  for (const auto& pt : points) {
    scan.resource.push_back(pt.resource);
    scan.gates.push_back(pt.gates);
  }

  std::vector<double> low(scan.resource.begin(), scan.resource.begin() + static_cast<std::ptrdiff_t>(scan.m_bars.size() / 3));
  std::sort(low.begin(), low.end());
  const std::size_t n = low.size();
  scan.plateau_median = n % 2 ? low[n / 2] : 0.5 * (low[n / 2 - 1] + low[n / 2]);

  scan.onset_m_bar = kNaN;
  for (std::size_t i = 0; i < scan.m_bars.size(); ++i)
    if (scan.resource[i] > opt.onset_factor * scan.plateau_median) {
      scan.onset_m_bar = scan.m_bars[i];
      break;
    }
  return scan;
}

// F_N / N curves for the vMF gate, and complexity against 1/kappa.
Result run_fig2(const ExperimentConfig& cfg) {
  Result res = make_result(cfg, "fig2");
  const auto& o = cfg.fig2;

  const std::vector<Column> qfi_cols{
      {"kappa", "1", "\\kappa", "vMF concentration"},
      {"phi", "rad", "\\phi", "encoded phase"},
      {"N", "count", "N", "steps in the sequence"},
      {"F_N", "1", "F_N", "exact QFI after N steps"},
      {"F_N_over_N", "1", "F_N/N", "QFI per step"},
      {"F_N_approx", "1", "F_N^{approx}", "N^2 lambda^(2N-2) (lambda^2 + dlambda^2)"},
      {"F_N_approx_over_N", "1", "F_N^{approx}/N", "approximate QFI per step"},
  };
  const std::vector<Column> peak_cols{
      {"kappa", "1", "\\kappa", "vMF concentration"},
      {"phi", "rad", "\\phi", "encoded phase"},
      {"lambda_perp", "1", "\\lambda_\\perp", "transverse contraction of the gate"},
      {"lambda_par", "1", "\\lambda_\\parallel", "longitudinal contraction of the gate"},
      {"dlambda_perp", "1", "\\partial_\\phi\\lambda_\\perp", "phase derivative of lambda_perp"},
      {"rotation_angle", "rad", "", "rotation angle of the transverse block"},
      {"n_opt_estimate", "count", "-1/(2 ln \\lambda_\\perp)", "estimated peak of F_N/N"},
      {"argmax_F_over_N", "count", "N_{opt}", "exact peak of F_N/N"},
      {"F_at_argmax", "1", "F_{N_{opt}}", "QFI at the exact peak"},
      {"n_max", "count", "N_{max}", "length of the computed series"},
  };

  struct Curve {
    Rows qfi;
    Row peak;
  };
  const auto curves = parallel_map<Curve>(o.kappas.size(), cfg.workers, [&](std::size_t i) {
    const VmfPoint vp = evaluate_vmf(VmfParams{o.kappas[i], o.phi}, cfg.n_max);
    Curve c;
    const auto f = vp.series.values();
    for (std::size_t n = 1; n <= f.size(); ++n) {
      const double approx = sequence_qfi_approx_vmf(vp.lambdas.perp, vp.lambdas.dperp_dphi, n);
      RowBuilder b(qfi_cols);
      b.set("kappa", o.kappas[i]).set("phi", o.phi).set("N", count(n)).set("F_N", f[n - 1]);
      b.set("F_N_over_N", f[n - 1] / n).set("F_N_approx", approx).set("F_N_approx_over_N", approx / n);
      c.qfi.push_back(b.take());
    }
    const std::size_t arg = vp.series.argmax_per_step();
    RowBuilder b(peak_cols);
    b.set("kappa", o.kappas[i]).set("phi", o.phi).set("lambda_perp", vp.lambdas.perp);
    b.set("lambda_par", vp.lambdas.par).set("dlambda_perp", vp.lambdas.dperp_dphi);
    b.set("rotation_angle", vp.lambdas.rotation_angle);
    b.set("n_opt_estimate", vp.lambdas.perp < 1.0 ? n_opt_estimate_vmf(vp.lambdas.perp) : kNaN);
    b.set("argmax_F_over_N", count(arg)).set("F_at_argmax", vp.series.at(arg)).set("n_max", count(f.size()));
    c.peak = b.take();
    return c;
  });

  std::vector<Rows> qfi_blocks;
  Rows peak_rows;
  for (const auto& c : curves) {
    qfi_blocks.push_back(c.qfi);
    peak_rows.push_back(c.peak);
  }

  const std::vector<Column> cx_cols{
      {"phi", "rad", "\\phi", "encoded phase"},
      {"inv_kappa", "1", "1/\\kappa", "implementation error"},
      {"kappa", "1", "\\kappa", "vMF concentration"},
      {"delta_sq", "rad^2", "\\delta^2", "target variance"},
      {"lambda_perp", "1", "\\lambda_\\perp", "transverse contraction of the gate"},
      {"n_opt", "count", "N_{opt}", "argmin of N/F_N"},
      {"c", "count", "c", "raw complexity"},
      {"C", "count", "C", "true complexity"},
      {"N_C", "count", "N_C", "steps per round of the complexity-optimal plan"},
      {"Q_C", "count", "Q_N", "full rounds of the complexity-optimal plan"},
      {"N0_C", "count", "N_0", "tail-round steps of the complexity-optimal plan"},
      c_status(),
  };
  const std::vector<double> kappas = reciprocals(o.inv_kappa);
  const std::size_t nk = kappas.size();
  const Target target(cfg.delta_sq);
  const auto cx = parallel_map<Row>(o.phis.size() * nk, cfg.workers, [&](std::size_t idx) {
    const double phi = o.phis[idx / nk];
    const double kappa = kappas[idx % nk];
    RowBuilder b(cx_cols);
    b.set("phi", phi).set("inv_kappa", o.inv_kappa.values[idx % nk]).set("kappa", kappa).set("delta_sq", cfg.delta_sq);
    guarded(b, [&] {
      const VmfPoint vp = evaluate_vmf(VmfParams{kappa, phi}, cfg.n_max);
      const Planner planner(vp.series.values());
      const RawComplexity raw = planner.raw_complexity(target);
      const TrueComplexity tc = planner.true_complexity(target);
      b.set("lambda_perp", vp.lambdas.perp).set("n_opt", count(raw.n_opt)).set("c", raw.c);
      b.set("C", count(tc.gates)).set("N_C", count(tc.steps)).set("Q_C", count(tc.plan.full_rounds));
      b.set("N0_C", count(tc.plan.tail_steps));
    });
    return b.take();
  });

  res.tables.push_back(make_table("qfi", qfi_cols, qfi_blocks));
  res.tables.push_back(make_table("peaks", peak_cols, {peak_rows}));
  res.tables.push_back(make_table("complexity", cx_cols, {cx}));
  return res;
}

namespace {

const std::vector<Column>& fig3_columns() {
  static const std::vector<Column> cols{
      {"g", "1", "g", "coupling"},
      {"delta_sq", "rad^2", "\\delta^2", "target variance"},
      {"inv_m_bar", "1/photon", "1/\\bar{m}", "implementation error"},
      {"m_bar", "photon", "\\bar{m}", "mean photon number, energy per gate"},
      {"r", "1", "r", "modulus of the rotating-block eigenvalues"},
      {"n_opt_estimate", "count", "\\bar{m}/\\Delta", "estimated peak of F_N/N"},
      {"n_opt", "count", "N_{opt}", "argmin of N/F_N"},
      {"c", "count", "c", "raw complexity"},
      {"C", "count", "C", "true complexity"},
      {"N_C", "count", "N_C", "steps per round of the complexity-optimal plan"},
      {"Q_C", "count", "Q_N", "full rounds"},
      {"N0_C", "count", "N_0", "tail-round steps"},
      {"R", "photon", "R", "total resource of the complexity-optimal plan"},
      {"R_raw", "photon", "c\\bar{m}", "raw-complexity gate energy"},
      {"m_bar0", "photon", "\\bar{m}_0", "analytic sweet spot"},
      {"R0", "photon", "R_0", "analytic plateau resource"},
      c_validity(),
      c_status(),
  };
  return cols;
}

Row fig3_row(const ExperimentConfig& cfg, double g, double delta_sq, double inv_m, const FieldPoint* fp,
             const std::optional<Error>& point_error) {
  const auto& cols = fig3_columns();
  const double m_bar = 1.0 / inv_m;
  FieldParams p = cfg.field;
  p.g = g;
  p.m_bar = m_bar;
  RowBuilder b(cols);
  b.set("g", g).set("delta_sq", delta_sq).set("inv_m_bar", inv_m).set("m_bar", m_bar);
  b.set("outside_validity", p.outside_validity());
  const Target t(delta_sq);
  const SweetSpot ss = sweet_spot(g, t, p.k_m, p.k_theta);
  b.set("m_bar0", ss.m_bar0).set("R0", ss.r0);
  guarded(b, [&] {
    if (point_error) throw *point_error;
    const Planner planner(fp->series.values());
    const RawComplexity raw = planner.raw_complexity(t);
    const TrueComplexity tc = planner.true_complexity(t);
    b.set("r", fp->integrals.r).set("n_opt_estimate", n_opt_estimate_field(p)).set("n_opt", count(raw.n_opt));
    b.set("c", raw.c).set("C", count(tc.gates)).set("N_C", count(tc.steps)).set("Q_C", count(tc.plan.full_rounds));
    b.set("N0_C", count(tc.plan.tail_steps));
    b.set("R", resource_of_plan(tc.plan, m_bar, cfg.external_cost(), cfg.round_counting).total);
    b.set("R_raw", raw.c * m_bar);
  });
  return b.take();
}

// Evaluates the field model once per m_bar and hands each point to `rows`,
// which may emit several rows; point-level errors are passed along instead
// of thrown so the caller can flag them.
template <class RowsFn>
std::vector<Rows> per_m_bar(const ExperimentConfig& cfg, double g, const Grid& inv_grid, RowsFn&& rows) {
  return parallel_map<Rows>(inv_grid.values.size(), cfg.workers, [&](std::size_t i) {
    const double inv_m = inv_grid.values[i];
    FieldParams p = cfg.field;
    p.g = g;
    p.m_bar = 1.0 / inv_m;
    std::optional<FieldPoint> fp;
    std::optional<Error> err;
    try {
      fp = evaluate_field(p, cfg.n_max);
    } catch (const Error& e) {
      if (!status_of(e)) throw;
      err = e;
    }
    return rows(inv_m, fp ? &*fp : nullptr, err);
  });
}

// Rows from per_m_bar come back grouped by grid point; regroup them so the
// k-th row of every point forms one contiguous curve.
std::vector<Rows> transpose(const std::vector<Rows>& by_point, std::size_t curves) {
  std::vector<Rows> out(curves);
  for (const auto& rows : by_point)
    for (std::size_t k = 0; k < curves; ++k) out[k].push_back(rows[k]);
  return out;
}

}  // namespace

// Resource against 1/m_bar for several g and several delta^2, plus the sweet
// spot curve.
Result run_fig3(const ExperimentConfig& cfg) {
  Result res = make_result(cfg, "fig3");
  const auto& o = cfg.fig3;

  std::vector<Rows> by_g;
  for (double g : o.gs) {
    const auto blocks = per_m_bar(cfg, g, o.inv_m_bar, [&](double inv_m, const FieldPoint* fp, const std::optional<Error>& err) {
      return Rows{fig3_row(cfg, g, cfg.delta_sq, inv_m, fp, err)};
    });
    for (auto& r : transpose(blocks, 1)) by_g.push_back(std::move(r));
  }
  res.tables.push_back(make_table("resource", fig3_columns(), by_g));

  const double g = cfg.field.g;
  const auto blocks = per_m_bar(cfg, g, o.inv_m_bar, [&](double inv_m, const FieldPoint* fp, const std::optional<Error>& err) {
    Rows rows;
    for (double d : o.delta_sqs) rows.push_back(fig3_row(cfg, g, d, inv_m, fp, err));
    return rows;
  });
  res.tables.push_back(make_table("delta", fig3_columns(), transpose(blocks, o.delta_sqs.size())));

  const std::vector<Column> ss_cols{
      {"g", "1", "g", "coupling"},
      {"delta_sq", "rad^2", "\\delta^2", "target variance"},
      {"m_bar0", "photon", "\\bar{m}_0", "analytic sweet spot"},
      {"C0", "count", "C_0", "complexity at the sweet spot"},
      {"R0", "photon", "R_0", "plateau resource"},
      {"plateau_median", "photon", "", "median R over the low-m_bar third of the scan"},
      {"onset_m_bar", "photon", "", "first m_bar where R exceeds onset_factor times the plateau median"},
      {"onset_ratio", "1", "", "onset_m_bar / m_bar0"},
  };
  Rows ss_rows;
  for (double d : o.delta_sqs) {
    FieldParams p = cfg.field;
    const PlateauScan scan = scan_plateau(p, Target(d), cfg.sweet_spot, cfg.external_cost(), cfg.n_max, cfg.workers);
    RowBuilder b(ss_cols);
    b.set("g", p.g).set("delta_sq", d).set("m_bar0", scan.analytic.m_bar0).set("C0", scan.analytic.c0);
    b.set("R0", scan.analytic.r0).set("plateau_median", scan.plateau_median).set("onset_m_bar", scan.onset_m_bar);
    b.set("onset_ratio", scan.onset_m_bar / scan.analytic.m_bar0);
    ss_rows.push_back(b.take());
  }
  res.tables.push_back(make_table("sweet_spot", ss_cols, {ss_rows}));
  return res;
}

// Resource with state-preparation cooling, exact and through the raw
// complexity, for several M_s.
Result run_fig4(const ExperimentConfig& cfg) {
  Result res = make_result(cfg, "fig4");
  const auto& o = cfg.fig4;
  const std::vector<Column> cols{
      {"M_s", "count", "M_s", "cooling qubits per round"},
      {"gamma_s", "1", "\\gamma", "probe purity after cooling"},
      {"w_bar", "photon", "\\bar{w}", "work per cooling qubit"},
      {"inv_m_bar", "1/photon", "1/\\bar{m}", "implementation error"},
      {"m_bar", "photon", "\\bar{m}", "mean photon number"},
      {"external_cost", "photon", "E_{ext}", "external cost per round"},
      {"C", "count", "C", "true complexity"},
      {"N_C", "count", "N_C", "steps per round, complexity-optimal"},
      {"rounds_C", "count", "", "rounds charged, complexity-optimal"},
      {"R_NC", "photon", "R_{N_C}", "total resource, complexity-optimal plan"},
      {"N_R", "count", "N_R", "steps per round, resource-optimal"},
      {"rounds_R", "count", "", "rounds charged, resource-optimal"},
      {"R_NR", "photon", "R_{N_R}", "total resource, resource-optimal plan"},
      {"cooling_energy", "photon", "", "cooling work of the resource-optimal plan"},
      {"R_approx", "photon", "R^{approx}", "raw-complexity estimate of the total cost"},
      c_validity(),
      c_status(),
  };
  const double g = cfg.field.g;
  const Target t(cfg.delta_sq);
  const double w_bar = thermo::work_per_qubit(cfg.env);
  const auto blocks = per_m_bar(cfg, g, o.inv_m_bar, [&](double inv_m, const FieldPoint* fp, const std::optional<Error>& err) {
    Rows rows;
    for (int ms : o.m_s) {
      ExperimentConfig local = cfg;
      local.m_s = ms;
      const double m_bar = 1.0 / inv_m;
      FieldParams p = cfg.field;
      p.m_bar = m_bar;
      const double e_ext = local.external_cost();
      RowBuilder b(cols);
      b.set("M_s", static_cast<long long>(ms)).set("gamma_s", thermo::purity_gamma(ms, cfg.env.xi)).set("w_bar", w_bar);
      b.set("inv_m_bar", inv_m).set("m_bar", m_bar).set("external_cost", e_ext).set("outside_validity", p.outside_validity());
      guarded(b, [&] {
        if (err) throw *err;
        const QfiSeries corrected = apply_corrections(fp->series, local.corrections());
        const Plans pl = plan_all(corrected.values(), t, m_bar, e_ext);
        const auto rc = pl.truec.plan.rounds(cfg.round_counting);
        const auto& opt = cfg.round_counting == RoundCounting::Effective ? pl.opt : pl.opt_literal;
        b.set("C", count(pl.truec.gates)).set("N_C", count(pl.truec.steps)).set("rounds_C", count(rc));
        b.set("R_NC", resource_of_plan(pl.truec.plan, m_bar, e_ext, cfg.round_counting).total);
        b.set("N_R", count(opt.steps)).set("rounds_R", count(opt.resource.rounds)).set("R_NR", opt.resource.total);
        b.set("cooling_energy", static_cast<double>(opt.resource.rounds) * w_bar * ms);
        b.set("R_approx", approx_resource_with_cooling(m_bar, g, t, ms, cfg.env.xi, w_bar, p.k_m, p.k_theta));
      });
      rows.push_back(b.take());
    }
    return rows;
  });
  res.tables.push_back(make_table("resource", cols, transpose(blocks, o.m_s.size())));
  return res;
}

// R_{N_C} against R_{N_R} with a measurement cost per round.
Result run_fig5(const ExperimentConfig& cfg) {
  Result res = make_result(cfg, "fig5");
  const auto& o = cfg.fig5;
  const std::vector<Column> cols{
      {"omega1_ratio", "1", "\\omega_1/\\omega", "pointer frequency ratio"},
      {"inv_m_bar", "1/photon", "1/\\bar{m}", "implementation error"},
      {"m_bar", "photon", "\\bar{m}", "mean photon number"},
      {"external_cost", "photon", "E_{ext}", "external cost per round"},
      {"C", "count", "C", "true complexity"},
      {"N_C", "count", "N_C", "steps per round, complexity-optimal"},
      {"Q_C", "count", "Q_{N_C}", "full rounds, complexity-optimal"},
      {"N0_C", "count", "N_0", "tail steps, complexity-optimal"},
      {"rounds_C", "count", "", "rounds charged, complexity-optimal"},
      {"R_NC", "photon", "R_{N_C}", "total resource, complexity-optimal plan"},
      {"N_R", "count", "N_R", "steps per round, resource-optimal"},
      {"Q_R", "count", "Q_{N_R}", "full rounds, resource-optimal"},
      {"N0_R", "count", "N_0", "tail steps, resource-optimal"},
      {"rounds_R", "count", "", "rounds charged, resource-optimal"},
      {"R_NR", "photon", "R_{N_R}", "total resource, resource-optimal plan"},
      {"gap", "photon", "R_{N_C}-R_{N_R}", "resource saved by optimising the total cost"},
      {"same_rounds", "", "", "both plans charge the same number of rounds"},
      {"R_NC_literal", "photon", "", "R_{N_C} charging Q+1 rounds always"},
      {"R_NR_literal", "photon", "", "R_{N_R} charging Q+1 rounds always"},
      c_validity(),
      c_status(),
  };
  const double g = cfg.field.g;
  const Target t(cfg.delta_sq);
  const auto blocks = per_m_bar(cfg, g, o.inv_m_bar, [&](double inv_m, const FieldPoint* fp, const std::optional<Error>& err) {
    Rows rows;
    for (double w1 : o.omega1_ratios) {
      ExperimentConfig local = cfg;
      local.env.omega1_ratio = w1;
      local.measurement_cost = true;
      const double e_ext = local.external_cost();
      const double m_bar = 1.0 / inv_m;
      FieldParams p = cfg.field;
      p.m_bar = m_bar;
      RowBuilder b(cols);
      b.set("omega1_ratio", w1).set("inv_m_bar", inv_m).set("m_bar", m_bar).set("external_cost", e_ext);
      b.set("outside_validity", p.outside_validity());
      guarded(b, [&] {
        if (err) throw *err;
        const QfiSeries corrected = apply_corrections(fp->series, local.corrections());
        const Plans pl = plan_all(corrected.values(), t, m_bar, e_ext);
        const bool literal = cfg.round_counting == RoundCounting::Literal;
        const auto& opt = literal ? pl.opt_literal : pl.opt;
        const auto& rnc = literal ? pl.r_nc_literal : pl.r_nc;
        b.set("C", count(pl.truec.gates)).set("N_C", count(pl.truec.steps)).set("Q_C", count(pl.truec.plan.full_rounds));
        b.set("N0_C", count(pl.truec.plan.tail_steps)).set("rounds_C", count(rnc.rounds)).set("R_NC", rnc.total);
        b.set("N_R", count(opt.steps)).set("Q_R", count(opt.plan.full_rounds)).set("N0_R", count(opt.plan.tail_steps));
        b.set("rounds_R", count(opt.resource.rounds)).set("R_NR", opt.resource.total);
        b.set("gap", rnc.total - opt.resource.total).set("same_rounds", rnc.rounds == opt.resource.rounds);
        b.set("R_NC_literal", pl.r_nc_literal.total).set("R_NR_literal", pl.opt_literal.resource.total);
      });
      rows.push_back(b.take());
    }
    return rows;
  });
  res.tables.push_back(make_table("resource", cols, transpose(blocks, o.omega1_ratios.size())));
  return res;
}

// Exact against approximate F_N / N for the field gate.
Result run_fig7(const ExperimentConfig& cfg) {
  Result res = make_result(cfg, "fig7");
  const auto& o = cfg.fig7;
  const std::vector<Column> qfi_cols{
      {"m_bar", "photon", "\\bar{m}", "mean photon number"},
      {"g", "1", "g", "coupling"},
      {"N", "count", "N", "steps"},
      {"F_N", "1", "F_N", "exact QFI"},
      {"F_N_over_N", "1", "F_N/N", "exact QFI per step"},
      {"F_N_approx", "1", "N^2 r^{2N}", "approximate QFI with r = 1 - Delta/(2 m_bar)"},
      {"F_N_approx_over_N", "1", "", "approximate QFI per step"},
      {"rel_error", "1", "", "|F_N - approx| / F_N"},
  };
  const std::vector<Column> peak_cols{
      {"m_bar", "photon", "\\bar{m}", "mean photon number"},
      {"g", "1", "g", "coupling"},
      {"r", "1", "r", "exact eigenvalue modulus"},
      {"r_approx", "1", "1-\\Delta/(2\\bar{m})", "large-m_bar eigenvalue modulus"},
      {"n_opt_estimate", "count", "\\bar{m}/\\Delta", "estimated peak of F_N/N"},
      {"n_opt_log_r", "count", "-1/(2 ln r)", "peak estimate from the exact r"},
      {"argmax_F_over_N", "count", "N_{opt}", "exact peak of F_N/N"},
      {"max_rel_error", "1", "", "largest rel_error for N <= 2 round(m_bar/Delta)"},
      c_validity(),
      c_status(),
  };
  struct Curve {
    Rows qfi;
    Row peak;
  };
  const std::size_t ng = o.gs.size();
  const auto curves = parallel_map<Curve>(o.m_bars.size() * ng, cfg.workers, [&](std::size_t idx) {
    FieldParams p = cfg.field;
    p.m_bar = o.m_bars[idx / ng];
    p.g = o.gs[idx % ng];
    Curve c;
    RowBuilder pb(peak_cols);
    pb.set("m_bar", p.m_bar).set("g", p.g).set("outside_validity", p.outside_validity());
    guarded(pb, [&] {
      const FieldPoint fp = evaluate_field(p, cfg.n_max);
      const double est = n_opt_estimate_field(p);
      const std::size_t window = 2 * static_cast<std::size_t>(std::lround(est));
      const auto f = fp.series.values();
      double worst = 0.0;
      for (std::size_t n = 1; n <= f.size(); ++n) {
        const double approx = sequence_qfi_approx_field(p, n);
        const double rel = std::abs(f[n - 1] - approx) / f[n - 1];
        if (n <= window) worst = std::max(worst, rel);
        RowBuilder b(qfi_cols);
        b.set("m_bar", p.m_bar).set("g", p.g).set("N", count(n)).set("F_N", f[n - 1]).set("F_N_over_N", f[n - 1] / n);
        b.set("F_N_approx", approx).set("F_N_approx_over_N", approx / n).set("rel_error", rel);
        c.qfi.push_back(b.take());
      }
      pb.set("r", fp.integrals.r).set("r_approx", 1.0 - fp.integrals.delta / (2.0 * p.m_bar));
      pb.set("n_opt_estimate", est).set("n_opt_log_r", -1.0 / (2.0 * std::log(fp.integrals.r)));
      pb.set("argmax_F_over_N", count(fp.series.argmax_per_step())).set("max_rel_error", worst);
    });
    c.peak = pb.take();
    return c;
  });
  std::vector<Rows> qfi_blocks;
  Rows peaks;
  for (const auto& c : curves) {
    qfi_blocks.push_back(c.qfi);
    peaks.push_back(c.peak);
  }
  res.tables.push_back(make_table("qfi", qfi_cols, qfi_blocks));
  res.tables.push_back(make_table("peaks", peak_cols, {peaks}));
  return res;
}

namespace {

std::vector<Column> sweep_columns(bool with_mc) {
  std::vector<Column> cols{
      {"index", "count", "", "grid position"},
      {"model", "", "", "vmf or field"},
      {"kappa", "1", "\\kappa", "vMF concentration"},
      {"phi", "rad", "\\phi", "vMF phase"},
      {"m_bar", "photon", "\\bar{m}", "mean photon number"},
      {"g", "1", "g", "coupling"},
      {"k_m", "1", "k_m", "photon-number spread coefficient"},
      {"k_theta", "1", "k_\\theta", "phase spread coefficient"},
      {"delta_sq", "rad^2", "\\delta^2", "target variance"},
      {"M_s", "count", "M_s", "state-preparation cooling qubits"},
      {"M_m", "count", "M_m", "pointer cooling qubits"},
      {"xi", "1", "\\xi", "k_B T0 / hbar omega0"},
      {"omega1_ratio", "1", "\\omega_1/\\omega", "pointer frequency ratio"},
      {"correction_factor", "1", "\\gamma_s^2(2\\gamma_m-1)", "QFI scale from imperfect preparation and measurement"},
      {"energy_per_gate", "photon", "\\bar{m}", "m_bar for the field gate; 1 (gate units) for the vMF gate"},
      {"external_cost", "photon", "E_{ext}", "external cost per round"},
      {"contraction", "1", "\\lambda_\\perp | r", "lambda_perp (vMF) or r (field)"},
      {"n_opt_estimate", "count", "", "-1/(2 ln lambda_perp) or m_bar/Delta"},
      {"n_max", "count", "N_{max}", "series length"},
      {"argmax_F_over_N", "count", "", "exact peak of F_N/N"},
      {"n_opt", "count", "N_{opt}", "argmin of N/F_N"},
      {"F_n_opt", "1", "F_{N_{opt}}", "corrected QFI at N_opt"},
      {"c", "count", "c", "raw complexity"},
      {"C", "count", "C", "true complexity"},
      {"N_C", "count", "N_C", "steps per round, complexity-optimal"},
      {"Q_C", "count", "", "full rounds, complexity-optimal"},
      {"N0_C", "count", "", "tail steps, complexity-optimal"},
      {"rounds_C", "count", "", "rounds charged, complexity-optimal"},
      {"R_NC", "photon", "R_{N_C}", "total resource, complexity-optimal plan"},
      {"gate_energy_C", "photon", "", "gate energy, complexity-optimal plan"},
      {"external_energy_C", "photon", "", "external energy, complexity-optimal plan"},
      {"N_R", "count", "N_R", "steps per round, resource-optimal"},
      {"Q_R", "count", "", "full rounds, resource-optimal"},
      {"N0_R", "count", "", "tail steps, resource-optimal"},
      {"rounds_R", "count", "", "rounds charged, resource-optimal"},
      {"R_NR", "photon", "R_{N_R}", "total resource, resource-optimal plan"},
      {"gate_energy_R", "photon", "", "gate energy, resource-optimal plan"},
      {"external_energy_R", "photon", "", "external energy, resource-optimal plan"},
      {"R_NC_literal", "photon", "", "R_{N_C} charging Q+1 rounds always"},
      {"R_NR_literal", "photon", "", "R_{N_R} charging Q+1 rounds always"},
      {"N_R_literal", "count", "", "resource-optimal steps charging Q+1 rounds always"},
      {"m_bar0", "photon", "\\bar{m}_0", "analytic sweet spot (field)"},
      {"C0", "count", "C_0", "complexity at the sweet spot (field)"},
      {"R0", "photon", "R_0", "plateau resource (field)"},
      c_validity(),
      c_status(),
  };
  if (with_mc) {
    cols.push_back({"mc_max_abs_dev", "1", "", "largest |quadrature - Monte-Carlo| entry of the gate map"});
    cols.push_back({"mc_max_z", "1", "", "largest deviation in Monte-Carlo standard errors"});
  }
  return cols;
}

ExperimentConfig at_grid_point(const ExperimentConfig& cfg, double v) {
  ExperimentConfig c = cfg;
  switch (cfg.axis) {
    case SweepAxis::None: break;
    case SweepAxis::Kappa: c.vmf.kappa = v; break;
    case SweepAxis::MBar: c.field.m_bar = v; break;
    case SweepAxis::DeltaSq: c.delta_sq = v; break;
    case SweepAxis::Ms: c.m_s = static_cast<int>(v); break;
    case SweepAxis::Omega1Ratio: c.env.omega1_ratio = v; break;
  }
  return c;
}

void mc_columns(RowBuilder& b, const ChannelWithDerivative& ch, const McEstimate& mc) {
  const Mat3 dev = (ch.map.matrix() - mc.mean.matrix()).cwiseAbs();
  double z = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (mc.standard_error(i, j) > 0.0) z = std::max(z, dev(i, j) / mc.standard_error(i, j));
  b.set("mc_max_abs_dev", dev.maxCoeff()).set("mc_max_z", z);
}

}  // namespace

Result run_sweep(const ExperimentConfig& cfg) {
  Result res = make_result(cfg, "sweep");
  const bool with_mc = cfg.mc_samples > 0;
  const std::vector<Column> cols = sweep_columns(with_mc);
  const std::vector<double> grid = cfg.axis == SweepAxis::None ? std::vector<double>{0.0} : cfg.grid.values;

  const auto rows = parallel_map<Row>(grid.size(), cfg.workers, [&](std::size_t i) {
    const ExperimentConfig c = at_grid_point(cfg, grid[i]);
    const bool field = c.model == Model::Field;
    RowBuilder b(cols);
    b.set("index", count(i)).set("model", std::string(to_string(c.model))).set("delta_sq", c.delta_sq);
    if (field) {
      b.set("m_bar", c.field.m_bar).set("g", c.field.g).set("k_m", c.field.k_m).set("k_theta", c.field.k_theta);
      b.set("outside_validity", c.field.outside_validity());
    } else {
      b.set("kappa", c.vmf.kappa).set("phi", c.vmf.phi);
    }
    b.set("M_s", static_cast<long long>(c.m_s)).set("M_m", static_cast<long long>(c.m_m)).set("xi", c.env.xi);
    b.set("omega1_ratio", c.env.omega1_ratio);
    const double e_ext = c.external_cost();
    const double per_gate = field ? c.field.m_bar : 1.0;
    b.set("energy_per_gate", per_gate).set("external_cost", e_ext);
    guarded(b, [&] {
      const Target t(c.delta_sq);
      QfiSeries series;
      McOptions mc_opt{c.mc_samples, c.seed + i, PhotonStatistics::Gaussian, 1};
      if (field) {
        const FieldPoint fp = evaluate_field(c.field, c.n_max);
        series = fp.series;
        b.set("contraction", fp.integrals.r).set("n_opt_estimate", n_opt_estimate_field(c.field));
        const SweetSpot ss = sweet_spot(c.field.g, t, c.field.k_m, c.field.k_theta);
        b.set("m_bar0", ss.m_bar0).set("C0", ss.c0).set("R0", ss.r0);
        if (with_mc) mc_columns(b, fp.channel, mc_channel_oracle(c.field, mc_opt));
      } else {
        const VmfPoint vp = evaluate_vmf(c.vmf, c.n_max);
        series = vp.series;
        b.set("contraction", vp.lambdas.perp);
        if (vp.lambdas.perp < 1.0) b.set("n_opt_estimate", n_opt_estimate_vmf(vp.lambdas.perp));
        if (with_mc) mc_columns(b, vp.channel, mc_channel_oracle(c.vmf, mc_opt));
      }
      b.set("n_max", count(series.n_max())).set("argmax_F_over_N", count(series.argmax_per_step()));
      const CorrectionSpec spec = c.corrections();
      b.set("correction_factor", spec.factor());
      const QfiSeries corrected = apply_corrections(series, spec);
      const Plans pl = plan_all(corrected.values(), t, per_gate, e_ext);
      const bool literal = c.round_counting == RoundCounting::Literal;
      const auto& opt = literal ? pl.opt_literal : pl.opt;
      const auto& rnc = literal ? pl.r_nc_literal : pl.r_nc;
      b.set("n_opt", count(pl.raw.n_opt)).set("F_n_opt", corrected.at(pl.raw.n_opt)).set("c", pl.raw.c);
      b.set("C", count(pl.truec.gates)).set("N_C", count(pl.truec.steps)).set("Q_C", count(pl.truec.plan.full_rounds));
      b.set("N0_C", count(pl.truec.plan.tail_steps)).set("rounds_C", count(rnc.rounds)).set("R_NC", rnc.total);
      b.set("gate_energy_C", rnc.gate_energy).set("external_energy_C", rnc.external_energy);
      b.set("N_R", count(opt.steps)).set("Q_R", count(opt.plan.full_rounds)).set("N0_R", count(opt.plan.tail_steps));
      b.set("rounds_R", count(opt.resource.rounds)).set("R_NR", opt.resource.total);
      b.set("gate_energy_R", opt.resource.gate_energy).set("external_energy_R", opt.resource.external_energy);
      b.set("R_NC_literal", pl.r_nc_literal.total).set("R_NR_literal", pl.opt_literal.resource.total);
      b.set("N_R_literal", count(pl.opt_literal.steps));
    });
    return b.take();
  });
  res.tables.push_back(make_table("sweep", cols, {rows}));
  return res;
}

Result run_sweet_spot(const ExperimentConfig& cfg) {
  if (cfg.model != Model::Field) raise(ErrorKind::Config, "sweet-spot requires the field model");
  Result res = make_result(cfg, "sweet-spot");
  const Target t(cfg.delta_sq);
  const PlateauScan scan = scan_plateau(cfg.field, t, cfg.sweet_spot, cfg.external_cost(), cfg.n_max, cfg.workers);

  const std::vector<Column> sum_cols{
      {"g", "1", "g", "coupling"},
      {"delta_sq", "rad^2", "\\delta^2", "target variance"},
      {"k_m", "1", "k_m", "photon-number spread coefficient"},
      {"k_theta", "1", "k_\\theta", "phase spread coefficient"},
      {"m_bar0", "photon", "\\bar{m}_0", "analytic sweet spot"},
      {"C0", "count", "C_0", "complexity at the sweet spot"},
      {"R0", "photon", "R_0", "plateau resource"},
      {"plateau_median", "photon", "", "median R over the low-m_bar third of the scan"},
      {"onset_m_bar", "photon", "", "first m_bar where R exceeds onset_factor times the plateau median"},
      {"onset_ratio", "1", "", "onset_m_bar / m_bar0"},
      {"onset_factor", "1", "", "threshold factor used for the onset"},
  };
  RowBuilder b(sum_cols);
  b.set("g", cfg.field.g).set("delta_sq", cfg.delta_sq).set("k_m", cfg.field.k_m).set("k_theta", cfg.field.k_theta);
  b.set("m_bar0", scan.analytic.m_bar0).set("C0", scan.analytic.c0).set("R0", scan.analytic.r0);
  b.set("plateau_median", scan.plateau_median).set("onset_m_bar", scan.onset_m_bar);
  b.set("onset_ratio", scan.onset_m_bar / scan.analytic.m_bar0).set("onset_factor", cfg.sweet_spot.onset_factor);
  res.tables.push_back(make_table("summary", sum_cols, {{b.take()}}));

  const std::vector<Column> curve_cols{
      {"m_bar", "photon", "\\bar{m}", "mean photon number"},
      {"inv_m_bar", "1/photon", "1/\\bar{m}", "implementation error"},
      {"C", "count", "C", "true complexity"},
      {"R", "photon", "R_{N_C}", "total resource of the complexity-optimal plan"},
      {"R_over_median", "1", "", "R / plateau_median"},
  };
  Rows curve;
  for (std::size_t i = 0; i < scan.m_bars.size(); ++i) {
    RowBuilder cb(curve_cols);
    cb.set("m_bar", scan.m_bars[i]).set("inv_m_bar", 1.0 / scan.m_bars[i]).set("C", count(scan.gates[i]));
    cb.set("R", scan.resource[i]).set("R_over_median", scan.resource[i] / scan.plateau_median);
    curve.push_back(cb.take());
  }
  res.tables.push_back(make_table("curve", curve_cols, {curve}));
  return res;
}

}  // namespace qpe::experiment
