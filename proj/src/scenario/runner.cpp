#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hyps/quantization.hpp"
#include "hyps/regularization.hpp"
#include "hyps/scenario.hpp"
#include "symbols/symbol_json.hpp"

namespace hyps {

using nlohmann::json;

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g3(double v) { return fmt("%.3g", v); }

std::string list3(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + g3(v[i]);
  return s + "]";
}

double wrap(double x, double L) {
  double r = std::fmod(x, L);
  return r < 0.0 ? r + L : r;
}

// Pointwise value of an eps-resolved field that has one (deltas do not).
std::function<Complex(const std::array<double, 2>&)> pointwise(const FieldSpec& s, double eps,
                                                               const Grid& g) {
  const double a = s.amplitude;
  switch (s.kind) {
    case FieldSpec::Kind::kExpr: {
      Expr e = s.expr;
      return [e, a, L = g.L](const std::array<double, 2>& x) {
        SymbolPoint p;
        p.x = {wrap(x[0], L), wrap(x[1], L)};
        return a * e.eval(p);
      };
    }
    case FieldSpec::Kind::kGaussian: {
      const double sigma = s.width * std::pow(eps, s.width_exponent);
      return [=, c = s.center, dim = g.dim, L = g.L](const std::array<double, 2>& x) {
        double v = 1.0;
        for (int ax = 0; ax < dim; ++ax) {
          double acc = 0.0;
          const double y = wrap(x[ax] - c[ax] + 0.5 * L, L) - 0.5 * L;
          for (int m = -2; m <= 2; ++m) {
            const double z = y + m * L;
            acc += std::exp(-z * z / (2.0 * sigma * sigma));
          }
          v *= acc;
        }
        return Complex(a * v, 0.0);
      };
    }
    case FieldSpec::Kind::kStep:
      return [=, lo = s.lo, hi = s.hi, L = g.L](const std::array<double, 2>& x) {
        const double y = wrap(x[0] - lo, L);
        return Complex(y < hi - lo ? a : 0.0, 0.0);
      };
    case FieldSpec::Kind::kBandlimited:
      return [=, modes = s.modes, L = g.L, dim = g.dim](const std::array<double, 2>& x) {
        Complex v{0.0, 0.0};
        const double k0 = 2.0 * M_PI / L;
        for (const auto& m : modes) {
          const double ph = k0 * (m[0] * x[0] + (dim == 2 ? m[1] * x[1] : 0.0));
          v += Complex(m[2], m[3]) * std::polar(1.0, ph);
        }
        return a * v;
      };
    case FieldSpec::Kind::kDelta: break;
  }
  throw Error(ErrorKind::kInvalidArgument, "delta fields have no pointwise values");
}

SolveOptions solve_options(const ScenarioConfig& cfg) {
  SolveOptions opt;
  opt.dt = cfg.dt;
  opt.stride = cfg.stride;
  opt.norm.seed = cfg.seed;
  return opt;
}

double eps_min(const ScenarioConfig& cfg) {
  if (!cfg.sweep) return 1.0;
  const auto e = cfg.sweep->grid();
  return *std::min_element(e.begin(), e.end());
}

CauchyProblem problem_at(const ScenarioConfig& cfg, const DataSpec& data, double eps) {
  CauchyProblem p;
  p.symbol = build_family(cfg).base(eps);
  SweepData d = build_data(data, eps, cfg.grid);
  p.g = std::move(d.g);
  p.forcing = std::move(d.f);
  p.T = cfg.T;
  return p;
}

struct Solved {
  CauchyProblem problem;
  SolveResult result;
  EnergyCheck energy;
};

class Runner {
 public:
  explicit Runner(const ScenarioConfig& cfg) : cfg_(cfg), opt_(solve_options(cfg)) {}

  CheckOutcome run(const CheckSpec& c) {
    CheckOutcome o;
    o.name = c.type;
    if (c.type == "remainder") o.name += "." + c.params.at("part").get<std::string>();
    if (c.type == "ginf") o.name += c.params.at("expect").get<bool>() ? ".smooth" : ".shrinking";
    try {
      const json& p = c.params;
      if (c.type == "energy") energy(o);
      else if (c.type == "gronwall") gronwall(o);
      else if (c.type == "unitarity") unitarity(o, p);
      else if (c.type == "transport") transport(o, p);
      else if (c.type == "cascade") cascade(o, p);
      else if (c.type == "cases") cases(o);
      else if (c.type == "moderateness") moderateness(o, p);
      else if (c.type == "negligible") negligible(o, p);
      else if (c.type == "association") association(o, p);
      else if (c.type == "classical_identity") classical(o, p);
      else if (c.type == "remainder") remainder(o, p);
      else if (c.type == "ginf") ginf(o, p);
    } catch (const std::exception& e) {
      o.status = CheckStatus::kError;
      o.summary = e.what();
    }
    return o;
  }

  void write_artifacts(const std::vector<CheckOutcome>& outcomes, std::vector<std::string>& files) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg_.out_dir);
    fs::create_directories(dir);
    auto add = [&](const std::string& name) {
      files.push_back((dir / name).string());
      return files.back();
    };
    {
      std::ofstream f(add("config.json"));
      f << config_to_text(cfg_) << '\n';
    }
    const Solved& s = representative();
    write_ledger_csv(add("ledger.csv"), s.result.ledger, s.energy);
    write_trajectory(add("trajectory.bin"), s.result.trajectory);
    if (sweep_) {
      write_sweep_csv(add("sweep.csv"), *sweep_);
      std::ofstream f(add("sweep_report.json"));
      f << sweep_report_json(*sweep_) << '\n';
    }
    if (!report_rows_.empty()) {
      std::ofstream f(add("reports.csv"));
      f << "module,check,lhs,rhs,ratio,M,L\n" << std::setprecision(17);
      for (const auto& r : report_rows_) f << r << '\n';
    }
    if (!assoc_rows_.empty()) {
      std::ofstream f(add("association.csv"));
      f << "eps,probe,reference_re,reference_im,residual\n"
        << std::setprecision(17);
      for (const auto& r : assoc_rows_) f << r << '\n';
    }
    json j = json::array();
    for (const auto& o : outcomes) {
      j.push_back({{"name", o.name}, {"status", std::string(to_string(o.status))}, {"summary", o.summary}});
    }
    std::ofstream f(add("checks.json"));
    f << j.dump(2) << '\n';
  }

 private:
  static void verdict(CheckOutcome& o, bool pass, std::string summary) {
    o.status = pass ? CheckStatus::kPass : CheckStatus::kFail;
    o.summary = std::move(summary);
  }

  const Solved& representative() {
    if (!rep_) {
      Solved s;
      s.problem = problem_at(cfg_, cfg_.data, eps_min(cfg_));
      s.result = solve_fixed_eps(s.problem, opt_);
      s.energy = check_energy_estimate(s.result.ledger);
      rep_ = std::move(s);
    }
    return *rep_;
  }

  const SweepReport& sweep() {
    if (!sweep_) {
      SweepPlan plan = build_plan(cfg_);
      plan.cascade = std::any_of(cfg_.checks.begin(), cfg_.checks.end(),
                                 [](const CheckSpec& c) { return c.type == "moderateness"; });
      sweep_ = run_sweep(plan);
    }
    return *sweep_;
  }

  void energy(CheckOutcome& o) {
    if (cfg_.sweep) {
      const SweepReport& r = sweep();
      bool ok = r.complete && r.energy_pointwise;
      double worst = INFINITY;
      for (const auto& row : r.rows) {
        if (!row.ok) continue;
        ok = ok && row.C_eps_seminorm >= row.C_meas;
        worst = std::min(worst, row.C_eps_seminorm / row.C_meas);
      }
      std::string bad;
      for (const auto& row : r.rows) {
        if (!row.ok) bad = "; eps " + g3(row.eps) + " failed: " + row.error;
      }
      verdict(o, ok,
              "pointwise " + std::string(r.energy_pointwise ? "holds" : "violated") + " on " +
                  std::to_string(r.rows.size()) + " eps rows, min C_eps/C_meas " + g3(worst) + bad);
      return;
    }
    const Solved& s = representative();
    const auto& l = s.result.ledger;
    verdict(o, s.energy.pointwise_ok && s.energy.seminorm_dominates,
            "min pointwise margin " + g3(s.energy.min_pointwise_margin) + ", C_meas " + g3(l.C_meas) +
                " <= C_eps " + g3(l.C_eps_seminorm) +
                (s.energy.seminorm_dominates ? "" : " (not dominated)"));
  }

  void gronwall(CheckOutcome& o) {
    if (cfg_.sweep) {
      const SweepReport& r = sweep();
      verdict(o, r.complete && r.gronwall_consistent,
              "Gronwall bound " + std::string(r.gronwall_consistent ? "holds" : "violated") + " on " +
                  std::to_string(r.rows.size()) + " eps rows");
      return;
    }
    const Solved& s = representative();
    verdict(o, s.energy.gronwall_ok, "min Gronwall margin " + g3(s.energy.min_gronwall_margin));
  }

  void unitarity(CheckOutcome& o, const json& p) {
    const double tol = p.value("tol", 1e-10);
    const auto& l = representative().result.ledger;
    const double n0 = std::sqrt(l.u_norm_sq.front());
    double drift = 0.0;
    for (double v : l.u_norm_sq) drift = std::max(drift, std::abs(std::sqrt(v) - n0));
    const double rate = drift / (n0 > 0.0 ? n0 : 1.0) / cfg_.T;
    verdict(o, rate <= tol, "relative norm drift " + g3(rate) + " per unit time (tol " + g3(tol) + ")");
  }

  double transport_error(const std::array<double, 2>& c, const SolveOptions& opt, double* used_dt) {
    const CauchyProblem prob = problem_at(cfg_, cfg_.data, 1.0);
    const SolveResult r = solve_fixed_eps(prob, opt);
    *used_dt = r.ledger.dt;
    const auto f = pointwise(cfg_.data.g, 1.0, cfg_.grid);
    double err = 0.0;
    for (std::size_t s = 0; s < r.trajectory.states.size(); ++s) {
      const double t = r.trajectory.times[s];
      const GridFunction ex = GridFunction::sample(cfg_.grid, [&](const std::array<double, 2>& x) {
        return f({x[0] - c[0] * t, x[1] - c[1] * t});
      });
      err = std::max(err, max_abs_diff(r.trajectory.states[s], ex));
    }
    return err;
  }

  void transport(CheckOutcome& o, const json& p) {
    const auto sp = p.at("speed").get<std::vector<double>>();
    const std::array<double, 2> c{sp[0], sp.size() > 1 ? sp[1] : 0.0};
    const double tol = p.value("tol", 1e-6);
    double dt = 0.0;
    const double err = transport_error(c, opt_, &dt);
    bool ok = err <= tol;
    std::string s = "max error " + g3(err) + " at dt " + g3(dt) + " (tol " + g3(tol) + ")";
    if (p.contains("dts")) {
      const auto dts = p.at("dts").get<std::vector<double>>();
      const double base = p.value("ratio", 16.0);
      const double rtol = p.value("ratio_tol", 0.2);
      const double floor = p.value("floor", 1e-12);
      std::vector<double> errs, ratios;
      for (double h : dts) {
        SolveOptions q = opt_;
        q.dt = h;
        double used = 0.0;
        errs.push_back(transport_error(c, q, &used));
      }
      int judged = 0;
      for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        if (errs[i + 1] < floor) break;
        const double expect = std::pow(base, std::log2(dts[i] / dts[i + 1]));
        const double r = errs[i] / errs[i + 1];
        ratios.push_back(r);
        ++judged;
        ok = ok && std::abs(r / expect - 1.0) <= rtol;
      }
      ok = ok && judged > 0;
      s += "; dt-refinement errors " + list3(errs) + ", ratios " + list3(ratios);
    }
    verdict(o, ok, s);
  }

  void cascade(CheckOutcome& o, const json& p) {
    const int max_order = p.value("max_order", 3);
    const Solved& s = representative();
    const auto ledgers = derivative_cascade(s.problem, s.result, max_order, opt_);
    bool ok = true;
    double worst = 0.0;
    for (const auto& c : ledgers) {
      ok = ok && c.bound_ok;
      for (std::size_t i = 0; i < c.v_norm_sq.size(); ++i) {
        if (c.bound_rhs[i] > 0.0) worst = std::max(worst, c.v_norm_sq[i] / c.bound_rhs[i]);
      }
    }
    verdict(o, ok,
            std::to_string(ledgers.size()) + " derivative orders, max |d^a u|^2 / bound " + g3(worst) +
                (cfg_.sweep ? " at eps " + g3(eps_min(cfg_)) : ""));
  }

  void cases(CheckOutcome& o) {
    const Solved& s = representative();
    const CaseReport r = check_case_variants(s.problem, s.result, opt_);
    o.status = CheckStatus::kReport;
    o.asserting = false;
    std::string t = "C_meas " + g3(s.result.ledger.C_meas) + "; case a " + g3(r.C_case_a) +
                    (r.case_a_dominates ? " dominates" : " does not dominate");
    if (r.case_b_tagged) {
      t += "; case b " + g3(r.C_case_b) + (r.case_b_dominates ? " dominates" : " does not dominate");
    }
    if (r.case_c_applicable) {
      t += "; case c " + g3(r.C_case_c) + (r.case_c_dominates ? " dominates" : " does not dominate");
    }
    if (!r.note.empty()) t += "; " + r.note;
    o.summary = t;
  }

  void moderateness(CheckOutcome& o, const json& p) {
    const int max_alpha = p.value("max_alpha", 3);
    const SweepReport& r = sweep();
    bool ok = r.complete && r.c_meas_fit.is_log_type &&
              r.c_meas_fit.residual < cfg_.thresholds.log_type_residual;
    std::vector<double> nh, np;
    for (const auto& f : r.fits) {
      if (f.order.d != 0 || order_of(f.order.alpha) > max_alpha) continue;
      ok = ok && f.finite && f.below_prediction;
      nh.push_back(f.N_hat);
      np.push_back(f.N_pred);
    }
    verdict(o, ok,
            "C_meas ~ " + g3(r.c_meas_fit.fitted_coeff) + " log(1/eps) + " + g3(r.c_meas_fit.intercept) +
                " (residual " + g3(r.c_meas_fit.residual) + "); N_hat " + list3(nh) + " <= N_pred " +
                list3(np));
  }

  void negligible(CheckOutcome& o, const json& p) {
    const int q_max = p.value("q_max", 10);
    const NegligibleVerdict v = check_negligible(sweep(), q_max);
    verdict(o, v.negligible,
            v.negligible ? "eps^-q max_t |u| non-increasing for every q <= " + std::to_string(q_max)
                         : "q-decay fails at q = " + std::to_string(v.failed_q));
  }

  void association(CheckOutcome& o, const json& p) {
    SweepPlan plan = build_plan(cfg_);
    plan.cascade = false;
    std::vector<Probe> probes;
    std::vector<GridFunction> probe_values;
    for (std::size_t i = 0; i < p.at("probes").size(); ++i) {
      const json& pr = p.at("probes")[i];
      FieldSpec f;
      f.kind = FieldSpec::Kind::kGaussian;
      const auto c = pr.at("center").get<std::vector<double>>();
      f.center = {c[0], c.size() > 1 ? c[1] : 0.0};
      f.width = pr.at("width").get<double>();
      probes.push_back({"probe" + std::to_string(i), pointwise(f, 1.0, cfg_.grid)});
    }
    AssociationReference ref;
    const std::string kind = p.value("reference", std::string("high_resolution"));
    if (kind == "exact_transport") {
      const auto sp = p.at("speed").get<std::vector<double>>();
      const auto& x0 = cfg_.data.g.center;
      std::array<double, 2> xt{x0[0] + sp[0] * cfg_.T, x0[1] + (sp.size() > 1 ? sp[1] : 0.0) * cfg_.T};
      std::vector<Complex> ex;
      for (const auto& pr : probes) ex.push_back(cfg_.data.g.amplitude * std::conj(pr.phi(xt)));
      ref.exact_pairings = ex;
    } else {
      ref = high_resolution_reference(plan, p.value("factor", 4));
    }
    const double ttol = p.value("terminal_tol", 1e-2);
    const AssociationReport a = check_association(plan, probes, ref, ttol);
    for (std::size_t j = 0; j < probes.size(); ++j) {
      for (std::size_t i = 0; i < a.eps.size(); ++i) {
        const Complex rv = a.reference_pairings[j];
        std::ostringstream row;
        row << std::setprecision(17) << a.eps[i] << ',' << probes[j].name << ',' << rv.real() << ','
            << rv.imag() << ',' << a.residuals[j][i];
        assoc_rows_.push_back(row.str());
      }
    }
    std::vector<double> last;
    for (const auto& r : a.residuals) last.push_back(r.back());
    verdict(o, a.nonincreasing_tail && a.terminal_ok,
            std::string("residuals ") + (a.nonincreasing_tail ? "non-increasing" : "not monotone") +
                " over the last 3 eps; terminal " + list3(last) + " (tol " + g3(ttol) + ")");
  }

  void classical(CheckOutcome& o, const json& p) {
    const double tol = p.value("tol", 1e-10);
    DataSpec gen = cfg_.data;
    if (p.contains("data")) {
      gen = DataSpec{};
      gen.g = parse_field_spec(p.at("data").at("g"), "$.data.g", cfg_.grid.dim);
    }
    DataSpec cls = gen;
    cls.g.mollify = false;
    for (auto& t : cls.f) t.phi.mollify = false;
    SolveOptions q = opt_;
    q.compute_seminorm = false;
    const CauchyProblem pc = problem_at(cfg_, cls, 1.0);
    const SolveResult rc = solve_fixed_eps(pc, q);
    double worst = 0.0;
    for (double eps : cfg_.sweep->grid()) {
      const SolveResult rg = solve_fixed_eps(problem_at(cfg_, gen, eps), q);
      for (std::size_t s = 0; s < rg.trajectory.states.size(); ++s) {
        worst = std::max(worst, max_abs_diff(rg.trajectory.states[s], rc.trajectory.states[s]));
      }
    }
    verdict(o, worst <= tol,
            "max |u_eps - u| " + g3(worst) + " over " + std::to_string(cfg_.sweep->count) +
                " eps (tol " + g3(tol) + ")");
  }

  void remainder(CheckOutcome& o, const json& p) {
    const std::string part = p.at("part").get<std::string>();
    const SymbolExpr s{expr_from_json(p.at("symbol"), "$.symbol"), 1.0, 1};
    Grid g = cfg_.grid;
    g.M = p.value("M", g.M);
    g.L = p.value("L", g.L);
    const double tol = p.value("tol", 0.0);
    OscIntConfig oc;
    auto row = [&](const std::string& check, double lhs, double rhs, double ratio, int M) {
      std::ostringstream r;
      r << std::setprecision(17) << "quantization," << check << ',' << lhs << ',' << rhs << ',' << ratio
        << ',' << M << ',' << g.L;
      report_rows_.push_back(r.str());
    };
    // a*(x_j, xi_k) from the columns of the dense adjoint.
    auto dense_adjoint = [&](int k) {
      const Eigen::MatrixXcd A = op_matrix(s, 0.0, g).adjoint();
      const double xi = g.frequency(k);
      Eigen::VectorXcd e(g.M);
      for (int j = 0; j < g.M; ++j) e[j] = std::polar(1.0, xi * g.node(j));
      const Eigen::VectorXcd v = A * e;
      std::vector<Complex> out(g.M);
      for (int j = 0; j < g.M; ++j) out[j] = v[j] * std::polar(1.0, -xi * g.node(j));
      return out;
    };
    if (part == "x_independent") {
      if (s.expr.depends_on_any_x()) {
        verdict(o, false, "symbol depends on x");
        return;
      }
      double quad = 0.0, dense = 0.0;
      const Eigen::MatrixXcd A = op_matrix(s, 0.0, g).adjoint();
      for (int k = 0; k < g.M; ++k) {
        const double xi = g.frequency(k);
        Eigen::VectorXcd e(g.M);
        for (int j = 0; j < g.M; ++j) e[j] = std::polar(1.0, xi * g.node(j));
        const Eigen::VectorXcd v = A * e;
        for (int j = 0; j < g.M; ++j) {
          const double x = g.node(j);
          const Complex a = std::conj(s.expr.eval({0.0, {x, 0.0}, {xi, 0.0}}));
          dense = std::max(dense, std::abs(v[j] * std::polar(1.0, -xi * x) - a));
          quad = std::max(quad, std::abs(adjoint_symbol_remainder(s, 0.0, {x, 0.0}, {xi, 0.0}, oc).value));
        }
      }
      row("remainder_x_independent", std::max(quad, dense), tol, 0.0, g.M);
      verdict(o, quad <= tol && dense <= tol,
              "max |remainder| " + g3(quad) + ", dense-adjoint max |a* - conj a| " + g3(dense) +
                  " (tol " + g3(tol) + ")");
    } else if (part == "oracle") {
      int k0 = 0;
      const auto ad = dense_adjoint(k0);
      double err = 0.0, ref = 0.0;
      for (int j = 0; j < g.M; ++j) {
        const double x = g.node(j);
        const Complex oracle = ad[j] - std::conj(s.expr.eval({0.0, {x, 0.0}, {0.0, 0.0}}));
        const Complex r = adjoint_symbol_remainder(s, 0.0, {x, 0.0}, {0.0, 0.0}, oc).value;
        err = std::max(err, std::abs(r - oracle));
        ref = std::max(ref, std::abs(oracle));
      }
      const double rel = ref > 0.0 ? err / ref : err;
      row("remainder_oracle", err, ref, rel, g.M);
      verdict(o, rel <= tol, "relative error vs dense adjoint at xi = 0: " + g3(rel) + " (tol " + g3(tol) + ")");
    } else if (part == "stability") {
      const SamplingBox box = SamplingBox::for_domain(1, g.L, g.M, 1024.0, 1.0);
      const RemainderEstimate e0 = check_remainder_estimate(s, {0, 0}, {0, 0}, oc, box);
      OscIntConfig th = oc;
      th.theta_nodes *= 2;
      OscIntConfig bx = oc;
      bx.y_half *= 1.5;
      bx.eta_half *= 1.5;
      const RemainderEstimate e1 = check_remainder_estimate(s, {0, 0}, {0, 0}, th, box);
      const RemainderEstimate e2 = check_remainder_estimate(s, {0, 0}, {0, 0}, bx, box);
      const double d = std::max(std::abs(e1.ratio / e0.ratio - 1.0), std::abs(e2.ratio / e0.ratio - 1.0));
      row("remainder_estimate", e0.lhs, e0.rhs_seminorm, e0.ratio, g.M);
      row("remainder_estimate_theta", e1.lhs, e1.rhs_seminorm, e1.ratio, g.M);
      row("remainder_estimate_box", e2.lhs, e2.rhs_seminorm, e2.ratio, g.M);
      verdict(o, std::isfinite(d) && d <= tol,
              "ratio " + g3(e0.ratio) + " (theta x2: " + g3(e1.ratio) + ", box x1.5: " + g3(e2.ratio) +
                  "), max relative change " + g3(d) + " (tol " + g3(tol) + ")");
    } else {
      const auto Ms = p.value("Ms", std::vector<int>{64, 128, 256});
      NormOptions no;
      no.method = NormMethod::kAuto;
      no.seed = cfg_.seed;
      std::vector<double> v;
      for (int M : Ms) {
        Grid gm = g;
        gm.M = M;
        v.push_back(adjoint_defect_norm(s, 0.0, gm, no).value);
        row("adjoint_defect", v.back(), 0.0, 0.0, M);
      }
      const double factor = *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
      verdict(o, factor <= tol, "defect norms " + list3(v) + ", max/min " + fmt("%.4f", factor) +
                                    " (tol " + g3(tol) + ")");
    }
  }

  void ginf(CheckOutcome& o, const json& p) {
    const bool expect = p.at("expect").get<bool>();
    ScenarioConfig c = cfg_;
    if (p.contains("data")) c.data.g = parse_field_spec(p.at("data").at("g"), "$.data.g", cfg_.grid.dim);
    SweepPlan plan = build_plan(c);
    GinfOptions go;
    go.cap = p.value("cap", go.cap);
    go.slack = p.value("slack", go.slack);
    plan.orders = orders_up_to(c.grid.dim, go.cap);
    plan.cascade = false;
    const SweepReport r = run_sweep(plan);
    const GinfVerdict v = check_ginf(plan, r, go);
    verdict(o, v.is_ginf == expect,
            std::string("is_ginf ") + (v.is_ginf ? "true" : "false") + " (expected " +
                (expect ? "true" : "false") + "), p_hat " + g3(v.p_hat) + ", max N_hat " + g3(v.max_N) +
                " at d=" + std::to_string(v.worst.d) + " |alpha|=" + std::to_string(order_of(v.worst.alpha)));
  }

  const ScenarioConfig& cfg_;
  SolveOptions opt_;
  std::optional<Solved> rep_;
  std::optional<SweepReport> sweep_;
  std::vector<std::string> report_rows_;
  std::vector<std::string> assoc_rows_;
};

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "PASS";
    case CheckStatus::kFail: return "FAIL";
    case CheckStatus::kReport: return "REPORT";
    case CheckStatus::kError: return "ERROR";
  }
  return "ERROR";
}

GridFunction build_field(const FieldSpec& s, double eps, const Grid& g) {
  GridFunction u;
  if (s.kind == FieldSpec::Kind::kDelta) {
    std::vector<Complex> c(g.size());
    const double vol = std::pow(g.L, g.dim);
    const Mollifier moll{g.dim, 1.0};
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto f = g.frequency_point(i);
      c[i] = s.amplitude / vol * std::polar(1.0, -(f[0] * s.center[0] + f[1] * s.center[1])) *
             moll.fourier_profile(eps * std::hypot(f[0], f[1]));
    }
    return from_fourier(g, c);
  }
  u = GridFunction::sample(g, pointwise(s, eps, g));
  if (s.mollify) u = embed_data(u, eps, g);
  return u;
}

SweepData build_data(const DataSpec& s, double eps, const Grid& g) {
  SweepData d;
  d.g = build_field(s.g, eps, g);
  for (const auto& t : s.f) {
    d.f.tau.push_back(t.tau);
    d.f.phi.push_back(build_field(t.phi, eps, g));
  }
  switch (s.scale) {
    case DataSpec::Scale::kNone: d.log_scale = 0.0; break;
    case DataSpec::Scale::kNegligible: d.log_scale = -1.0 / eps; break;
    case DataSpec::Scale::kPower: d.log_scale = s.scale_power * std::log(eps); break;
  }
  return d;
}

GenSymbolFamily build_family(const ScenarioConfig& cfg) {
  GenSymbolFamily fam;
  if (cfg.sweep) fam.eps_grid = cfg.sweep->grid();
  const SymbolSpec& s = cfg.symbol;
  const int dim = cfg.grid.dim;
  if (s.kind == SymbolSpec::Kind::kRough) {
    GenSymbolFamily r = regularized_family(s.rough, s.k, fam.eps_grid);
    if (s.x_independent_outside) {
      const double R = *s.x_independent_outside;
      auto base = r.base;
      r.base = [base, R](double eps) {
        HyperbolicSymbol h = base(eps);
        h.x_independent_outside = R;
        return h;
      };
    }
    return r;
  }
  HyperbolicSymbol h;
  h.a1 = {s.a1, 1.0, dim};
  h.a0 = {s.a0, 0.0, dim};
  h.x_independent_outside = s.x_independent_outside;
  fam.base = [h](double) { return h; };
  return fam;
}

SweepPlan build_plan(const ScenarioConfig& cfg) {
  if (!cfg.sweep) throw Error(ErrorKind::kInsufficientSweep, "scenario has no sweep");
  SweepPlan plan;
  plan.family = build_family(cfg);
  const DataSpec data = cfg.data;
  const Grid grid = cfg.grid;
  plan.data = [data](double eps, const Grid& g) { return build_data(data, eps, g); };
  plan.orders = orders_up_to(cfg.grid.dim, cfg.max_order, 0);
  plan.grid = grid;
  plan.T = cfg.T;
  plan.solve = solve_options(cfg);
  plan.thresholds = cfg.thresholds;
  plan.jobs = cfg.jobs;
  return plan;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream* log) {
  validate_config(cfg);
  ScenarioResult res;
  Runner runner(cfg);
  bool failed = false, errored = false;
  for (const auto& c : cfg.checks) {
    CheckOutcome o = runner.run(c);
    if (log) *log << to_string(o.status) << ' ' << o.name << ": " << o.summary << std::endl;
    failed = failed || (o.asserting && o.status == CheckStatus::kFail);
    errored = errored || o.status == CheckStatus::kError;
    res.checks.push_back(std::move(o));
  }
  if (!cfg.out_dir.empty()) {
    try {
      runner.write_artifacts(res.checks, res.artifacts);
    } catch (const std::exception& e) {
      if (log) *log << "ERROR artifacts: " << e.what() << std::endl;
      errored = true;
    }
  }
  res.exit_code = errored ? 4 : failed ? 2 : 0;
  return res;
}

}  // namespace hyps
