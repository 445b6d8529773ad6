#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "hyps/asymptotics.hpp"

namespace hyps {

GinfVerdict check_ginf(const SweepPlan& plan, const SweepReport& report, const GinfOptions& opt) {
  const int dim = plan.grid.dim;
  for (const auto& want : orders_up_to(dim, opt.cap)) {
    bool found = false;
    for (const auto& have : report.orders) found = found || have == want;
    if (!found) {
      throw Error(ErrorKind::kInsufficientOrders,
                  "report lacks order d=" + std::to_string(want.d) + " |alpha|=" +
                      std::to_string(order_of(want.alpha)) + " below cap " + std::to_string(opt.cap));
    }
  }
  // Gate: slow-scale, log-type symbol family.
  SamplingBox box = default_box(plan.grid, plan.T);
  const auto slow = classify_slow_scale(plan.family, SymbolPart::kA1, 0, opt.gate_k, opt.gate_l, box,
                                        plan.thresholds);
  const auto logt = classify_log_type(plan.family, SymbolPart::kA1, 1.0, opt.gate_k, opt.gate_l, box,
                                      plan.thresholds);
  if (!slow.is_slow_scale || !logt.is_log_type) {
    throw Error(ErrorKind::kNotApplicable,
                std::string("symbol family fails the slow-scale log-type gate (") +
                    (slow.is_slow_scale ? "" : "not slow scale, largest p = " +
                                                   std::to_string(slow.largest_p)) +
                    (logt.is_log_type ? "" : " not log-type") + ")");
  }
  if (!report.complete) throw Error(ErrorKind::kInsufficientSweep, "sweep has failed rows");
  GinfVerdict v;
  v.gate_passed = true;
  double n00 = NAN;
  v.max_N = -INFINITY;
  for (const auto& f : report.fits) {
    if (f.order.total() > opt.cap) continue;
    if (!f.finite) throw Error(ErrorKind::kNonFinite, "non-finite exponent in sweep report");
    if (f.order == DerivativeOrder{0, {0, 0}}) n00 = f.N_hat;
    if (f.N_hat > v.max_N) {
      v.max_N = f.N_hat;
      v.worst = f.order;
    }
  }
  v.p_hat = n00 + 1.0;
  v.is_ginf = v.max_N <= v.p_hat + opt.slack;
  return v;
}

namespace {

nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

nlohmann::json order_json(const DerivativeOrder& o) {
  return {{"d", o.d}, {"alpha", {o.alpha[0], o.alpha[1]}}};
}

}  // namespace

std::string sweep_report_json(const SweepReport& r) {
  nlohmann::json j;
  j["complete"] = r.complete;
  j["gronwall_consistent"] = r.gronwall_consistent;
  j["energy_pointwise"] = r.energy_pointwise;
  j["c_meas_fit"] = {{"is_log_type", r.c_meas_fit.is_log_type},
                     {"coeff", num(r.c_meas_fit.fitted_coeff)},
                     {"intercept", num(r.c_meas_fit.intercept)},
                     {"residual", num(r.c_meas_fit.residual)}};
  auto& orders = j["orders"] = nlohmann::json::array();
  for (const auto& o : r.orders) orders.push_back(order_json(o));
  auto& fits = j["fits"] = nlohmann::json::array();
  for (const auto& f : r.fits) {
    fits.push_back({{"order", order_json(f.order)},
                    {"N_hat", num(f.N_hat)},
                    {"se", num(f.se)},
                    {"band", {num(f.lo), num(f.hi)}},
                    {"intercept", num(f.intercept)},
                    {"N_pred", num(f.N_pred)},
                    {"finite", f.finite},
                    {"below_prediction", f.below_prediction}});
  }
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json x = {{"eps", row.eps},
                        {"ok", row.ok},
                        {"log_scale", num(row.log_scale)},
                        {"dt", num(row.dt)},
                        {"C_meas", num(row.C_meas)},
                        {"C_eps_seminorm", num(row.C_eps_seminorm)},
                        {"energy_pointwise", row.energy_pointwise},
                        {"gronwall", row.gronwall}};
    if (!row.error.empty()) x["error"] = row.error;
    auto& ln = x["log_norms"] = nlohmann::json::array();
    for (double v : row.log_norms) ln.push_back(num(v));
    auto& lp = x["log_predicted"] = nlohmann::json::array();
    for (double v : row.log_predicted) lp.push_back(num(v));
    rows.push_back(std::move(x));
  }
  return j.dump(2);
}

void write_sweep_csv(const std::string& path, const SweepReport& r) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::kIo, "cannot open " + path);
  f << "eps,d,alpha0,alpha1,log_norm,log_predicted,C_meas,ok\n" << std::setprecision(17);
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < r.orders.size(); ++i) {
      const auto& o = r.orders[i];
      f << row.eps << ',' << o.d << ',' << o.alpha[0] << ',' << o.alpha[1] << ','
        << (i < row.log_norms.size() ? row.log_norms[i] : NAN) << ','
        << (i < row.log_predicted.size() ? row.log_predicted[i] : NAN) << ',' << row.C_meas << ','
        << (row.ok ? 1 : 0) << '\n';
    }
  }
  if (!f) throw Error(ErrorKind::kIo, "write failed: " + path);
}

}  // namespace hyps
