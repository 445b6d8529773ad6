#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hyps/cauchy.hpp"
#include "hyps/grid.hpp"
#include "hyps/symbols.hpp"

namespace hyps {

// Data of one family member: the actual data are exp(log_scale) * (g, f).
// Keeping the scale apart lets exp(-1/eps)-sized data live in log space.
struct SweepData {
  GridFunction g;
  Forcing f;
  double log_scale = 0.0;
};

using DataBuilder = std::function<SweepData(double eps, const Grid& grid)>;

// d-th t-derivative and x-multi-index alpha.
struct DerivativeOrder {
  int d = 0;
  MultiIndex alpha{0, 0};
  int total() const { return d + order_of(alpha); }
  bool operator==(const DerivativeOrder& o) const { return d == o.d && alpha == o.alpha; }
};

// Every (d, alpha) with d + |alpha| <= cap (d <= max_d).
std::vector<DerivativeOrder> orders_up_to(int dim, int cap, int max_d = 1000);

struct SweepPlan {
  GenSymbolFamily family;
  DataBuilder data;
  std::vector<DerivativeOrder> orders{{0, {0, 0}}};
  Grid grid;
  double T = 1.0;
  SolveOptions solve;
  AsymptoticThresholds thresholds;
  int jobs = 1;
  // Cascade ledgers for the d = 0 orders, giving the Gronwall-predicted exponents.
  bool cascade = true;

  void validate() const;
};

struct EpsRow {
  double eps = 0.0;
  bool ok = false;
  std::string error;
  double log_scale = 0.0;
  double dt = 0.0;
  double C_meas = 0.0;
  double C_eps_seminorm = 0.0;
  bool energy_pointwise = false;
  bool gronwall = false;
  // log max_t |d^d_t d^alpha u(t)|, one per plan order, scale included.
  std::vector<double> log_norms;
  // log of the square root of the cascade bound (d = 0 orders, NaN otherwise).
  std::vector<double> log_predicted;
};

struct OrderFit {
  DerivativeOrder order;
  double N_hat = 0.0;
  double se = 0.0;
  double lo = 0.0;  // N_hat - 2 se
  double hi = 0.0;  // N_hat + 2 se
  double intercept = 0.0;
  double N_pred = NAN;  // exponent fitted to the cascade bound
  bool finite = false;
  bool below_prediction = false;
};

struct SweepReport {
  std::vector<EpsRow> rows;
  std::vector<OrderFit> fits;
  std::vector<DerivativeOrder> orders;
  LogTypeVerdict c_meas_fit;
  bool complete = false;
  // max_t |u|^2 <= per-eps Gronwall bound on every row.
  bool gronwall_consistent = false;
  bool energy_pointwise = false;
};

SweepReport run_sweep(const SweepPlan& plan);

// Least-squares slope of log(value) against log(1/eps) with its standard error.
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double se = 0.0;
  double residual = 0.0;
};
ExponentFit fit_exponent(const std::vector<double>& eps, const std::vector<double>& log_values);

struct NegligibleVerdict {
  bool negligible = false;
  int max_q = 0;          // largest q with every q' <= q passing
  int failed_q = 0;       // first failing q, 0 if none
  std::vector<double> log_max_u;
  std::vector<double> eps;
};

// max_t |u_eps| <= eps^q K_q for q = 1..q_max: eps^-q max_t |u_eps| must not
// increase along the sweep tail (last max(3, n/2) points).
NegligibleVerdict check_negligible(const SweepPlan& plan, int q_max = 10);
NegligibleVerdict check_negligible(const SweepReport& report, int q_max = 10);

struct Probe {
  std::string name;
  std::function<Complex(const std::array<double, 2>&)> phi;
};

// Either closed-form pairings <u(T), phi_i> or a reference solution at T.
struct AssociationReference {
  std::optional<std::vector<Complex>> exact_pairings;
  std::optional<GridFunction> u_ref;
};

// Same solver, `factor` x finer in space and time, eps at the sweep minimum.
AssociationReference high_resolution_reference(const SweepPlan& plan, int factor = 4);

struct AssociationReport {
  std::vector<double> eps;
  std::vector<std::vector<double>> residuals;  // [probe][eps]
  std::vector<double> l2_residuals;            // against u_ref, empty otherwise
  std::vector<Complex> reference_pairings;
  bool nonincreasing_tail = false;             // last 3 points, every probe
  double terminal_residual = 0.0;
  bool terminal_ok = false;
};

AssociationReport check_association(const SweepPlan& plan, const std::vector<Probe>& probes,
                                    const AssociationReference& ref, double terminal_tol = 1e-2);

struct GinfOptions {
  int cap = 4;
  double slack = 0.1;
  // Gate: Q^1_{0,k,l}(a1) slow scale and log-type.
  int gate_k = 1;
  int gate_l = 1;
};

struct GinfVerdict {
  bool is_ginf = false;
  double p_hat = 0.0;
  double max_N = 0.0;
  bool gate_passed = false;
  DerivativeOrder worst;
};

GinfVerdict check_ginf(const SweepPlan& plan, const SweepReport& report, const GinfOptions& opt = {});

std::string sweep_report_json(const SweepReport& r);
void write_sweep_csv(const std::string& path, const SweepReport& r);

}  // namespace hyps
