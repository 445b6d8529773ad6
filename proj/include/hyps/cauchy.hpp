#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hyps/grid.hpp"
#include "hyps/quantization.hpp"
#include "hyps/symbols.hpp"

namespace hyps {

// f(t, x) = sum_m tau_m(t) phi_m(x) with tau_m depending on t only.
struct Forcing {
  std::vector<Expr> tau;
  std::vector<GridFunction> phi;

  bool empty() const { return phi.empty(); }
  // d-th t-derivative at time t.
  GridFunction eval(double t, const Grid& g, int d = 0) const;
  void validate(const Grid& g) const;
};

struct CauchyProblem {
  HyperbolicSymbol symbol;
  Forcing forcing;
  GridFunction g;
  double T = 1.0;

  const Grid& grid() const { return g.grid; }
  void validate() const;
};

// Semi-norm orders of the energy constant: Q^1_{0,k,l}(a1), Q^0_{0,k0,l0}(a0).
struct SeminormOrders {
  int k = 3, l = 6;
  int k0 = 1, l0 = 1;
  bool drop_a0 = false;
};

SeminormOrders case_a_orders(int dim);
SeminormOrders case_b_orders(int dim);

// Frozen calibration constants, fitted on calibration_corpus.
struct Calibration {
  double case_a = 0.0;
  double case_b = 0.0;
};
Calibration frozen_calibration(int dim);

struct SolveOptions {
  std::optional<double> dt;     // default: 0.9 * 2.8 / S
  double stability_margin = 2.8;
  double safety = 0.9;
  bool override_stability = false;
  int stride = 8;
  bool band_projected = true;
  int symbol_sup_samples = 9;   // t-samples for S
  int norm_samples = 9;         // t-samples for measured norms (t-dependent symbols)
  NormOptions norm{50, 1e-6, 12345, NormMethod::kAuto, true, 1024};
  double unstable_factor = 10.0;
  double calibration_C = 0.0;   // 0: frozen case (a) constant
  SamplingBox box;              // semi-norm box; default: grid domain
  bool box_set = false;
  bool store_full = false;
  bool compute_seminorm = true;
};

struct EnergyLedger {
  std::vector<double> times;
  std::vector<double> u_norm_sq;
  std::vector<double> f_norm_sq;
  std::vector<double> norm_times;
  std::vector<double> skew_norm;
  std::vector<double> a0_norm;
  double C_meas = 0.0;
  double C_eps_seminorm = 0.0;
  double calibration_C = 0.0;
  double q_a0 = 0.0;
  double q_a1 = 0.0;
  double g_norm_sq = 0.0;
  double dt = 0.0;
  double symbol_sup = 0.0;
  bool norms_converged = true;
};

struct Trajectory {
  Grid grid;
  double dt = 0.0;
  int stride = 1;
  std::vector<double> times;
  std::vector<GridFunction> states;
};

struct SolveResult {
  Trajectory trajectory;
  EnergyLedger ledger;
};

// Measured constants of the generator without solving.
struct MeasuredConstants {
  std::vector<double> times;
  std::vector<double> skew;
  std::vector<double> a0;
  double C_meas = 0.0;
  bool converged = true;
};
MeasuredConstants measure_constants(const HyperbolicSymbol& h, const Grid& g, double T,
                                    const SolveOptions& opt);

double seminorm_constant(const HyperbolicSymbol& h, const SeminormOrders& orders, double C,
                         const SamplingBox& box, double* q_a0 = nullptr, double* q_a1 = nullptr);

SamplingBox default_box(const Grid& g, double T);

struct StepPlan {
  double dt = 0.0;
  int steps = 0;
  double symbol_sup = 0.0;  // S
};
// Step size and count the solver will use for p under opt.
StepPlan plan_steps(const CauchyProblem& p, const SolveOptions& opt = {});

SolveResult solve_fixed_eps(const CauchyProblem& p, const SolveOptions& opt = {});

struct EnergyCheck {
  bool pointwise_ok = false;
  bool gronwall_ok = false;
  bool seminorm_dominates = false;
  double min_pointwise_margin = 0.0;
  double min_gronwall_margin = 0.0;
  std::vector<double> bound_rhs;
  std::vector<double> margin;
  std::vector<double> ddt;
};

// Gronwall bound (|g|^2 + int_0^t |f|^2) exp(C t) along the ledger times.
std::vector<double> gronwall_bound(const EnergyLedger& l, double C);

EnergyCheck check_energy_estimate(const EnergyLedger& ledger, double calibration_C = 0.0);

struct CaseReport {
  // Case (b) measures |x| from the torus center (L/2, ..., L/2).
  bool case_b_tagged = false;
  bool case_b_consistent = false;
  bool case_c_applicable = false;
  double C_case_a = 0.0;
  double C_case_b = 0.0;
  double C_case_c = 0.0;
  bool case_a_dominates = false;
  bool case_b_dominates = false;
  bool case_c_dominates = false;
  std::string note;
};

CaseReport check_case_variants(const CauchyProblem& p, const SolveResult& r,
                               const SolveOptions& opt = {});

struct CascadeLedger {
  MultiIndex alpha{0, 0};
  std::vector<double> times;
  std::vector<double> v_norm_sq;   // |d^alpha u|^2
  std::vector<double> h;           // |P d^alpha u|^2, the forcing of the differentiated equation
  std::vector<double> bound_rhs;
  double C = 0.0;
  bool bound_ok = false;
};

// Ledgers for every |alpha| <= max_order along the stored trajectory.
std::vector<CascadeLedger> derivative_cascade(const CauchyProblem& p, const SolveResult& r,
                                              int max_order, const SolveOptions& opt = {});

// t-derivatives of the solution from the equation itself:
// w_{j+1} = -i sum_i C(j,i) op(d^i_t a) w_{j-i} + d^j_t f.
class TimeDerivatives {
 public:
  TimeDerivatives(const CauchyProblem& p, int max_d, bool band_projected = true);
  // w_0 .. w_d at time t for the state u.
  std::vector<GridFunction> eval(double t, const GridFunction& u, int d) const;
  int max_order() const { return static_cast<int>(ops_.size()); }

 private:
  const CauchyProblem* p_;
  bool band_;
  std::vector<Quantized> ops_;
};

// Calibration corpus evaluation: max measured C / (1 + Q0 + Q1) per case.
struct CalibrationSample {
  std::string name;
  double C_meas = 0.0;
  double denom_a = 0.0;
  double denom_b = 0.0;
};
std::vector<CalibrationSample> calibration_corpus(int dim);

// Output helpers.
void write_ledger_csv(const std::string& path, const EnergyLedger& l, const EnergyCheck& c);
void write_trajectory(const std::string& path, const Trajectory& tr);
Trajectory read_trajectory(const std::string& path);

}  // namespace hyps
