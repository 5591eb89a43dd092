#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "inasup/dynamics.hpp"

namespace inasup {

/// Double-precision G_{D,eps} on S_D = (-1/2, 1/2)^D. Only used to explore
/// dynamics and to propose seed words; proofs never depend on it.
class FloatMap {
 public:
  FloatMap(int dim, double epsilon);

  int dim() const { return dim_; }
  double epsilon() const { return epsilon_; }

  /// In-place step; x must lie in S_D. Returns false if some contiguous sum
  /// was within `guard` of a discontinuity (the step is still taken).
  bool step(std::span<double> x, double guard = 1e-9) const;
  /// Same, also storing the integer vector removed by the fold in `lift`.
  bool step(std::span<double> x, std::span<int> lift, double guard = 1e-9) const;

  /// h-signature of x in flat order; false if within `guard` of a plane.
  bool signature(std::span<const double> x, std::span<int> out, double guard = 1e-9) const;

 private:
  int dim_;
  double epsilon_;
  double expansion_;
  double coupling_;
};

/// Maps float signatures to atom labels of an AtomTable.
class AtomLocator {
 public:
  explicit AtomLocator(const AtomTable& table);
  /// 0 when x is near a discontinuity or the signature is unknown.
  int label(const FloatMap& map, std::span<const double> x) const;

 private:
  std::unordered_map<std::uint64_t, int> labels_;
  std::size_t count_;
};

/// Seeded generator for initial conditions: mt19937_64, doubles built from the
/// top 53 bits, uniform on [0, 1).
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed);
  double next();

 private:
  std::mt19937_64 engine_;
};

struct OrbitRecord {
  int dim = 0;
  double epsilon = 0;
  std::uint64_t seed = 0;
  std::size_t n0 = 0;
  std::size_t n1 = 0;
  std::vector<double> points;  // n1 x dim, projected onto (0,1)^D
  std::vector<int> word;       // atom label of each kept iterate, 0 when flagged
  std::vector<int> lifts;      // n1 x dim, lift of the step leaving each kept iterate
};

/// x0 in (0,1)^D. Discards n0 iterates and records the next n1.
OrbitRecord simulate_orbit(const FloatMap& map, const AtomLocator* locator,
                           std::span<const double> x0, std::size_t n0, std::size_t n1,
                           std::uint64_t seed = 0);

/// Orbit of the first initial condition drawn from UniformSource(seed) whose
/// order parameter over the n1 recorded points reaches min_op, with atom
/// labels from `table`. Throws std::runtime_error after `attempts` draws.
OrbitRecord seeding_orbit(const AtomTable& table, double epsilon, std::uint64_t seed,
                          std::size_t n0, std::size_t n1, double min_op,
                          std::size_t attempts = 1000);

struct OPEstimate {
  double value = 0;
  std::size_t T = 0;
  std::vector<double> initial_condition;
  double epsilon = 0;
};

/// |mean over the first T recorded points of coordinate ceil(D/2) - 1/2|.
/// Throws std::invalid_argument for T = 0 or T larger than the record.
OPEstimate order_parameter(const OrbitRecord& orbit, std::size_t T);

/// Streaming order parameter of one orbit at each checkpoint T (ascending).
std::vector<double> order_parameter_stream(const FloatMap& map, std::span<const double> x0,
                                           std::span<const std::size_t> checkpoints);

struct OpScanRow {
  double epsilon;
  std::size_t init_index;
  std::size_t T;
  double value;
};

struct OpScanConfig {
  int dim = 2;
  std::vector<double> epsilons;
  std::size_t initial_conditions = 100;
  std::vector<std::size_t> checkpoints{100000};
  std::uint64_t seed = 1;
};

/// Evenly spaced grid lo + (hi - lo) k / (n - 1), k = 0..n-1.
std::vector<double> epsilon_grid(double lo, double hi, std::size_t n);

/// Order parameter for every (epsilon, initial condition, T), rows sorted by
/// epsilon, then initial condition, then T. Initial conditions are drawn from
/// one UniformSource in that order, so the table depends only on the config.
/// Orbits run concurrently under OpenMP; results equal op_scan_serial.
std::vector<OpScanRow> op_scan(const OpScanConfig& config);
std::vector<OpScanRow> op_scan_serial(const OpScanConfig& config);

/// "epsilon,init_index,T,op_value" with 17 significant digits.
void write_op_scan_csv(std::ostream& out, std::span<const OpScanRow> rows);

struct OnsetRule {
  double noise_multiplier = 10.0;
  double min_fraction = 0.05;
};

struct OnsetResult {
  bool found = false;
  double epsilon = 0;
  double noise_level = 0;
  double threshold = 0;
};

/// Smallest grid epsilon at which at least min_fraction of the initial
/// conditions give an order parameter above noise_multiplier times the noise
/// level, at the largest T. The noise level is the maximum order parameter at
/// the smallest grid epsilon, which must lie in the symmetric regime.
OnsetResult detect_onset(std::span<const OpScanRow> rows, const OnsetRule& rule = {});

struct MaxOpRow {
  double epsilon;
  double max_op;
  double max_op_times_dim;
};

/// Per-epsilon maximum order parameter at the largest T.
std::vector<MaxOpRow> max_order_parameter(std::span<const OpScanRow> rows, int dim);

/// max over samples of the mod-1 distance between pi_N(F(u)) and
/// (G x doubling)(pi_N(u)) in doubles; samples closer than `guard` to a
/// discontinuity are skipped.
double semiconjugacy_residual(int n, double epsilon, std::size_t samples, std::uint64_t seed,
                              double guard = 1e-9);

/// Same identity in exact rationals at random points sharing the
/// denominator `max_den`. Returns the largest |difference| found (0 when it holds).
Rational semiconjugacy_residual_exact(int n, const Rational& epsilon, std::size_t samples,
                                      std::uint64_t seed, long max_den = 1000003);

/// "t,x_1,...,x_D,atom_label" rows for t = n0+1 .. n0+n1.
void write_orbit_csv(std::ostream& out, const OrbitRecord& orbit);

}  // namespace inasup
