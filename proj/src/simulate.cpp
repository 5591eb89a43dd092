#include "inasup/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace inasup {

namespace {

inline double fold(double y) { return y - std::floor(y + 0.5); }

inline bool near_half_integer(double s, double guard) {
  const double frac = s - std::floor(s);
  return std::abs(frac - 0.5) < guard;
}

inline double to_unit(double x) { return x < 0 ? x + 1 : x; }

}  // namespace

FloatMap::FloatMap(int dim, double epsilon)
    : dim_(dim),
      epsilon_(epsilon),
      expansion_(2 * (1 - epsilon)),
      coupling_(2 * epsilon / (dim + 1)) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(epsilon >= 0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in [0, 1/2)");
}

bool FloatMap::signature(std::span<const double> x, std::span<int> out, double guard) const {
  bool clean = true;
  std::size_t k = 0;
  for (int j = 1; j <= dim_; ++j) {
    double s = 0;
    // (i, j) for i = j down to 1, stored at flat index of (i, j)
    const std::size_t base = constraint_count(j - 1);
    for (int i = j; i >= 1; --i) {
      s += x[static_cast<std::size_t>(i - 1)];
      if (near_half_integer(s, guard)) clean = false;
      out[base + static_cast<std::size_t>(i - 1)] = static_cast<int>(std::floor(s + 0.5));
      ++k;
    }
  }
  return clean;
}

bool FloatMap::step(std::span<double> x, double guard) const { return step(x, {}, guard); }

bool FloatMap::step(std::span<double> x, std::span<int> lift, double guard) const {
  thread_local std::vector<int> sig;
  sig.resize(constraint_count(dim_));
  const bool clean = signature(x, sig, guard);
  auto hv = [&](int i, int j) { return sig[flat_index(ConstraintIndex{i, j})]; };
  for (int i = 1; i <= dim_; ++i) {
    long b = 2 * hv(i, i);
    for (int j = 1; j <= i - 1; ++j) b += hv(j, i) - hv(j, i - 1);
    for (int j = i + 1; j <= dim_; ++j) b += hv(i, j) - hv(i + 1, j);
    auto& xi = x[static_cast<std::size_t>(i - 1)];
    // B reads only the old coordinates via sig, so updating in place is safe.
    const double y = expansion_ * xi + coupling_ * static_cast<double>(b);
    const double n = std::floor(y + 0.5);
    if (!lift.empty()) lift[static_cast<std::size_t>(i - 1)] = static_cast<int>(n);
    xi = y - n;
  }
  return clean;
}

AtomLocator::AtomLocator(const AtomTable& table) : count_(constraint_count(table.dim())) {
  if (table.dim() > 6) throw std::invalid_argument("atom locator supports D <= 6");
  for (const auto& a : table.atoms()) {
    std::uint64_t key = 0;
    for (int v : a.signature) key = key * 8 + static_cast<std::uint64_t>(v + 3);
    labels_.emplace(key, a.label);
  }
}

int AtomLocator::label(const FloatMap& map, std::span<const double> x) const {
  thread_local std::vector<int> sig;
  sig.resize(count_);
  if (!map.signature(x, sig)) return 0;
  std::uint64_t key = 0;
  for (int v : sig) key = key * 8 + static_cast<std::uint64_t>(v + 3);
  auto it = labels_.find(key);
  return it == labels_.end() ? 0 : it->second;
}

UniformSource::UniformSource(std::uint64_t seed) : engine_(seed) {}

double UniformSource::next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

OrbitRecord simulate_orbit(const FloatMap& map, const AtomLocator* locator,
                           std::span<const double> x0, std::size_t n0, std::size_t n1,
                           std::uint64_t seed) {
  const auto dim = static_cast<std::size_t>(map.dim());
  if (x0.size() != dim) throw std::invalid_argument("initial condition has wrong dimension");
  OrbitRecord rec;
  rec.dim = map.dim();
  rec.epsilon = map.epsilon();
  rec.seed = seed;
  rec.n0 = n0;
  rec.n1 = n1;
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < dim; ++i) x[i] = fold(x0[i]);
  for (std::size_t t = 0; t < n0; ++t) map.step(x);
  rec.points.reserve(n1 * dim);
  rec.word.reserve(n1);
  rec.lifts.resize(n1 * dim);
  map.step(x);
  for (std::size_t t = 0; t < n1; ++t) {
    for (double v : x) rec.points.push_back(to_unit(v));
    rec.word.push_back(locator ? locator->label(map, x) : 0);
    map.step(x, std::span<int>(rec.lifts).subspan(t * dim, dim));
  }
  return rec;
}

OrbitRecord seeding_orbit(const AtomTable& table, double epsilon, std::uint64_t seed,
                          std::size_t n0, std::size_t n1, double min_op, std::size_t attempts) {
  const FloatMap map(table.dim(), epsilon);
  const AtomLocator locator(table);
  UniformSource rng(seed);
  std::vector<double> x0(static_cast<std::size_t>(table.dim()));
  for (std::size_t a = 0; a < attempts; ++a) {
    for (auto& v : x0) v = rng.next();
    auto orbit = simulate_orbit(map, &locator, x0, n0, n1, seed);
    if (order_parameter(orbit, n1).value >= min_op) return orbit;
  }
  throw std::runtime_error("no trajectory reached the requested order parameter");
}

OPEstimate order_parameter(const OrbitRecord& orbit, std::size_t T) {
  if (T == 0) throw std::invalid_argument("order parameter needs T > 0");
  if (T > orbit.n1) throw std::invalid_argument("T exceeds the recorded orbit length");
  const auto dim = static_cast<std::size_t>(orbit.dim);
  const std::size_t c = (dim + 1) / 2 - 1;
  double sum = 0;
  for (std::size_t t = 0; t < T; ++t) sum += orbit.points[t * dim + c];
  OPEstimate est;
  est.value = std::abs(sum / static_cast<double>(T) - 0.5);
  est.T = T;
  est.initial_condition.assign(orbit.points.begin(), orbit.points.begin() + static_cast<std::ptrdiff_t>(dim));
  est.epsilon = orbit.epsilon;
  return est;
}

std::vector<double> order_parameter_stream(const FloatMap& map, std::span<const double> x0,
                                           std::span<const std::size_t> checkpoints) {
  const auto dim = static_cast<std::size_t>(map.dim());
  const std::size_t c = (dim + 1) / 2 - 1;
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < dim; ++i) x[i] = fold(x0[i]);
  std::vector<double> out;
  out.reserve(checkpoints.size());
  double sum = 0;
  std::size_t t = 0;
  for (std::size_t target : checkpoints) {
    if (target == 0 || target < t) throw std::invalid_argument("checkpoints must be positive and ascending");
    for (; t < target; ++t) {
      map.step(x);
      sum += to_unit(x[c]);
    }
    out.push_back(std::abs(sum / static_cast<double>(t) - 0.5));
  }
  return out;
}

std::vector<double> epsilon_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k)
    g[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  return g;
}

namespace {

std::vector<double> draw_initial_conditions(const OpScanConfig& config) {
  UniformSource rng(config.seed);
  const std::size_t total =
      config.epsilons.size() * config.initial_conditions * static_cast<std::size_t>(config.dim);
  std::vector<double> ics(total);
  for (auto& v : ics) v = rng.next();
  return ics;
}

void run_orbit(const OpScanConfig& config, std::span<const double> ics, std::size_t job,
               std::vector<OpScanRow>& rows) {
  const auto dim = static_cast<std::size_t>(config.dim);
  const std::size_t e = job / config.initial_conditions;
  const std::size_t ic = job % config.initial_conditions;
  const FloatMap map(config.dim, config.epsilons[e]);
  const auto values = order_parameter_stream(map, ics.subspan(job * dim, dim), config.checkpoints);
  for (std::size_t k = 0; k < values.size(); ++k)
    rows[job * config.checkpoints.size() + k] =
        OpScanRow{config.epsilons[e], ic, config.checkpoints[k], values[k]};
}

}  // namespace

std::vector<OpScanRow> op_scan_serial(const OpScanConfig& config) {
  const auto ics = draw_initial_conditions(config);
  const std::size_t jobs = config.epsilons.size() * config.initial_conditions;
  std::vector<OpScanRow> rows(jobs * config.checkpoints.size());
  for (std::size_t job = 0; job < jobs; ++job) run_orbit(config, ics, job, rows);
  return rows;
}

std::vector<OpScanRow> op_scan(const OpScanConfig& config) {
  const auto ics = draw_initial_conditions(config);
  const auto jobs = static_cast<long long>(config.epsilons.size() * config.initial_conditions);
  std::vector<OpScanRow> rows(static_cast<std::size_t>(jobs) * config.checkpoints.size());
#pragma omp parallel for schedule(dynamic)
  for (long long job = 0; job < jobs; ++job) run_orbit(config, ics, static_cast<std::size_t>(job), rows);
  return rows;
}

void write_op_scan_csv(std::ostream& out, std::span<const OpScanRow> rows) {
  out << "epsilon,init_index,T,op_value\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%zu,%zu,%.17g\n", r.epsilon, r.init_index, r.T, r.value);
    out << buf;
  }
}

namespace {

std::map<double, std::vector<double>> values_at_largest_T(std::span<const OpScanRow> rows) {
  std::size_t t_max = 0;
  for (const auto& r : rows) t_max = std::max(t_max, r.T);
  std::map<double, std::vector<double>> by_eps;
  for (const auto& r : rows)
    if (r.T == t_max) by_eps[r.epsilon].push_back(r.value);
  return by_eps;
}

}  // namespace

OnsetResult detect_onset(std::span<const OpScanRow> rows, const OnsetRule& rule) {
  OnsetResult result;
  const auto by_eps = values_at_largest_T(rows);
  if (by_eps.empty()) return result;
  const auto& base = by_eps.begin()->second;
  result.noise_level = *std::max_element(base.begin(), base.end());
  result.threshold = rule.noise_multiplier * result.noise_level;
  for (const auto& [eps, values] : by_eps) {
    const auto above = std::count_if(values.begin(), values.end(),
                                     [&](double v) { return v > result.threshold; });
    if (static_cast<double>(above) >= rule.min_fraction * static_cast<double>(values.size())) {
      result.found = true;
      result.epsilon = eps;
      return result;
    }
  }
  return result;
}

std::vector<MaxOpRow> max_order_parameter(std::span<const OpScanRow> rows, int dim) {
  std::vector<MaxOpRow> out;
  for (const auto& [eps, values] : values_at_largest_T(rows)) {
    const double m = *std::max_element(values.begin(), values.end());
    out.push_back(MaxOpRow{eps, m, m * dim});
  }
  return out;
}

namespace {

double mod1_distance(double a, double b) {
  const double d = a - b;
  return std::abs(d - std::floor(d + 0.5));
}

}  // namespace

double semiconjugacy_residual(int n, double epsilon, std::size_t samples, std::uint64_t seed,
                              double guard) {
  if (n < 2) throw std::invalid_argument("need N >= 2");
  const auto N = static_cast<std::size_t>(n);
  const FloatMap g(n - 1, epsilon);
  UniformSource rng(seed);
  std::vector<double> u(N), fu(N), x(N - 1), lhs(N), rhs(N);
  std::vector<int> sig(constraint_count(n - 1));
  double worst = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& v : u) v = rng.next();
    bool skip = false;
    for (std::size_t i = 0; i < N; ++i) {
      double acc = 0;
      for (std::size_t j = 0; j < N; ++j) {
        const double d = u[j] - u[i];
        if (j != i && near_half_integer(d, guard)) skip = true;
        acc += d - std::floor(d + 0.5);
      }
      fu[i] = 2 * u[i] + 2 * epsilon / n * acc;
    }
    double total = 0;
    for (std::size_t i = 0; i + 1 < N; ++i) x[i] = fold(u[i] - u[i + 1]);
    for (double v : u) total += v;
    if (!g.signature(x, sig, guard)) skip = true;
    if (skip) continue;
    // left: pi(F(u))
    double ftotal = 0;
    for (std::size_t i = 0; i + 1 < N; ++i) lhs[i] = fu[i] - fu[i + 1];
    for (double v : fu) ftotal += v;
    lhs[N - 1] = ftotal;
    // right: (G x doubling)(pi(u))
    g.step(x, guard);
    for (std::size_t i = 0; i + 1 < N; ++i) rhs[i] = x[i];
    rhs[N - 1] = 2 * total;
    for (std::size_t i = 0; i < N; ++i) worst = std::max(worst, mod1_distance(lhs[i], rhs[i]));
  }
  return worst;
}

Rational semiconjugacy_residual_exact(int n, const Rational& epsilon, std::size_t samples,
                                      std::uint64_t seed, long max_den) {
  if (n < 2) throw std::invalid_argument("need N >= 2");
  const MapParams params(n - 1, epsilon);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(0, max_den - 1);
  Rational worst = 0;
  std::vector<Rational> u(static_cast<std::size_t>(n));
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& v : u) v = make_rational(pick(rng), max_den);
    std::vector<Rational> lhs, rhs;
    try {
      lhs = project_pi(apply_F(n, epsilon, u));
      const auto x = project_pi(u);
      const std::vector<Rational> head(x.begin(), x.end() - 1);
      rhs = apply_G(params, head);
      rhs.push_back(reduce_mod1(2 * x.back()));
    } catch (const DiscontinuityError&) {
      continue;
    }
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      const Rational d = abs(reduce_mod1(lhs[i] - rhs[i]));
      if (d > worst) worst = d;
    }
  }
  return worst;
}

void write_orbit_csv(std::ostream& out, const OrbitRecord& orbit) {
  out << "t";
  for (int i = 1; i <= orbit.dim; ++i) out << ",x_" << i;
  out << ",atom_label\n";
  const auto dim = static_cast<std::size_t>(orbit.dim);
  char buf[64];
  for (std::size_t t = 0; t < orbit.n1; ++t) {
    out << orbit.n0 + t + 1;
    for (std::size_t i = 0; i < dim; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", orbit.points[t * dim + i]);
      out << buf;
    }
    out << ',' << orbit.word[t] << '\n';
  }
}

}  // namespace inasup
