#include "inasup/dynamics.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "inasup/polytope.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace inasup {

MapParams::MapParams(int dim, Rational epsilon) : dim_(dim), epsilon_(std::move(epsilon)) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (sgn(epsilon_) < 0 || epsilon_ >= Rational(1, 2))
    throw std::invalid_argument("epsilon must lie in [0, 1/2)");
  expansion_ = 2 * (1 - epsilon_);
  coupling_ = 2 * epsilon_ / (dim + 1);
}

bool is_half_integer(const Rational& u) { return u.get_den() == 2; }

long h(const Rational& u) {
  if (is_half_integer(u)) return 0;
  const Integer f = floor(u + Rational(1, 2));
  if (!f.fits_slong_p()) throw std::overflow_error("h(u) out of range");
  return f.get_si();
}

Rational reduce_mod1(const Rational& u) {
  Rational r = u - Rational(floor(u + Rational(1, 2)));
  return r;
}

std::vector<int> signature_of(std::span<const Rational> x) {
  const int dim = static_cast<int>(x.size());
  std::vector<int> sig(constraint_count(dim));
  for (std::size_t k = 0; k < sig.size(); ++k) {
    const Rational s = partial_sum(x, index_at(k));
    if (is_half_integer(s)) throw DiscontinuityError("point lies on a discontinuity plane");
    sig[k] = static_cast<int>(h(s));
  }
  return sig;
}

std::vector<long> b_from_signature(int dim, std::span<const int> signature) {
  auto hv = [&](int i, int j) -> long {
    return signature[flat_index(ConstraintIndex{i, j})];
  };
  std::vector<long> b(static_cast<std::size_t>(dim), 0);
  for (int i = 1; i <= dim; ++i) {
    long v = 2 * hv(i, i);
    for (int j = 1; j <= i - 1; ++j) v += hv(j, i) - hv(j, i - 1);
    for (int j = i + 1; j <= dim; ++j) v += hv(i, j) - hv(i + 1, j);
    b[static_cast<std::size_t>(i - 1)] = v;
  }
  return b;
}

std::vector<long> b_vector(std::span<const Rational> x) {
  const auto sig = signature_of(x);
  return b_from_signature(static_cast<int>(x.size()), sig);
}

std::vector<Rational> apply_G(const MapParams& params, std::span<const Rational> x) {
  if (x.size() != static_cast<std::size_t>(params.dim()))
    throw std::invalid_argument("point dimension does not match map");
  for (const auto& xi : x)
    if (abs(xi) > Rational(1, 2)) throw std::invalid_argument("point outside the fundamental domain");
  const auto b = b_vector(x);
  std::vector<Rational> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = reduce_mod1(params.expansion() * x[i] + params.coupling() * Rational(b[i]));
  return y;
}

std::vector<Rational> apply_F(int n, const Rational& epsilon, std::span<const Rational> u) {
  if (u.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("point dimension mismatch");
  std::vector<Rational> out(u.size());
  const Rational weight = 2 * epsilon / n;
  for (std::size_t i = 0; i < u.size(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const Rational d = u[j] - u[i];
      if (is_half_integer(d)) throw DiscontinuityError("coupling term on a discontinuity");
      s += d - Rational(h(d));
    }
    out[i] = reduce_mod1(2 * u[i] + weight * s);
  }
  return out;
}

std::vector<Rational> project_pi(std::span<const Rational> u) {
  std::vector<Rational> x(u.size());
  Rational total = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i + 1 < u.size()) x[i] = reduce_mod1(u[i] - u[i + 1]);
    total += u[i];
  }
  x.back() = reduce_mod1(total);
  return x;
}

ConstraintVector raw_atom_bounds(int dim, std::span<const int> signature) {
  std::vector<Rational> lo(signature.size()), hi(signature.size());
  for (std::size_t k = 0; k < signature.size(); ++k) {
    lo[k] = Rational(2 * signature[k] - 1, 2);
    hi[k] = Rational(2 * signature[k] + 1, 2);
  }
  return ConstraintVector(dim, std::move(lo), std::move(hi));
}

namespace {

// Depth-first search over h-signatures. Bounds are kept doubled so that the
// half-integer slabs become integers and the optimizer runs on machine ints.
class SignatureSearch {
 public:
  explicit SignatureSearch(int dim)
      : dim_(dim),
        count_(constraint_count(dim)),
        family_(standard_family(dim)),
        sig_(count_, 0),
        lo_(count_),
        hi_(count_),
        olo_(count_),
        ohi_(count_) {
    if (!family_.all_integral()) throw std::logic_error("contiguous-sum multipliers must be integral");
    for (std::size_t k = 0; k < count_; ++k) reset(k);
  }

  void run(std::size_t stop, std::vector<std::vector<int>>& out) { descend(0, stop, out); }

  void run_from(std::span<const int> prefix, std::vector<std::vector<int>>& out) {
    for (std::size_t k = 0; k < prefix.size(); ++k) assign(k, prefix[k]);
    descend(prefix.size(), count_, out);
  }

 private:
  void reset(std::size_t k) {
    const auto c = index_at(k);
    const long long len = c.j - c.i + 1;
    lo_[k] = -len;
    hi_[k] = len;
  }

  void assign(std::size_t k, int value) {
    sig_[k] = value;
    lo_[k] = 2LL * value - 1;
    hi_[k] = 2LL * value + 1;
  }

  bool feasible() {
    return optimize_into<long long>(lo_, hi_, family_, olo_, ohi_);
  }

  void descend(std::size_t pos, std::size_t stop, std::vector<std::vector<int>>& out) {
    if (pos == stop) {
      out.emplace_back(sig_.begin(), sig_.begin() + static_cast<std::ptrdiff_t>(pos));
      return;
    }
    const auto c = index_at(pos);
    const int len = c.j - c.i + 1;
    const int reach = len / 2;
    for (int value = -reach; value <= reach; ++value) {
      assign(pos, value);
      if (feasible()) descend(pos + 1, stop, out);
    }
    reset(pos);
    sig_[pos] = 0;
  }

  int dim_;
  std::size_t count_;
  const MultiplierFamily& family_;
  std::vector<int> sig_;
  std::vector<long long> lo_, hi_, olo_, ohi_;
};

}  // namespace

std::vector<std::vector<int>> enumerate_signatures_serial(int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  std::vector<std::vector<int>> out;
  SignatureSearch(dim).run(constraint_count(dim), out);
  return out;
}

std::vector<std::vector<int>> enumerate_signatures(int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  const std::size_t split = constraint_count(std::min(dim, 4));
  std::vector<std::vector<int>> prefixes;
  SignatureSearch(dim).run(split, prefixes);
  if (split == constraint_count(dim)) return prefixes;

  std::vector<std::vector<std::vector<int>>> parts(prefixes.size());
  const auto n = static_cast<long long>(prefixes.size());
#pragma omp parallel for schedule(dynamic)
  for (long long p = 0; p < n; ++p) {
    SignatureSearch search(dim);
    search.run_from(prefixes[static_cast<std::size_t>(p)], parts[static_cast<std::size_t>(p)]);
  }
  std::vector<std::vector<int>> out;
  for (auto& part : parts)
    for (auto& sig : part) out.push_back(std::move(sig));
  return out;
}

AtomTable::AtomTable(const MapParams& params) : params_(params) {
  const int dim = params.dim();
  const auto& family = standard_family(dim);
  int label = 0;
  for (auto& sig : enumerate_signatures(dim)) {
    auto bounds = canonicalize(raw_atom_bounds(dim, sig), family);
    if (!bounds) throw std::logic_error("enumerated atom is empty");
    auto b = b_from_signature(dim, sig);
    std::vector<Rational> offset(constraint_count(dim));
    for (std::size_t k = 0; k < offset.size(); ++k) {
      const auto c = index_at(k);
      long s = 0;
      for (int q = c.i; q <= c.j; ++q) s += b[static_cast<std::size_t>(q - 1)];
      offset[k] = params.coupling() * Rational(s);
    }
    by_signature_.emplace(sig, ++label);
    atoms_.push_back(Atom{label, std::move(sig), std::move(*bounds), std::move(b), std::move(offset)});
  }
  flip_.resize(atoms_.size());
  for (const auto& a : atoms_) {
    std::vector<int> neg(a.signature.size());
    std::transform(a.signature.begin(), a.signature.end(), neg.begin(), [](int v) { return -v; });
    flip_[static_cast<std::size_t>(a.label - 1)] = by_signature_.at(neg);
  }
}

std::optional<int> AtomTable::label_of(std::span<const int> signature) const {
  auto it = by_signature_.find(std::vector<int>(signature.begin(), signature.end()));
  if (it == by_signature_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> AtomTable::locate(std::span<const Rational> x) const {
  try {
    return label_of(signature_of(x));
  } catch (const DiscontinuityError&) {
    return std::nullopt;
  }
}

void AtomTable::dump(std::ostream& out) const {
  for (const auto& a : atoms_) {
    out << a.label << " |";
    for (std::size_t k = 0; k < a.signature.size(); ++k) {
      const auto c = index_at(k);
      out << " (" << c.i << ',' << c.j << "):" << a.signature[k];
    }
    out << " |";
    for (long v : a.b) out << ' ' << v;
    out << '\n';
  }
}

ConstraintVector gamma(const MapParams& params, const Atom& atom, const ConstraintVector& m) {
  return affine_image(m, params.expansion(), atom.gamma_offset);
}

ConstraintVector gamma_inverse(const MapParams& params, const Atom& atom,
                               const ConstraintVector& m) {
  const Rational inv = 1 / params.expansion();
  std::vector<Rational> offset(atom.gamma_offset.size());
  for (std::size_t k = 0; k < offset.size(); ++k) offset[k] = -atom.gamma_offset[k] * inv;
  return affine_image(m, inv, offset);
}

std::vector<std::vector<Rational>> integer_lifts(const ConstraintVector& m) {
  const int dim = m.dim();
  const Rational half(1, 2);
  std::vector<std::pair<Integer, Integer>> ranges;
  for (int i = 1; i <= dim; ++i) {
    const ConstraintIndex c{i, i};
    ranges.emplace_back(floor(m.lower(c) - half) + 1, ceil(m.upper(c) + half) - 1);
  }
  std::vector<std::vector<Rational>> lifts{{}};
  for (const auto& [first, last] : ranges) {
    std::vector<std::vector<Rational>> next;
    for (const auto& partial : lifts) {
      for (Integer n = first; n <= last; ++n) {
        auto v = partial;
        v.emplace_back(n);
        next.push_back(std::move(v));
      }
    }
    lifts = std::move(next);
  }
  return lifts;
}

std::vector<ConstraintVector> project_to_fundamental(const ConstraintVector& m,
                                                     const MultiplierFamily& family) {
  const int dim = m.dim();
  const Rational half(1, 2);
  std::vector<ConstraintVector> pieces;
  for (const auto& lift : integer_lifts(m)) {
    std::vector<Rational> lo(m.lowers().begin(), m.lowers().end());
    std::vector<Rational> hi(m.uppers().begin(), m.uppers().end());
    for (int i = 1; i <= dim; ++i) {
      const auto k = flat_index(ConstraintIndex{i, i});
      const Rational& n = lift[static_cast<std::size_t>(i - 1)];
      if (lo[k] < n - half) lo[k] = n - half;
      if (hi[k] > n + half) hi[k] = n + half;
    }
    auto piece = canonicalize(dim, lo, hi, family);
    if (!piece) continue;
    std::vector<Rational> back(lift.size());
    for (std::size_t i = 0; i < lift.size(); ++i) back[i] = -lift[i];
    pieces.push_back(translate(*piece, back));
  }
  return pieces;
}

std::vector<ConstraintVector> cylinder(const AtomTable& table, std::span<const int> word,
                                       const MultiplierFamily& family) {
  if (word.empty()) throw std::invalid_argument("empty cylinder word");
  for (int a : word)
    if (a < 1 || static_cast<std::size_t>(a) > table.size())
      throw std::invalid_argument("cylinder word letter out of range: " + std::to_string(a));
  std::vector<ConstraintVector> pieces{table.atom(word.back()).bounds};
  for (std::size_t k = word.size() - 1; k-- > 0;) {
    const Atom& atom = table.atom(word[k]);
    const auto lifts = integer_lifts(gamma(table.params(), atom, atom.bounds));
    std::vector<ConstraintVector> next;
    for (const auto& p : pieces) {
      for (const auto& lift : lifts) {
        const auto pre = gamma_inverse(table.params(), atom, translate(p, lift));
        if (auto q = intersect(atom.bounds, pre, family)) next.push_back(std::move(*q));
      }
    }
    pieces = std::move(next);
    if (pieces.empty()) break;
  }
  return pieces;
}

std::optional<ConstraintVector> cylinder(const AtomTable& table, std::span<const int> word,
                                         std::span<const std::vector<int>> lifts,
                                         const MultiplierFamily& family) {
  if (word.empty()) throw std::invalid_argument("empty cylinder word");
  if (lifts.size() + 1 != word.size())
    throw std::invalid_argument("a lifted word needs one lift per transition");
  for (int a : word)
    if (a < 1 || static_cast<std::size_t>(a) > table.size())
      throw std::invalid_argument("cylinder word letter out of range: " + std::to_string(a));
  for (const auto& n : lifts)
    if (n.size() != static_cast<std::size_t>(table.dim()))
      throw std::invalid_argument("lift has wrong dimension");
  std::optional<ConstraintVector> piece = table.atom(word.back()).bounds;
  for (std::size_t k = word.size() - 1; k-- > 0;) {
    const Atom& atom = table.atom(word[k]);
    const std::vector<Rational> shift(lifts[k].begin(), lifts[k].end());
    piece = intersect(atom.bounds, gamma_inverse(table.params(), atom, translate(*piece, shift)),
                      family);
    if (!piece) break;
  }
  return piece;
}

namespace {

using IntMatrix = std::vector<std::vector<int>>;

const std::map<std::string, IntMatrix, std::less<>>& symmetry_table(int dim) {
  static const std::map<std::string, IntMatrix, std::less<>> d2{
      {"-Id", {{-1, 0}, {0, -1}}},
      {"s213", {{-1, 0}, {1, 1}}},
      {"s132", {{1, 1}, {0, -1}}},
      {"s321", {{0, -1}, {-1, 0}}},
  };
  static const std::map<std::string, IntMatrix, std::less<>> d3{
      {"-Id", {{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}},
      {"s2134", {{-1, 0, 0}, {1, 1, 0}, {0, 0, 1}}},
      {"s3214", {{0, -1, 0}, {-1, 0, 0}, {1, 1, 1}}},
      {"s4231", {{0, -1, -1}, {0, 1, 0}, {-1, -1, 0}}},
      {"s1324", {{1, 1, 0}, {0, -1, 0}, {0, 1, 1}}},
      {"s1432", {{1, 1, 1}, {0, 0, -1}, {0, -1, 0}}},
      {"s1243", {{1, 0, 0}, {0, 1, 1}, {0, 0, -1}}},
  };
  if (dim == 2) return d2;
  if (dim == 3) return d3;
  throw std::invalid_argument("named symmetries exist only for dimensions 2 and 3");
}

}  // namespace

std::vector<std::string> symmetry_names(int dim) {
  std::vector<std::string> names;
  for (const auto& [name, _] : symmetry_table(dim)) names.push_back(name);
  return names;
}

std::vector<Rational> apply_named_symmetry(std::string_view name, std::span<const Rational> x) {
  const int dim = static_cast<int>(x.size());
  const auto& table = symmetry_table(dim);
  bool negate = false;
  if (!name.empty() && name.front() == '-' && name != "-Id") {
    negate = true;
    name.remove_prefix(1);
  }
  std::vector<std::string_view> factors;
  while (true) {
    const auto star = name.find('*');
    factors.push_back(name.substr(0, star));
    if (star == std::string_view::npos) break;
    name.remove_prefix(star + 1);
  }
  std::vector<Rational> y(x.begin(), x.end());
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    auto found = table.find(*it);
    if (found == table.end()) throw std::invalid_argument("unknown symmetry: " + std::string(*it));
    std::vector<Rational> z(y.size(), 0);
    for (std::size_t r = 0; r < y.size(); ++r)
      for (std::size_t c = 0; c < y.size(); ++c) z[r] += found->second[r][c] * y[c];
    y = std::move(z);
  }
  for (auto& v : y) v = reduce_mod1(negate ? Rational(-v) : v);
  return y;
}

}  // namespace inasup
