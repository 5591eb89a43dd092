#include "inasup/engine.hpp"

#include <algorithm>
#include <ctime>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "inasup/chopper.hpp"
#include "inasup/polytope.hpp"

namespace inasup {

Workspace::Workspace(const MapParams& params)
    : atoms_(params), family_(&standard_family(params.dim())) {}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Success: return "Success";
    case Outcome::AsymmetryFail: return "AsymmetryFail";
    case Outcome::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

std::string format_word(const CylinderWord& word) {
  std::string s;
  for (std::size_t k = 0; k < word.letters.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(word.letters[k]);
  }
  for (std::size_t k = 0; k < word.lifts.size(); ++k) {
    s += k ? ',' : '|';
    for (std::size_t i = 0; i < word.lifts[k].size(); ++i) {
      if (i) s += ':';
      s += std::to_string(word.lifts[k][i]);
    }
  }
  return s;
}

namespace {

std::vector<int> parse_ints(const std::string& text, char sep) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("bad integer: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

CylinderWord parse_word(const std::string& text) {
  CylinderWord word;
  const auto bar = text.find('|');
  word.letters = parse_ints(text.substr(0, bar), ',');
  if (word.letters.empty()) throw std::invalid_argument("empty word");
  if (bar != std::string::npos) {
    std::istringstream in(text.substr(bar + 1));
    std::string lift;
    while (std::getline(in, lift, ',')) word.lifts.push_back(parse_ints(lift, ':'));
    if (word.lifts.size() + 1 != word.letters.size())
      throw std::invalid_argument("a lifted word needs one lift per transition");
    for (const auto& n : word.lifts)
      if (n.empty() || n.size() != word.lifts.front().size())
        throw std::invalid_argument("ragged lifts");
  }
  return word;
}

// ---------------------------------------------------------------------------
// Certificate file

void write_certificate(std::ostream& out, const Certificate& cert) {
  out << "INASUP v1\n";
  out << "D=" << cert.dim << " eps=" << to_string(cert.epsilon) << " word=" << format_word(cert.word)
      << '\n';
  out << "count=" << cert.polytopes.size() << '\n';
  for (const auto& m : cert.polytopes) write_constraint_vector(out, m);
}

Certificate read_certificate(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "INASUP v1")
    throw CertificateFormatError("missing 'INASUP v1' header");
  Certificate cert;
  if (!std::getline(in, line)) throw CertificateFormatError("missing parameter line");
  {
    std::istringstream fields(line);
    std::string d, eps, word, extra;
    if (!(fields >> d >> eps >> word) || (fields >> extra) || d.rfind("D=", 0) != 0 ||
        eps.rfind("eps=", 0) != 0 || word.rfind("word=", 0) != 0)
      throw CertificateFormatError("malformed parameter line: '" + line + "'");
    try {
      std::size_t used = 0;
      cert.dim = std::stoi(d.substr(2), &used);
      if (used != d.size() - 2 || cert.dim < 1) throw std::invalid_argument("dim");
      cert.epsilon = parse_rational(eps.substr(4));
      if (to_string(cert.epsilon) != eps.substr(4)) throw std::invalid_argument("eps");
      cert.word = parse_word(word.substr(5));
    } catch (const std::exception& e) {
      throw CertificateFormatError("malformed parameter line: '" + line + "'");
    }
  }
  if (!std::getline(in, line) || line.rfind("count=", 0) != 0)
    throw CertificateFormatError("missing count line");
  std::size_t count = 0;
  try {
    std::size_t used = 0;
    count = std::stoul(line.substr(6), &used);
    if (used != line.size() - 6) throw std::invalid_argument("count");
  } catch (const std::exception&) {
    throw CertificateFormatError("malformed count line: '" + line + "'");
  }
  for (std::size_t n = 0; n < count; ++n) {
    try {
      cert.polytopes.push_back(read_constraint_vector(in, cert.dim));
    } catch (const std::exception& e) {
      throw CertificateFormatError("polytope " + std::to_string(n) + ": " + e.what());
    }
  }
  if (std::getline(in, line) && !line.empty())
    throw CertificateFormatError("trailing data after last polytope");
  return cert;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

struct Stored {
  ConstraintVector m;
  ConstraintVector flipped;
  int atom;
};

class Collection {
 public:
  explicit Collection(std::size_t atom_count) : buckets_(atom_count) {}

  void add(ConstraintVector m, int atom) {
    auto flipped = sign_flip(m);
    buckets_[static_cast<std::size_t>(atom - 1)].push_back(items_.size());
    items_.push_back(Stored{std::move(m), std::move(flipped), atom});
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Stored& operator[](std::size_t k) const { return items_[k]; }
  const std::vector<std::size_t>& bucket(int atom) const {
    return buckets_[static_cast<std::size_t>(atom - 1)];
  }
  std::vector<Stored> take() {
    for (auto& b : buckets_) b.clear();
    return std::exchange(items_, {});
  }

 private:
  std::vector<Stored> items_;
  std::vector<std::vector<std::size_t>> buckets_;
};

bool meets_flip_of(const ConstraintVector& q, const Collection& c, int flip_atom,
                   const MultiplierFamily& family) {
  for (std::size_t k : c.bucket(flip_atom)) {
    const auto& f = c[k].flipped;
    if (bounds_overlap(q, f) && intersect(q, f, family)) return true;
  }
  return false;
}

// Removes from `residual` everything covered by the polytopes of `c` in
// `atom`, chopping partially covered pieces when the two/three-piece rule
// applies.
void chop_against(std::vector<ConstraintVector>& residual, const Collection& c, int atom,
                  const MultiplierFamily& family) {
  for (std::size_t k : c.bucket(atom)) {
    if (residual.empty()) return;
    const auto& stored = c[k].m;
    std::vector<ConstraintVector> next;
    for (auto& r : residual) {
      if (!bounds_overlap(r, stored)) {
        next.push_back(std::move(r));
        continue;
      }
      auto inner = intersect(r, stored, family);
      if (!inner) {
        next.push_back(std::move(r));
        continue;
      }
      if (includes(stored, r)) continue;
      if (includes(r, stored)) {
        next.push_back(std::move(r));
        continue;
      }
      auto chop = try_chop(r, stored, *inner, family);
      if (chop.kind == ChopKind::NoChop) {
        next.push_back(std::move(r));
      } else {
        for (auto& piece : chop.outers) next.push_back(std::move(piece));
      }
    }
    residual = std::move(next);
  }
}

double cpu_now() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

}  // namespace

ConstructionReport build_inasup(const Workspace& ws, const CylinderWord& word,
                                const BuildOptions& options) {
  const double start = cpu_now();
  const auto& table = ws.atoms();
  const auto& params = ws.params();
  const MultiplierFamily& family = options.semi_optimize ? ws.family().semi() : ws.family();

  auto seed = seed_pieces(ws, word);
  if (seed.empty()) throw std::invalid_argument("cylinder of word " + format_word(word) + " is empty");
  if (options.semi_optimize)
    for (auto& piece : seed) piece = *canonicalize(piece, family);

  ConstructionReport report;
  const int seed_atom = word.letters.front();
  Collection up(table.size()), np(table.size()), ep(table.size());
  for (const auto& piece : seed) up.add(piece, seed_atom);

  auto finish = [&](Outcome outcome) {
    report.outcome = outcome;
    report.final_cardinality = up.size() + ep.size();
    report.cpu_seconds = cpu_now() - start;
    return report;
  };

  for (std::size_t a = 0; a < up.size(); ++a)
    if (meets_flip_of(up[a].m, up, table.flip_label(seed_atom), family))
      return finish(Outcome::AsymmetryFail);
  for (const auto& piece : seed) np.add(piece, seed_atom);

  while (!np.empty()) {
    if (up.size() >= options.max_cardinality) return finish(Outcome::BudgetExceeded);
    for (std::size_t n = 0; n < np.size(); ++n) {
      const Atom& source = table.atom(np[n].atom);
      const auto image = gamma(params, source, np[n].m);
      for (const auto& piece : project_to_fundamental(image, family)) {
        for (const Atom& target : table.atoms()) {
          if (!bounds_overlap(piece, target.bounds)) continue;
          auto q = intersect(piece, target.bounds, family);
          if (!q) continue;
          const int flip = table.flip_label(target.label);
          if (flip == target.label && intersect(*q, sign_flip(*q), family))
            return finish(Outcome::AsymmetryFail);
          if (meets_flip_of(*q, up, flip, family) || meets_flip_of(*q, ep, flip, family))
            return finish(Outcome::AsymmetryFail);
          std::vector<ConstraintVector> residual{std::move(*q)};
          chop_against(residual, up, target.label, family);
          chop_against(residual, ep, target.label, family);
          for (auto& r : residual) ep.add(std::move(r), target.label);
          if (up.size() + ep.size() >= options.max_cardinality)
            return finish(Outcome::BudgetExceeded);
        }
      }
    }
    ++report.steps;
    np = Collection(table.size());
    for (auto& s : ep.take()) {
      np.add(s.m, s.atom);
      up.add(std::move(s.m), s.atom);
    }
  }

  report.outcome = Outcome::Success;
  report.final_cardinality = up.size();
  Certificate cert{params.dim(), params.epsilon(), word, {}};
  for (std::size_t k = 0; k < up.size(); ++k) cert.polytopes.push_back(up[k].m);
  report.cpu_seconds = cpu_now() - start;
  if (options.verify) report.verified = verify_certificate(ws, cert).ok();
  report.certificate = std::move(cert);
  return report;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

struct Indexed {
  std::vector<ConstraintVector> polytopes;
  std::vector<std::vector<std::size_t>> by_atom;  // polytopes meeting each atom
};

bool covered_by(ConstraintVector piece, const Indexed& cert, int atom,
                const MultiplierFamily& family) {
  std::vector<ConstraintVector> residual{std::move(piece)};
  for (std::size_t k : cert.by_atom[static_cast<std::size_t>(atom - 1)]) {
    const auto& c = cert.polytopes[k];
    std::vector<ConstraintVector> next;
    for (auto& r : residual) {
      if (!bounds_overlap(r, c)) {
        next.push_back(std::move(r));
      } else if (!includes(c, r)) {
        for (auto& p : subtract(r, c, family)) next.push_back(std::move(p));
      }
    }
    residual = std::move(next);
    if (residual.empty()) return true;
  }
  return residual.empty();
}

}  // namespace

VerifyReport verify_certificate(const Workspace& ws, const Certificate& cert) {
  VerifyReport report;
  const auto& family = ws.family();
  const auto& table = ws.atoms();
  const auto& params = ws.params();
  auto fail = [&](bool VerifyReport::*field, std::string detail) {
    report.*field = false;
    if (report.detail.empty()) report.detail = std::move(detail);
    return report;
  };

  if (cert.dim != params.dim() || cert.epsilon != params.epsilon())
    return fail(&VerifyReport::well_formed, "certificate parameters do not match workspace");
  if (cert.polytopes.empty()) return fail(&VerifyReport::well_formed, "certificate has no polytopes");

  Indexed idx;
  idx.by_atom.resize(table.size());
  // pieces[k] = (atom, polytope k restricted to that atom)
  std::vector<std::vector<std::pair<int, ConstraintVector>>> pieces(cert.polytopes.size());
  const Rational half(1, 2);
  for (std::size_t k = 0; k < cert.polytopes.size(); ++k) {
    auto m = canonicalize(cert.polytopes[k], family);
    if (!m) return fail(&VerifyReport::well_formed, "polytope " + std::to_string(k) + " is empty");
    for (int i = 1; i <= params.dim(); ++i) {
      const ConstraintIndex c{i, i};
      if (m->lower(c) < -half || m->upper(c) > half)
        return fail(&VerifyReport::well_formed,
                    "polytope " + std::to_string(k) + " leaves the fundamental domain");
    }
    for (const Atom& atom : table.atoms()) {
      if (!bounds_overlap(*m, atom.bounds)) continue;
      if (auto part = intersect(*m, atom.bounds, family)) {
        idx.by_atom[static_cast<std::size_t>(atom.label - 1)].push_back(k);
        pieces[k].emplace_back(atom.label, std::move(*part));
      }
    }
    idx.polytopes.push_back(std::move(*m));
  }

  // P ∩ -P = ∅
  std::set<std::pair<std::size_t, std::size_t>> checked;
  for (const Atom& atom : table.atoms()) {
    for (std::size_t a : idx.by_atom[static_cast<std::size_t>(atom.label - 1)]) {
      for (std::size_t b : idx.by_atom[static_cast<std::size_t>(table.flip_label(atom.label) - 1)]) {
        if (!checked.emplace(std::min(a, b), std::max(a, b)).second) continue;
        const auto flipped = sign_flip(idx.polytopes[b]);
        if (bounds_overlap(idx.polytopes[a], flipped) && intersect(idx.polytopes[a], flipped, family))
          return fail(&VerifyReport::asymmetric, "polytope " + std::to_string(a) +
                                                     " meets the sign flip of polytope " +
                                                     std::to_string(b));
      }
    }
  }

  // G(P) ⊂ P mod 0
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    for (const auto& [label, part] : pieces[k]) {
      const auto image = gamma(params, table.atom(label), part);
      for (const auto& p : project_to_fundamental(image, family)) {
        for (const Atom& target : table.atoms()) {
          if (!bounds_overlap(p, target.bounds)) continue;
          auto q = intersect(p, target.bounds, family);
          if (!q) continue;
          if (!covered_by(std::move(*q), idx, target.label, family))
            return fail(&VerifyReport::covered, "image of polytope " + std::to_string(k) +
                                                    " is not covered in atom " +
                                                    std::to_string(target.label));
        }
      }
    }
  }
  return report;
}

VerifyReport verify_certificate(const Certificate& cert) {
  return verify_certificate(Workspace(MapParams(cert.dim, cert.epsilon)), cert);
}

Certificate minimize_certificate(const Workspace& ws, Certificate cert) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = cert.polytopes.size(); k-- > 0;) {
      if (cert.polytopes.size() == 1) break;
      Certificate trial = cert;
      trial.polytopes.erase(trial.polytopes.begin() + static_cast<std::ptrdiff_t>(k));
      if (verify_certificate(ws, trial).ok()) {
        cert = std::move(trial);
        changed = true;
      }
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Seeds

std::vector<ConstraintVector> seed_pieces(const Workspace& ws, const CylinderWord& word) {
  if (word.lifts.empty()) return cylinder(ws.atoms(), word.letters, ws.family());
  auto piece = cylinder(ws.atoms(), word.letters, word.lifts, ws.family());
  if (!piece) return {};
  return {std::move(*piece)};
}

std::vector<CylinderWord> seed_words(const Workspace& ws, std::span<const int> labels,
                                     std::span<const int> lifts, std::size_t length,
                                     std::size_t count) {
  if (length == 0) throw std::invalid_argument("window length must be positive");
  if (length > labels.size()) throw std::invalid_argument("window longer than the trajectory");
  const auto dim = static_cast<std::size_t>(ws.params().dim());
  const bool lifted = !lifts.empty();
  if (lifted && lifts.size() != labels.size() * dim)
    throw std::invalid_argument("need D lifts per recorded label");

  std::vector<CylinderWord> words;
  std::set<CylinderWord> seen;
  for (std::size_t start = 0; start + length <= labels.size() && words.size() < count; ++start) {
    CylinderWord w;
    w.letters.assign(labels.begin() + static_cast<std::ptrdiff_t>(start),
                     labels.begin() + static_cast<std::ptrdiff_t>(start + length));
    if (std::find(w.letters.begin(), w.letters.end(), 0) != w.letters.end()) continue;
    if (lifted)
      for (std::size_t k = start; k + 1 < start + length; ++k)
        w.lifts.emplace_back(lifts.begin() + static_cast<std::ptrdiff_t>(k * dim),
                             lifts.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim));
    if (!seen.insert(w).second) continue;
    if (seed_pieces(ws, w).empty()) continue;
    words.push_back(std::move(w));
  }
  return words;
}

}  // namespace inasup
