#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "inasup/constraint_vector.hpp"
#include "inasup/optimizer.hpp"
#include "inasup/rational.hpp"

namespace inasup {

/// Dimension D of the reduced torus map and its coupling epsilon in [0, 1/2).
class MapParams {
 public:
  MapParams(int dim, Rational epsilon);

  int dim() const { return dim_; }
  const Rational& epsilon() const { return epsilon_; }
  /// 2(1 - epsilon), the uniform expansion factor.
  const Rational& expansion() const { return expansion_; }
  /// 2 epsilon / (D + 1), the weight of B_D.
  const Rational& coupling() const { return coupling_; }

 private:
  int dim_;
  Rational epsilon_;
  Rational expansion_;
  Rational coupling_;
};

/// Thrown when a point sits on a discontinuity plane (some contiguous sum in
/// 1/2 + Z). Such points form a null set and are never assigned a branch.
class DiscontinuityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool is_half_integer(const Rational& u);

/// floor(u + 1/2), and 0 on 1/2 + Z.
long h(const Rational& u);

/// Representative of u mod 1 in [-1/2, 1/2).
Rational reduce_mod1(const Rational& u);

/// h-values of every contiguous sum, flat order. Throws DiscontinuityError.
std::vector<int> signature_of(std::span<const Rational> x);

/// B_D evaluated from the h-values of contiguous sums (flat order).
std::vector<long> b_from_signature(int dim, std::span<const int> signature);

/// B_D(x) with exact h.
std::vector<long> b_vector(std::span<const Rational> x);

/// G_{D,eps}(x) reduced into [-1/2, 1/2)^D. x must lie in S_D and off the
/// discontinuity planes.
std::vector<Rational> apply_G(const MapParams& params, std::span<const Rational> x);

/// F_{N,eps}(u) = 2u_i + (2 eps / N) sum_j g(u_j - u_i) mod 1, reduced into
/// [-1/2, 1/2). Throws DiscontinuityError if some u_j - u_i is in 1/2 + Z.
std::vector<Rational> apply_F(int n, const Rational& epsilon, std::span<const Rational> u);

/// pi_N(u): successive differences then the total sum, each reduced mod 1.
std::vector<Rational> project_pi(std::span<const Rational> u);

/// An atom of the partition of S_D: the maximal open polytope on which the
/// h-signature of all contiguous sums, and hence B_D, is constant.
struct Atom {
  int label = 0;
  std::vector<int> signature;          // flat order
  ConstraintVector bounds;             // optimized
  std::vector<long> b;                 // B_D on the atom
  std::vector<Rational> gamma_offset;  // coupling * sum_{k=i..j} b_k, flat order
};

/// Bounds (signature - 1/2, signature + 1/2) before optimization.
ConstraintVector raw_atom_bounds(int dim, std::span<const int> signature);

/// All feasible signatures in depth-first order (flat index order, candidate
/// values ascending). Runs subtrees concurrently when OpenMP is enabled; the
/// result order is identical to enumerate_signatures_serial.
std::vector<std::vector<int>> enumerate_signatures(int dim);
std::vector<std::vector<int>> enumerate_signatures_serial(int dim);

class AtomTable {
 public:
  explicit AtomTable(const MapParams& params);

  const MapParams& params() const { return params_; }
  int dim() const { return params_.dim(); }
  std::size_t size() const { return atoms_.size(); }
  /// Labels are 1-based.
  const Atom& atom(int label) const { return atoms_.at(static_cast<std::size_t>(label - 1)); }
  std::span<const Atom> atoms() const { return atoms_; }

  /// Label of the atom -A_label.
  int flip_label(int label) const { return flip_.at(static_cast<std::size_t>(label - 1)); }
  std::optional<int> label_of(std::span<const int> signature) const;
  /// nullopt on discontinuity planes.
  std::optional<int> locate(std::span<const Rational> x) const;

  /// "label | (i,j):k ... | b_1 ... b_D", one atom per line.
  void dump(std::ostream& out) const;

 private:
  MapParams params_;
  std::vector<Atom> atoms_;
  std::vector<int> flip_;
  std::map<std::vector<int>, int> by_signature_;
};

/// Image of P_m under G restricted to `atom` (no reduction mod 1).
ConstraintVector gamma(const MapParams& params, const Atom& atom, const ConstraintVector& m);
ConstraintVector gamma_inverse(const MapParams& params, const Atom& atom,
                               const ConstraintVector& m);

/// Pieces of (P_m mod 1) inside S_D: P_m is cut along every plane
/// x_i in 1/2 + Z it crosses and each nonempty piece is shifted back by an
/// integer vector. Pieces are optimized with `family`.
std::vector<ConstraintVector> project_to_fundamental(const ConstraintVector& m,
                                                     const MultiplierFamily& family);

/// Integer lifts n such that P_m + n can meet S_D, per coordinate range.
std::vector<std::vector<Rational>> integer_lifts(const ConstraintVector& m);

/// Cylinder set of a word of 1-based atom labels, as a union of convex pieces
/// (one per admissible sequence of integer lifts). Empty result means the
/// cylinder is empty. Throws std::invalid_argument on bad letters.
std::vector<ConstraintVector> cylinder(const AtomTable& table, std::span<const int> word,
                                       const MultiplierFamily& family);

/// The convex piece of the cylinder selected by integer lifts: lifts[k] is the
/// integer vector n with Gamma_{a_k}(x) = x' + n for the transition from
/// letter k to letter k+1. nullopt when that piece is empty.
std::optional<ConstraintVector> cylinder(const AtomTable& table, std::span<const int> word,
                                         std::span<const std::vector<int>> lifts,
                                         const MultiplierFamily& family);

/// Names of the generators available for `dim` (2 or 3), e.g. "-Id", "s321".
std::vector<std::string> symmetry_names(int dim);

/// Applies a named transformation, reduced into [-1/2, 1/2)^D. Compositions
/// are written "s213*s321" (rightmost acts first); a leading '-' composes with
/// the sign flip. Throws std::invalid_argument for unknown names.
std::vector<Rational> apply_named_symmetry(std::string_view name, std::span<const Rational> x);

}  // namespace inasup
