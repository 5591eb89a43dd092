#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "inasup/constraint_vector.hpp"
#include "inasup/dynamics.hpp"
#include "inasup/optimizer.hpp"

namespace inasup {

/// Atom labels a_0..a_l, optionally with the integer lift of each transition
/// (as recorded along a trajectory). With lifts the seed is one convex piece of
/// the cylinder; without, it is the whole cylinder.
/// Text form: "3,1,2" or "3,1,2|1:1,-1:0" (one D-vector per transition).
struct CylinderWord {
  std::vector<int> letters;
  std::vector<std::vector<int>> lifts;
  auto operator<=>(const CylinderWord&) const = default;
};

/// Shared immutable context for one (D, epsilon): atoms and multiplier sets.
class Workspace {
 public:
  explicit Workspace(const MapParams& params);

  const MapParams& params() const { return atoms_.params(); }
  const AtomTable& atoms() const { return atoms_; }
  const MultiplierFamily& family() const { return *family_; }

 private:
  AtomTable atoms_;
  const MultiplierFamily* family_;
};

/// A finished invariant asymmetric union of polytopes.
struct Certificate {
  int dim = 0;
  Rational epsilon;
  CylinderWord word;
  std::vector<ConstraintVector> polytopes;
};

class CertificateFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "INASUP v1", "D=<d> eps=<p>/<q> word=<a0,a1,...>", "count=<n>", then n
/// constraint vectors.
void write_certificate(std::ostream& out, const Certificate& cert);
Certificate read_certificate(std::istream& in);

enum class Outcome { Success, AsymmetryFail, BudgetExceeded };
const char* to_string(Outcome outcome);

struct BuildOptions {
  std::size_t max_cardinality = 10'000'000;
  /// Run the construction with O' (support <= 2 multipliers). The final
  /// verification always uses the full operator.
  bool semi_optimize = false;
  bool verify = true;
};

struct ConstructionReport {
  Outcome outcome = Outcome::AsymmetryFail;
  std::size_t steps = 0;
  std::size_t final_cardinality = 0;
  double cpu_seconds = 0;
  std::optional<Certificate> certificate;  // set on Success
  std::optional<bool> verified;            // set on Success when BuildOptions::verify
};

/// Iterates the seed cylinder forward, storing the parts of each image not yet
/// covered, until the union is invariant (Success), meets its own sign flip
/// (AsymmetryFail) or holds max_cardinality polytopes (BudgetExceeded).
/// Throws std::invalid_argument for bad letters or an empty cylinder.
ConstructionReport build_inasup(const Workspace& ws, const CylinderWord& word,
                                const BuildOptions& options = {});

struct VerifyReport {
  bool well_formed = true;
  bool covered = true;
  bool asymmetric = true;
  std::string detail;
  bool ok() const { return well_formed && covered && asymmetric; }
};

/// Independent check of G(P) ⊂ P (mod 0) and P ∩ -P = ∅ with the full
/// optimizer. Coverage of every image piece is certified by exhaustive set
/// difference against the stored polytopes.
VerifyReport verify_certificate(const Workspace& ws, const Certificate& cert);
VerifyReport verify_certificate(const Certificate& cert);

/// Drops polytopes one at a time while the certificate still verifies, until
/// no single polytope can be removed.
Certificate minimize_certificate(const Workspace& ws, Certificate cert);

/// Seed pieces of a word: the lifted piece, or every piece of the cylinder.
std::vector<ConstraintVector> seed_pieces(const Workspace& ws, const CylinderWord& word);

/// Distinct windows of `length` letters over a recorded atom-label sequence,
/// in order of first appearance. `lifts` is empty or holds D integers per
/// label (the lift of the step leaving that point); windows then carry their
/// lifts. Windows containing a flagged label (0) or defining an empty seed are
/// skipped. Stops after `count` words. Throws std::invalid_argument if
/// `length` exceeds the sequence.
std::vector<CylinderWord> seed_words(const Workspace& ws, std::span<const int> labels,
                                     std::span<const int> lifts, std::size_t length,
                                     std::size_t count);

std::string format_word(const CylinderWord& word);
CylinderWord parse_word(const std::string& text);

}  // namespace inasup
