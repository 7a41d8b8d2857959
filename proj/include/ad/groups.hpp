#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ad/linalg.hpp"

namespace ad {

/// Permutation of {0,...,M-1}; map[k] is the image of index k.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> map);

  static Permutation identity(int degree);
  /// Parse cycle notation, e.g. "(0 1 2)(3 4)". Unlisted points are fixed.
  static Permutation from_cycles(int degree, const std::string& cycles);

  int degree() const { return static_cast<int>(map_.size()); }
  int operator()(int k) const { return map_[k]; }
  const std::vector<int>& map() const { return map_; }

  /// (a.compose(b))(k) = a(b(k)), matching P_a P_b = P_{a.compose(b)}.
  Permutation compose(const Permutation& other) const;
  Permutation inverse() const;
  bool is_identity() const;

  std::string cycle_notation() const;

  bool operator==(const Permutation& other) const { return map_ == other.map_; }
  bool operator<(const Permutation& other) const { return map_ < other.map_; }

 private:
  std::vector<int> map_;
};

/// Concrete permutation group: identity-first element list, closed under
/// composition and inverse.
struct FiniteGroup {
  int degree = 0;
  std::vector<Permutation> elements;
  std::vector<Permutation> generators;
  std::string label;

  std::size_t size() const { return elements.size(); }
  bool contains(const Permutation& p) const;
  /// Index of p in the element list, or nullopt.
  std::optional<std::size_t> index_of(const Permutation& p) const;
};

constexpr std::size_t kGroupCapDefault = 5040;

struct GroupSpec {
  enum class Kind { cyclic, dihedral, product, elementary2, trivial };
  Kind kind = Kind::trivial;
  int M = 1;
  std::vector<int> factors;  // product only
};

FiniteGroup make_group(const GroupSpec& spec);

/// Convenience constructors.
FiniteGroup cyclic_group(int M);
FiniteGroup dihedral_group(int M);
FiniteGroup product_group(const std::vector<int>& factors);
FiniteGroup elementary2_group(int M);
FiniteGroup trivial_group(int M);

/// Breadth-first closure of the generating set; deterministic discovery order.
FiniteGroup group_from_generators(int degree, const std::vector<Permutation>& gens,
                                  std::size_t cap = kGroupCapDefault,
                                  const std::string& label = "gen-closure");

/// One product group per isomorphism class of Abelian groups of order M,
/// ordered by descending largest cyclic factor.
std::vector<FiniteGroup> enumerate_abelian_groups(int M);

bool is_subgroup(const FiniteGroup& h, const FiniteGroup& g);

struct AbelianizationResult {
  FiniteGroup commutator;      // [G,G] on the same degree
  std::size_t quotient_order;  // |G| / |[G,G]|
  std::vector<Permutation> coset_reps;
};

AbelianizationResult abelianization(const FiniteGroup& g,
                                    std::size_t cap = kGroupCapDefault);

/// Unitary representation of a finite group on C^M: permutation matrices, or
/// a diagonal-unitary conjugation of them (chirp case).
class Representation {
 public:
  enum class Kind { permutation, conjugated };

  explicit Representation(FiniteGroup group);
  Representation(FiniteGroup group, std::vector<cplx> conjugator_diag);

  const FiniteGroup& group() const { return group_; }
  Kind kind() const { return kind_; }
  int degree() const { return group_.degree; }
  std::size_t size() const { return group_.size(); }

  /// pi_g x for the element at index g.
  std::vector<cplx> apply(std::size_t g, const std::vector<cplx>& x) const;
  /// Dense pi_g.
  ComplexMatrix matrix(std::size_t g) const;

 private:
  FiniteGroup group_;
  Kind kind_;
  std::vector<cplx> diag_;  // unit-modulus; empty for permutation kind
};

std::vector<std::vector<cplx>> orbit(const Representation& rep,
                                     const std::vector<cplx>& x);

enum class OrbitStatistic { outer_product, component0, squared_norm };

/// Numeric rank of the matrix whose rows are the vectorized statistic over
/// the orbit; singular values below tol * largest are treated as zero.
std::size_t effective_group_order(const Representation& rep, OrbitStatistic stat,
                                  const std::vector<cplx>& x, double tol = 1e-9);

/// Parse CLI group spec strings: "Z8", "D6", "Z4xZ2", "E2^3", "trivial",
/// "gen:(0 1 2 3 4 5)". degree_hint is required for "trivial" and "gen:".
FiniteGroup parse_group_spec(const std::string& spec, int degree_hint = 0);

}  // namespace ad
