#pragma once

#include <functional>
#include <map>

#include "fibrant/model.hpp"
#include "fibrant/presheaf.hpp"

namespace fibrant {

/// Binary product with projections. Nondegenerate cells are the shuffle
/// pairs: jointly nondegenerate pairs of formal cells.
struct ProductResult {
  PSh object;
  PresheafMap proj1, proj2;
  /// Locate the product cell of a pair of formal cells of equal degree.
  std::function<FormalCell(const FormalCell&, const FormalCell&)> pair;
};

ProductResult product(const PSh& x, const PSh& y);
PresheafMap product_map(const PresheafMap& f, const PresheafMap& g, const ProductResult& src,
                        const ProductResult& tgt);
/// Universal map W -> X x Y from a cone (u : W -> X, v : W -> Y).
PresheafMap product_pair(const ProductResult& prod, const PresheafMap& u, const PresheafMap& v);

/// Fiber product of f : Y -> X and g : Z -> X, with projections.
struct PullbackResult {
  PSh object;
  PresheafMap proj1, proj2;  // to Y and Z
  std::function<FormalCell(const FormalCell&, const FormalCell&)> pair;
};

PullbackResult pullback(const PresheafMap& f, const PresheafMap& g);
PresheafMap pullback_universal(const PullbackResult& pb, const PresheafMap& u, const PresheafMap& v);

/// Pushout of f : A -> B and g : A -> C, with injections and the universal
/// map out of it.
struct PushoutResult {
  PSh object;
  PresheafMap inj1, inj2;  // from B and C
  std::function<PresheafMap(const PresheafMap&, const PresheafMap&)> universal;
};

PushoutResult pushout(const PresheafMap& f, const PresheafMap& g);

/// The pushout-product (i : A -> B) square (j : C -> D), the canonical map
/// (B x C) cup_{A x C} (A x D) -> B x D.
PresheafMap pushout_product(const PresheafMap& i, const PresheafMap& j);

/// Enumeration of structure-preserving maps by backtracking over
/// nondegenerate cells in increasing total degree.
struct EnumOptions {
  const PresheafMap* over_p = nullptr;  // p : Y -> X
  const PresheafMap* over_v = nullptr;  // v : A -> X; constrains p(w(a)) = v(a)
  const std::map<int, FormalCell>* prescribed = nullptr;
  bool injective_nondeg = false;  // images nondegenerate, distinct per degree
  size_t limit = SIZE_MAX;
};

std::vector<std::vector<FormalCell>> enumerate_maps(const PSh& a, const PSh& y, const EnumOptions& opt = {});
std::optional<PresheafMap> find_isomorphism(const PSh& a, const PSh& y);

/// A mapping space Map(X, Y): an arity-1 presheaf whose n-cells are the
/// maps X x D[n] -> Y (D[n] the space-direction representable), possibly
/// relative to a base. Keeps enough data to induce maps functorially.
class MapSpace {
 public:
  PSh space;  // arity 1

  const PresheafMap& cell_map(int id) const;        // map for a nondegenerate cell
  int degree_of(int id) const;
  /// Locate an arbitrary map X x D[n] -> Y as a formal cell of the space.
  FormalCell locate(int n, const PresheafMap& m) const;
  const ProductResult& domain(int n) const;
  const PSh& source() const { return x_; }
  const PSh& target() const { return y_; }

 private:
  friend MapSpace map_space(const PSh&, const PSh&, int, const EnumOptions&);
  PSh x_, y_;
  std::shared_ptr<Ingested> ing_;
  std::map<int, ProductResult> domains_;
  std::map<std::string, PresheafMap> maps_;  // keyed by label
  std::vector<std::pair<int, std::string>> label_of_id_;
};

/// Largest sound space-degree for Map(X, Y); negative means refusal.
int map_space_sound_bound(const PSh& x, const PSh& y);

/// Build Map(X, Y) through degree N. Throws RefusalError when N exceeds the
/// sound bound for a complete X; incomplete X yields a truncation-qualified
/// space (flagged incomplete).
MapSpace map_space(const PSh& x, const PSh& y, int n, const EnumOptions& opt = {});

/// Map_{/X}(Z, Y) for structure maps q : Z -> X and p : Y -> X.
MapSpace map_space_over(const PresheafMap& q, const PresheafMap& p, int n);

/// Induced map Map(B, Y) -> Map(A, Y) from i : A -> B (precomposition).
PresheafMap map_space_restrict(const MapSpace& mb, const MapSpace& ma, const PresheafMap& i);
/// Induced map Map(X, Y) -> Map(X, Z) from p : Y -> Z (postcomposition).
PresheafMap map_space_push(const MapSpace& my, const MapSpace& mz, const PresheafMap& p);

/// Internal hom Y^X of presheaves of equal arity: degree-d cells are the
/// maps X x R(d) -> Y for the representable R(d).
class HomObject {
 public:
  PSh object;
  const PresheafMap& cell_map(int id) const;
  FormalCell locate(const Multidegree& d, const PresheafMap& m) const;
  const ProductResult& domain(const Multidegree& d) const;
  const PSh& exponent() const { return x_; }
  const PSh& base() const { return y_; }

 private:
  friend HomObject internal_hom(const PSh&, const PSh&, const Multidegree&);
  PSh x_, y_;
  std::shared_ptr<Ingested> ing_;
  std::map<Multidegree, ProductResult, DegreeLess> domains_;
  std::map<std::string, PresheafMap> maps_;
  std::vector<std::pair<Multidegree, std::string>> label_of_id_;
};

HomObject internal_hom(const PSh& x, const PSh& y, const Multidegree& out_trunc);
PresheafMap hom_restrict(const HomObject& hb, const HomObject& ha, const PresheafMap& i);
PresheafMap hom_push(const HomObject& hy, const HomObject& hx, const PresheafMap& p);

/// The pullback-exponential exp(i, p): Y^B -> Y^A x_{X^A} X^B.
PresheafMap pullback_exponential(const PresheafMap& i, const PresheafMap& p,
                                 const Multidegree& out_trunc);

/// The representable at a multidegree, as a product of direction-embedded
/// simplices, truncated at trunc.
ProductResult representable(const Multidegree& d, const Multidegree& trunc);
/// The space-direction representable D[n] used by MapSpace.
PSh space_simplex(int arity, int n, const Multidegree& trunc);

}  // namespace fibrant
