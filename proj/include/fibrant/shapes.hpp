#pragma once

#include "fibrant/category.hpp"
#include "fibrant/model.hpp"
#include "fibrant/presheaf.hpp"

namespace fibrant {

/// The standard simplex as an arity-1 presheaf, truncated (default: at n).
PSh delta(int n, int trunc = -1);

/// Canonical inclusions into delta(n); the maps carry their (sub)objects.
PresheafMap boundary_inclusion(int n, int trunc = -1);
PresheafMap horn_inclusion(int n, int i, int trunc = -1);

/// Map Delta[m] -> Delta[n] induced by a monotone map.
PresheafMap delta_map(const Ordinal& phi, int trunc_src = -1, int trunc_tgt = -1);

/// Nerve of the walking chain of isomorphisms on l+1 objects, truncated.
PSh walking_iso(int l, int dim);

/// Discrete simplicial space on an arity-1 presheaf (constant in the space
/// direction), and the corresponding map embedding.
PSh discrete_space(const PSh& x, int space_trunc);
PresheafMap discrete_space_map(const PresheafMap& f, int space_trunc);

/// The representable simplicial space F(n) = (k,l) -> Hom([k],[n]) and its
/// boundary, both truncated at trunc2 = (k-bound, l-bound).
PSh Fn(int n, const Multidegree& trunc2);
PresheafMap partialF_inclusion(int n, const Multidegree& trunc2);

/// E(n): the discrete simplicial space on the nerve of the walking
/// isomorphism groupoid. Incomplete at every truncation.
PSh En(int n, const Multidegree& trunc2);

/// The spine G(n), built as an iterated pushout of F(1)'s along F(0)'s,
/// with its canonical inclusion into F(n).
PresheafMap spine_inclusion(int n, const Multidegree& trunc2);

/// The morphism <a_0,...,a_k> : F(k) -> F(n) of representables (arity 2).
PresheafMap simplex_map(const std::vector<int>& word, int n, const Multidegree& trunc2);
/// <i> : F(0) -> F(n).
PresheafMap vertex_map(int n, int i, const Multidegree& trunc2);

/// <0> : F(0) -> E(1), the completeness inclusion, truncated.
PresheafMap completeness_inclusion(const Multidegree& trunc2);

/// The bisimplicial-space representable F(k,n) as an arity-3 presheaf
/// (constant in the space direction) and its boundary, the pushout-product
/// of the two directionwise boundary inclusions.
PSh F2(int k, int n, const Multidegree& trunc3);
PresheafMap partialF2_inclusion(int k, int n, const Multidegree& trunc3);

/// Uniform shape construction for the CLI et al.
struct ShapeSpec {
  std::string kind;  // delta, boundary, horn, J, F, partialF, E, G, F2, partialF2, nerve
  std::vector<int> params;
  Multidegree trunc;
  const FiniteCategory* category = nullptr;  // for nerve
};

struct ShapeResult {
  PSh object;
  std::optional<PresheafMap> inclusion;  // for boundary/horn/spine/partialF kinds
};

ShapeResult build_shape(const ShapeSpec& spec);

}  // namespace fibrant
