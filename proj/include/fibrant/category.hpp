#pragma once

#include <string>
#include <vector>

#include "fibrant/model.hpp"
#include "fibrant/presheaf.hpp"

namespace fibrant {

/// A finite category presented by objects, generating arrows and word
/// relations, with the composition closure tabulated up to a word-length
/// cap. Morphisms are equivalence classes of composable generator words.
class FiniteCategory {
 public:
  struct Generator {
    std::string name;
    int src = 0;
    int tgt = 0;
  };

  struct Morphism {
    std::vector<int> word;  // generator ids, first applied first; empty = identity
    int src = 0;
    int tgt = 0;
  };

  static FiniteCategory chain(int n);         // the poset [n]
  static FiniteCategory iso_groupoid(int l);  // objects 0..l, unique iso between any two
  static FiniteCategory fence();              // 0 -> 1 <- 2
  static FiniteCategory from_presentation(std::vector<std::string> objects,
                                          std::vector<Generator> arrows,
                                          std::vector<std::pair<std::vector<int>, std::vector<int>>> relations,
                                          int word_cap);
  static FiniteCategory product(const FiniteCategory& c, const FiniteCategory& d);

  int num_objects() const { return static_cast<int>(objects_.size()); }
  const std::string& object_name(int o) const { return objects_[static_cast<size_t>(o)]; }
  int object_index(const std::string& name) const;
  int num_morphisms() const { return static_cast<int>(mors_.size()); }
  const Morphism& mor(int id) const { return mors_[static_cast<size_t>(id)]; }
  int identity(int obj) const { return ids_[static_cast<size_t>(obj)]; }
  bool is_identity(int m) const { return mor(m).word.empty(); }
  int compose(int g, int f) const;  // g after f
  std::vector<int> homset(int a, int b) const;
  const std::vector<Generator>& generators() const { return gens_; }
  int generator_morphism(int gen) const { return gen_mor_[static_cast<size_t>(gen)]; }
  int morphism_of_word(const std::vector<int>& word) const;

  /// The slice category over an object: objects are morphisms into x.
  /// proj_obj[i] is the source in the original category of the i-th slice
  /// object; proj_mor identifies each slice generator with a morphism.
  struct Slice {
    FiniteCategory cat;
    std::vector<int> obj_target;  // slice object -> morphism id into x
  };
  Slice slice_over(int x) const;

 private:
  std::vector<std::string> objects_;
  std::vector<Generator> gens_;
  std::vector<Morphism> mors_;
  std::vector<int> ids_;
  std::vector<int> gen_mor_;
  std::vector<std::vector<int>> comp_;  // comp_[g][f] = g after f, -1 if not composable
};

/// Nerve of a finite category as an arity-1 presheaf, truncated at dim.
/// Complete exactly when the category has no composable chains of
/// non-identity arrows longer than dim.
Ingested nerve(const FiniteCategory& c, int dim);

/// The nerve as a discrete simplicial space (constant in the space
/// direction).
PSh nerve2(const FiniteCategory& c, int dim, int space_trunc);

/// Vertex inclusion F(0) -> nerve for an object.
PresheafMap nerve_vertex(const PSh& nrv, const FiniteCategory& c, int obj);

}  // namespace fibrant
