#pragma once

#include <functional>
#include <string>
#include <unordered_map>

#include "fibrant/presheaf.hpp"

namespace fibrant {

/// An abstract presentation of a truncated presheaf: all cells at each
/// multidegree as opaque labels, plus the full contravariant action. The
/// ingestion routine extracts nondegenerate cells and normalized face
/// tables from it.
struct LabelModel {
  int arity = 1;
  Multidegree trunc;
  bool complete = false;
  /// Cells at a multidegree, in a canonical (deterministic) order.
  std::function<std::vector<std::string>(const Multidegree&)> cells;
  /// Action of ops[t] : [e_t] -> [d_t] on a label at degree d.
  std::function<std::string(const Multidegree& d, const std::vector<Ordinal>& ops, const std::string&)> act;
};

/// Result of normalizing a LabelModel into a stored Presheaf. Keeps the
/// model alive so arbitrary labels can still be located afterwards.
class Ingested {
 public:
  PSh presheaf;

  /// Normal form of an arbitrary label at degree d.
  FormalCell locate(const Multidegree& d, const std::string& label) const;
  /// Degree and label of each nondegenerate cell, by id.
  const std::vector<std::pair<Multidegree, std::string>>& labels() const;

 private:
  friend Ingested ingest(LabelModel model);
  LabelModel model_;
  mutable std::unordered_map<std::string, FormalCell> cache_;
  std::unordered_map<std::string, int> nondeg_;
  std::vector<std::pair<Multidegree, std::string>> labels_by_id_;
};

Ingested ingest(LabelModel model);

/// A reindexing functor Delta^a -> Delta^b described coordinatewise: each
/// coordinate of the source index category of the presheaf being reindexed
/// is either copied from an input coordinate or held constant.
struct ReindexCoord {
  int input = -1;    // >= 0: input coordinate index
  int constant = 0;  // used when input < 0
};

struct Reindexer {
  int in_arity = 1;
  std::vector<ReindexCoord> coords;  // one per coordinate of the presheaf acted on
  std::string name;

  Multidegree apply(const Multidegree& d) const;
  std::vector<Ordinal> apply_ops(const Multidegree& from, const Multidegree& to,
                                 const std::vector<Ordinal>& ops) const;
};

/// Standard reindexings (naming follows the role of each functor).
Reindexer rx_fdiag(int in_arity);            // merge first two directions
Reindexer rx_lemb();                         // simplicial space -> constant in dir 0
Reindexer rx_vemb();                         // simplicial space -> constant in dir 1
Reindexer rx_val(int k);                     // middle-level slice at k
Reindexer rx_lfib(int n);                    // outer-level slice at n
Reindexer rx_diag1();                        // ([n],[l]) -> ([n],[l],[l])
Reindexer rx_p1();                           // same as lemb (projection p1 pullback)
Reindexer rx_p2();                           // same as vemb (projection p2 pullback)
Reindexer rx_space_embed(int out_arity);     // simplicial set -> discrete object, dir 0
Reindexer rx_const_embed(int out_arity);     // simplicial set -> constant object, last dir
Reindexer rx_level_slice(int arity, int dir, int level);  // evaluate one direction
Reindexer rx_dir_embed(int out_arity, int dir);           // place arity-1 object in one direction
Reindexer by_name(const std::string& name, int arity_hint);

struct ReindexResult {
  PSh presheaf;
  /// Locate the image of a formal cell of the original presheaf sitting at
  /// degree r(d) as a cell of the reindexed presheaf at degree d.
  std::function<FormalCell(const Multidegree& d, const FormalCell&)> locate;
};

/// Precompose a presheaf with a reindexing functor. Unused input coordinates
/// need `requested` to fix their truncation; used coordinates are clamped to
/// the largest sound bound (an over-request throws RefusalError).
ReindexResult reindex(const PSh& x, const Reindexer& r,
                      const std::optional<Multidegree>& requested = std::nullopt);

/// Transport a map along a reindexing (both endpoints reindexed alike).
PresheafMap reindex_map(const PresheafMap& f, const Reindexer& r,
                        const std::optional<Multidegree>& requested = std::nullopt);

/// Convenience: the embedding of a simplicial space as a bisimplicial space
/// constant in the outer direction, truncated at `outer` there.
PSh lembed(const PSh& x, int outer_trunc);
PresheafMap lembed_map(const PresheafMap& f, int outer_trunc);
PSh vembed(const PSh& x, int middle_trunc);
PresheafMap vembed_map(const PresheafMap& f, int middle_trunc);

/// Reverse the order of one simplicial direction (the index-reversal
/// involution on Delta applied to that direction).
PSh reverse_direction(const PSh& x, int dir);
PresheafMap reverse_direction_map(const PresheafMap& f, int dir);

}  // namespace fibrant
