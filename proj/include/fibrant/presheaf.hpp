#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fibrant/errors.hpp"
#include "fibrant/ordinal.hpp"
#include "fibrant/verdict.hpp"

namespace fibrant {

/// A multidegree: one non-negative integer per simplicial direction.
using Multidegree = std::vector<int>;

inline int total_degree(const Multidegree& d) {
  int t = 0;
  for (int x : d) t += x;
  return t;
}
inline bool deg_leq(const Multidegree& a, const Multidegree& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}
inline Multidegree deg_min(const Multidegree& a, const Multidegree& b) {
  Multidegree m(a.size());
  for (size_t i = 0; i < a.size(); ++i) m[i] = std::min(a[i], b[i]);
  return m;
}
std::string degree_key(const Multidegree& d);
Multidegree degree_from_key(const std::string& s);

/// Canonical order on multidegrees: total degree first, then lexicographic.
struct DegreeLess {
  bool operator()(const Multidegree& a, const Multidegree& b) const {
    int ta = total_degree(a), tb = total_degree(b);
    if (ta != tb) return ta < tb;
    return a < b;
  }
};

/// All multidegrees componentwise <= trunc, in canonical order.
std::vector<Multidegree> degrees_upto(const Multidegree& trunc);

/// A cell in Eilenberg-Zilber normal form: a nondegenerate cell id together
/// with one normalized degeneracy word per direction.
struct FormalCell {
  int cell = -1;
  std::vector<DegWord> words;

  bool operator==(const FormalCell& o) const { return cell == o.cell && words == o.words; }
  bool operator!=(const FormalCell& o) const { return !(*this == o); }
  bool operator<(const FormalCell& o) const {
    if (cell != o.cell) return cell < o.cell;
    return words < o.words;
  }
  bool is_nondegenerate() const {
    for (auto& w : words)
      if (!w.empty()) return false;
    return true;
  }
};

std::string formal_key(const FormalCell& f);
FormalCell formal_from_key(const std::string& s);

struct CellRecord {
  Multidegree deg;
  // faces[t][i] is the i-th face in direction t, present when deg[t] >= 1.
  std::vector<std::vector<FormalCell>> faces;
  std::string name;
};

class Presheaf;
using PSh = std::shared_ptr<const Presheaf>;

/// A finite truncated presheaf on Delta^arity. Only nondegenerate cells are
/// stored; all other cells are reached through normalized degeneracy words.
/// Immutable after construction.
class Presheaf {
 public:
  using DegreeMap = std::map<Multidegree, std::vector<int>, DegreeLess>;

  int arity() const { return arity_; }
  const Multidegree& truncation() const { return trunc_; }
  /// True when every nondegenerate cell of the intended (untruncated) object
  /// is stored, so the truncation can be extended without new data.
  bool complete() const { return complete_; }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  bool empty() const { return cells_.empty(); }
  const CellRecord& cell(int id) const { return cells_.at(static_cast<size_t>(id)); }
  const DegreeMap& by_degree() const { return by_degree_; }
  const std::vector<int>& cells_at(const Multidegree& d) const;

  /// Per-direction maximum degree over stored nondegenerate cells.
  Multidegree dims() const;

  Multidegree formal_degree(const FormalCell& f) const;

  /// All cells (degenerate included) at a multidegree, in canonical order.
  std::vector<FormalCell> formal_cells_at(const Multidegree& d) const;
  long long cell_count(const Multidegree& d) const;

  /// Action of a tuple of monotone maps ops[t] : [e_t] -> [deg_t(f)] on a
  /// cell; the contravariant presheaf action, result in normal form.
  FormalCell act(const FormalCell& f, const std::vector<Ordinal>& ops) const;
  /// Elementary face/degeneracy in one direction.
  FormalCell face(const FormalCell& f, int dir, int i) const;
  FormalCell degenerate(const FormalCell& f, int dir, int i) const;

  Verdict validate() const;

  bool same_table(const Presheaf& o) const;

 private:
  friend class PresheafBuilder;
  FormalCell apply_injections(int cell, std::vector<Ordinal> inj) const;

  int arity_ = 1;
  Multidegree trunc_;
  bool complete_ = false;
  std::vector<CellRecord> cells_;
  DegreeMap by_degree_;
};

/// Accumulates cells and face tables, then freezes into a Presheaf with
/// canonical ids (ordered by degree, then insertion).
class PresheafBuilder {
 public:
  PresheafBuilder(int arity, Multidegree trunc, bool complete);
  int add_cell(const Multidegree& deg, std::string name = {});
  void set_face(int id, int dir, int i, FormalCell target);
  /// Finish without renumbering: ids keep insertion order. Requires cells
  /// to have been added in canonical degree order already.
  PSh finish(bool check_structure = true);

 private:
  Presheaf p_;
};

/// A structure-preserving assignment between presheaves of equal arity.
/// Images of nondegenerate source cells, in normal form in the target.
struct PresheafMap {
  PSh source;
  PSh target;
  std::vector<FormalCell> assign;  // indexed by source cell id

  FormalCell apply(const FormalCell& f) const;
  Verdict validate() const;
};

PresheafMap compose(const PresheafMap& g, const PresheafMap& f);
PresheafMap identity_map(const PSh& x);
bool same_map(const PresheafMap& a, const PresheafMap& b);

/// Levelwise injectivity on all cells (degenerate included), through the
/// source truncation.
Verdict is_mono(const PresheafMap& f);

/// Restrict a presheaf to a smaller truncation (drops cells above it).
PSh restrict_truncation(const PSh& x, const Multidegree& trunc);
PresheafMap restrict_map(const PresheafMap& f, const Multidegree& trunc);

/// Extend the truncation of a complete presheaf (no new nondegenerate
/// cells can appear, so this is free).
PSh extend_truncation(const PSh& x, const Multidegree& trunc);

/// The empty presheaf and the terminal (one-point) presheaf.
PSh empty_presheaf(int arity, const Multidegree& trunc);
PSh terminal_presheaf(int arity, const Multidegree& trunc);
PresheafMap map_from_empty(const PSh& target);
PresheafMap map_to_terminal(const PSh& source, const PSh& term);

}  // namespace fibrant
