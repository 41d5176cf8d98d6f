#include "fibrant/presheaf.hpp"

#include <algorithm>
#include <sstream>

namespace fibrant {

std::string degree_key(const Multidegree& d) {
  std::string s;
  for (size_t i = 0; i < d.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(d[i]);
  }
  return s;
}

Multidegree degree_from_key(const std::string& s) {
  Multidegree d;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) d.push_back(std::stoi(part));
  return d;
}

std::vector<Multidegree> degrees_upto(const Multidegree& trunc) {
  std::vector<Multidegree> out;
  Multidegree cur(trunc.size(), 0);
  while (true) {
    out.push_back(cur);
    size_t i = trunc.size();
    while (i > 0 && cur[i - 1] == trunc[i - 1]) {
      cur[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
    ++cur[i - 1];
  }
  std::sort(out.begin(), out.end(), DegreeLess{});
  return out;
}

std::string formal_key(const FormalCell& f) {
  std::string s = std::to_string(f.cell);
  for (auto& w : f.words) {
    s += '|';
    for (size_t i = 0; i < w.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(w[i]);
    }
  }
  return s;
}

FormalCell formal_from_key(const std::string& s) {
  FormalCell f;
  std::stringstream ss(s);
  std::string part;
  std::getline(ss, part, '|');
  f.cell = std::stoi(part);
  while (std::getline(ss, part, '|')) {
    DegWord w;
    std::stringstream ws(part);
    std::string x;
    while (std::getline(ws, x, ',')) w.push_back(std::stoi(x));
    f.words.push_back(std::move(w));
  }
  return f;
}

const std::vector<int>& Presheaf::cells_at(const Multidegree& d) const {
  static const std::vector<int> kEmpty;
  auto it = by_degree_.find(d);
  return it == by_degree_.end() ? kEmpty : it->second;
}

Multidegree Presheaf::dims() const {
  Multidegree m(static_cast<size_t>(arity_), 0);
  for (auto& c : cells_)
    for (int t = 0; t < arity_; ++t) m[static_cast<size_t>(t)] = std::max(m[static_cast<size_t>(t)], c.deg[static_cast<size_t>(t)]);
  return m;
}

Multidegree Presheaf::formal_degree(const FormalCell& f) const {
  const auto& base = cell(f.cell).deg;
  Multidegree d(base);
  for (int t = 0; t < arity_; ++t) d[static_cast<size_t>(t)] += static_cast<int>(f.words[static_cast<size_t>(t)].size());
  return d;
}

std::vector<FormalCell> Presheaf::formal_cells_at(const Multidegree& d) const {
  std::vector<FormalCell> out;
  for (auto& [deg, ids] : by_degree_) {
    if (!deg_leq(deg, d)) continue;
    // all tuples of degeneracy words lifting deg to d, one per direction
    std::vector<std::vector<DegWord>> choices(static_cast<size_t>(arity_));
    for (int t = 0; t < arity_; ++t) {
      for (auto& s : all_surjections(d[static_cast<size_t>(t)], deg[static_cast<size_t>(t)]))
        choices[static_cast<size_t>(t)].push_back(surjection_to_word(s));
    }
    std::vector<DegWord> pick(static_cast<size_t>(arity_));
    std::function<void(int, int)> rec = [&](int id, int t) {
      if (t == arity_) {
        out.push_back(FormalCell{id, pick});
        return;
      }
      for (auto& w : choices[static_cast<size_t>(t)]) {
        pick[static_cast<size_t>(t)] = w;
        rec(id, t + 1);
      }
    };
    for (int id : ids) rec(id, 0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

long long Presheaf::cell_count(const Multidegree& d) const {
  if (!deg_leq(d, trunc_))
    throw RefusalError("cell_count beyond truncation " + degree_key(trunc_), degree_key(d));
  long long n = 0;
  for (auto& [deg, ids] : by_degree_) {
    if (!deg_leq(deg, d)) continue;
    long long ways = 1;
    for (int t = 0; t < arity_; ++t) ways *= count_surjections(d[static_cast<size_t>(t)], deg[static_cast<size_t>(t)]);
    n += ways * static_cast<long long>(ids.size());
  }
  return n;
}

FormalCell Presheaf::apply_injections(int cellId, std::vector<Ordinal> inj) const {
  const CellRecord& rec = cell(cellId);
  for (int t = 0; t < arity_; ++t) {
    auto& io = inj[static_cast<size_t>(t)];
    if (io.is_identity()) continue;
    // largest missing value of the injection
    int a = -1;
    {
      std::vector<bool> hit(static_cast<size_t>(io.codomain) + 1, false);
      for (int v : io.vals) hit[static_cast<size_t>(v)] = true;
      for (int v = io.codomain; v >= 0; --v)
        if (!hit[static_cast<size_t>(v)]) {
          a = v;
          break;
        }
    }
    const FormalCell& g = rec.faces[static_cast<size_t>(t)][static_cast<size_t>(a)];
    std::vector<Ordinal> ops;
    ops.reserve(static_cast<size_t>(arity_));
    for (int s = 0; s < arity_; ++s) {
      if (s == t) {
        std::vector<int> v;
        v.reserve(io.vals.size());
        for (int x : io.vals) v.push_back(x > a ? x - 1 : x);
        ops.emplace_back(std::move(v), io.codomain - 1);
      } else {
        ops.push_back(inj[static_cast<size_t>(s)]);
      }
    }
    return act(g, ops);
  }
  FormalCell out;
  out.cell = cellId;
  out.words.assign(static_cast<size_t>(arity_), {});
  return out;
}

FormalCell Presheaf::act(const FormalCell& f, const std::vector<Ordinal>& ops) const {
  std::vector<Ordinal> inj(static_cast<size_t>(arity_));
  std::vector<Ordinal> epi(static_cast<size_t>(arity_));
  const auto& base = cell(f.cell).deg;
  for (int t = 0; t < arity_; ++t) {
    int m = ops[static_cast<size_t>(t)].codomain;
    Ordinal w = word_to_surjection(f.words[static_cast<size_t>(t)], m);
    (void)base;
    Ordinal total = compose(w, ops[static_cast<size_t>(t)]);
    EpiMono em = factorize(total);
    inj[static_cast<size_t>(t)] = std::move(em.mono);
    epi[static_cast<size_t>(t)] = std::move(em.epi);
  }
  FormalCell g = apply_injections(f.cell, std::move(inj));
  FormalCell out;
  out.cell = g.cell;
  out.words.resize(static_cast<size_t>(arity_));
  for (int t = 0; t < arity_; ++t) {
    Ordinal gw = word_to_surjection(g.words[static_cast<size_t>(t)], epi[static_cast<size_t>(t)].codomain);
    out.words[static_cast<size_t>(t)] = surjection_to_word(compose(gw, epi[static_cast<size_t>(t)]));
  }
  return out;
}

FormalCell Presheaf::face(const FormalCell& f, int dir, int i) const {
  Multidegree d = formal_degree(f);
  std::vector<Ordinal> ops;
  ops.reserve(static_cast<size_t>(arity_));
  for (int t = 0; t < arity_; ++t)
    ops.push_back(t == dir ? coface(d[static_cast<size_t>(t)], i) : ordinal_id(d[static_cast<size_t>(t)]));
  return act(f, ops);
}

FormalCell Presheaf::degenerate(const FormalCell& f, int dir, int i) const {
  Multidegree d = formal_degree(f);
  std::vector<Ordinal> ops;
  ops.reserve(static_cast<size_t>(arity_));
  for (int t = 0; t < arity_; ++t)
    ops.push_back(t == dir ? codegeneracy(d[static_cast<size_t>(t)], i) : ordinal_id(d[static_cast<size_t>(t)]));
  return act(f, ops);
}

namespace {

void check_structure(const Presheaf& p) {
  for (int id = 0; id < p.num_cells(); ++id) {
    const CellRecord& c = p.cell(id);
    if (static_cast<int>(c.deg.size()) != p.arity()) throw StructuralError("cell degree arity mismatch");
    if (!deg_leq(c.deg, p.truncation())) throw StructuralError("cell beyond truncation");
    if (static_cast<int>(c.faces.size()) != p.arity()) throw StructuralError("face table arity mismatch");
    for (int t = 0; t < p.arity(); ++t) {
      int dt = c.deg[static_cast<size_t>(t)];
      size_t want = dt >= 1 ? static_cast<size_t>(dt) + 1 : 0;
      if (c.faces[static_cast<size_t>(t)].size() != want) throw StructuralError("face table size mismatch");
      for (int i = 0; i < static_cast<int>(want); ++i) {
        const FormalCell& g = c.faces[static_cast<size_t>(t)][static_cast<size_t>(i)];
        if (g.cell < 0 || g.cell >= p.num_cells()) throw StructuralError("face references unknown cell");
        if (static_cast<int>(g.words.size()) != p.arity()) throw StructuralError("face word arity mismatch");
        Multidegree fd = p.formal_degree(g);
        Multidegree expect = c.deg;
        expect[static_cast<size_t>(t)] -= 1;
        if (fd != expect) throw StructuralError("face degree mismatch at cell " + std::to_string(id));
        for (auto& w : g.words)
          for (size_t k = 1; k < w.size(); ++k)
            if (w[k] >= w[k - 1]) throw StructuralError("degeneracy word not strictly decreasing");
      }
    }
  }
}

}  // namespace

Verdict Presheaf::validate() const {
  check_structure(*this);
  for (int id = 0; id < num_cells(); ++id) {
    const CellRecord& c = cell(id);
    FormalCell self{id, std::vector<DegWord>(static_cast<size_t>(arity_))};
    for (int t = 0; t < arity_; ++t) {
      int dt = c.deg[static_cast<size_t>(t)];
      if (dt < 2) continue;
      for (int j = 1; j <= dt; ++j)
        for (int i = 0; i < j; ++i) {
          FormalCell lhs = face(face(self, t, j), t, i);
          FormalCell rhs = face(face(self, t, i), t, j - 1);
          if (lhs != rhs) {
            Json ev{{"identity", "d_i d_j = d_{j-1} d_i"},
                    {"cell", id},
                    {"direction", t},
                    {"i", i},
                    {"j", j}};
            return Verdict::make_fails(ev).with_bound("truncation=" + degree_key(trunc_));
          }
        }
    }
    for (int t = 0; t < arity_; ++t)
      for (int s = t + 1; s < arity_; ++s) {
        int dt = c.deg[static_cast<size_t>(t)], ds = c.deg[static_cast<size_t>(s)];
        if (dt < 1 || ds < 1) continue;
        for (int i = 0; i <= dt; ++i)
          for (int j = 0; j <= ds; ++j) {
            FormalCell lhs = face(face(self, t, i), s, j);
            FormalCell rhs = face(face(self, s, j), t, i);
            if (lhs != rhs) {
              Json ev{{"identity", "cross-direction faces commute"},
                      {"cell", id},
                      {"directions", {t, s}},
                      {"i", i},
                      {"j", j}};
              return Verdict::make_fails(ev).with_bound("truncation=" + degree_key(trunc_));
            }
          }
      }
  }
  Json ev{{"checked_cells", num_cells()}};
  return Verdict::make_holds(ev).with_bound("truncation=" + degree_key(trunc_));
}

bool Presheaf::same_table(const Presheaf& o) const {
  if (arity_ != o.arity_ || trunc_ != o.trunc_ || cells_.size() != o.cells_.size()) return false;
  for (size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].deg != o.cells_[i].deg) return false;
    if (cells_[i].faces != o.cells_[i].faces) return false;
  }
  return true;
}

PresheafBuilder::PresheafBuilder(int arity, Multidegree trunc, bool complete) {
  if (arity < 1 || arity > 3) throw SpecError("arity must be 1, 2 or 3");
  if (static_cast<int>(trunc.size()) != arity) throw SpecError("truncation arity mismatch");
  p_.arity_ = arity;
  p_.trunc_ = std::move(trunc);
  p_.complete_ = complete;
}

int PresheafBuilder::add_cell(const Multidegree& deg, std::string name) {
  if (!deg_leq(deg, p_.trunc_)) throw StructuralError("cell beyond truncation");
  CellRecord rec;
  rec.deg = deg;
  rec.name = std::move(name);
  rec.faces.resize(static_cast<size_t>(p_.arity_));
  for (int t = 0; t < p_.arity_; ++t)
    if (deg[static_cast<size_t>(t)] >= 1)
      rec.faces[static_cast<size_t>(t)].resize(static_cast<size_t>(deg[static_cast<size_t>(t)]) + 1);
  int id = static_cast<int>(p_.cells_.size());
  p_.cells_.push_back(std::move(rec));
  p_.by_degree_[deg].push_back(id);
  return id;
}

void PresheafBuilder::set_face(int id, int dir, int i, FormalCell target) {
  p_.cells_.at(static_cast<size_t>(id)).faces.at(static_cast<size_t>(dir)).at(static_cast<size_t>(i)) = std::move(target);
}

PSh PresheafBuilder::finish(bool check) {
  auto out = std::make_shared<Presheaf>(std::move(p_));
  if (check) check_structure(*out);
  return out;
}

FormalCell PresheafMap::apply(const FormalCell& f) const {
  const FormalCell& img = assign.at(static_cast<size_t>(f.cell));
  FormalCell out;
  out.cell = img.cell;
  out.words.resize(f.words.size());
  const auto& base = source->cell(f.cell).deg;
  for (size_t t = 0; t < f.words.size(); ++t) {
    Ordinal wf = word_to_surjection(f.words[t], base[t] + static_cast<int>(f.words[t].size()));
    Ordinal wi = word_to_surjection(img.words[t], base[t]);
    out.words[t] = surjection_to_word(compose(wi, wf));
  }
  return out;
}

Verdict PresheafMap::validate() const {
  if (!source || !target) throw StructuralError("map with null endpoints");
  if (source->arity() != target->arity()) throw StructuralError("map arity mismatch");
  if (!deg_leq(source->truncation(), target->truncation()))
    throw StructuralError("map source truncation exceeds target truncation");
  if (static_cast<int>(assign.size()) != source->num_cells()) throw StructuralError("assignment size mismatch");
  for (int id = 0; id < source->num_cells(); ++id) {
    const CellRecord& c = source->cell(id);
    const FormalCell& img = assign[static_cast<size_t>(id)];
    if (img.cell < 0 || img.cell >= target->num_cells()) throw StructuralError("assignment references unknown cell");
    if (target->formal_degree(img) != c.deg) throw StructuralError("assignment degree mismatch");
    FormalCell self{id, std::vector<DegWord>(static_cast<size_t>(source->arity()))};
    for (int t = 0; t < source->arity(); ++t) {
      int dt = c.deg[static_cast<size_t>(t)];
      if (dt < 1) continue;
      for (int i = 0; i <= dt; ++i) {
        FormalCell lhs = apply(source->face(self, t, i));
        FormalCell rhs = target->face(img, t, i);
        if (lhs != rhs) {
          Json ev{{"cell", id}, {"direction", t}, {"face", i}};
          return Verdict::make_fails(ev);
        }
      }
    }
  }
  return Verdict::make_holds(Json{{"checked_cells", source->num_cells()}});
}

PresheafMap compose(const PresheafMap& g, const PresheafMap& f) {
  if (f.target.get() != g.source.get() && !f.target->same_table(*g.source))
    throw StructuralError("compose: middle objects differ");
  PresheafMap out;
  out.source = f.source;
  out.target = g.target;
  out.assign.reserve(f.assign.size());
  for (const auto& img : f.assign) out.assign.push_back(g.apply(img));
  return out;
}

PresheafMap identity_map(const PSh& x) {
  PresheafMap m;
  m.source = x;
  m.target = x;
  m.assign.reserve(static_cast<size_t>(x->num_cells()));
  for (int id = 0; id < x->num_cells(); ++id)
    m.assign.push_back(FormalCell{id, std::vector<DegWord>(static_cast<size_t>(x->arity()))});
  return m;
}

bool same_map(const PresheafMap& a, const PresheafMap& b) {
  return a.source->same_table(*b.source) && a.target->same_table(*b.target) && a.assign == b.assign;
}

Verdict is_mono(const PresheafMap& f) {
  for (auto& d : degrees_upto(f.source->truncation())) {
    auto cells = f.source->formal_cells_at(d);
    std::map<FormalCell, FormalCell> seen;
    for (auto& c : cells) {
      FormalCell img = f.apply(c);
      auto [it, fresh] = seen.emplace(img, c);
      if (!fresh) {
        Json ev{{"degree", degree_key(d)},
                {"cells", {formal_key(it->second), formal_key(c)}},
                {"image", formal_key(img)}};
        return Verdict::make_fails(ev).with_bound("truncation=" + degree_key(f.source->truncation()));
      }
    }
  }
  return Verdict::make_holds(Json{{"levelwise_injective", true}})
      .with_bound("truncation=" + degree_key(f.source->truncation()));
}

PSh restrict_truncation(const PSh& x, const Multidegree& trunc) {
  Multidegree t = deg_min(x->truncation(), trunc);
  PresheafBuilder b(x->arity(), t, x->complete() && deg_leq(x->dims(), t));
  std::vector<int> remap(static_cast<size_t>(x->num_cells()), -1);
  for (auto& [deg, ids] : x->by_degree()) {
    if (!deg_leq(deg, t)) continue;
    for (int id : ids) remap[static_cast<size_t>(id)] = b.add_cell(deg, x->cell(id).name);
  }
  for (int id = 0; id < x->num_cells(); ++id) {
    if (remap[static_cast<size_t>(id)] < 0) continue;
    const CellRecord& c = x->cell(id);
    for (int dir = 0; dir < x->arity(); ++dir)
      for (size_t i = 0; i < c.faces[static_cast<size_t>(dir)].size(); ++i) {
        FormalCell g = c.faces[static_cast<size_t>(dir)][i];
        g.cell = remap[static_cast<size_t>(g.cell)];
        b.set_face(remap[static_cast<size_t>(id)], dir, static_cast<int>(i), std::move(g));
      }
  }
  return b.finish();
}

PresheafMap restrict_map(const PresheafMap& f, const Multidegree& trunc) {
  PresheafMap out;
  out.source = restrict_truncation(f.source, trunc);
  out.target = restrict_truncation(f.target, trunc);
  // id remapping is degree-order preserving, so rebuild by position
  std::vector<int> src_old, tgt_old;
  for (auto& [deg, ids] : f.source->by_degree())
    if (deg_leq(deg, trunc))
      for (int id : ids) src_old.push_back(id);
  std::vector<int> tgt_new(static_cast<size_t>(f.target->num_cells()), -1);
  {
    int k = 0;
    for (auto& [deg, ids] : f.target->by_degree())
      if (deg_leq(deg, trunc))
        for (int id : ids) tgt_new[static_cast<size_t>(id)] = k++;
  }
  for (int id : src_old) {
    FormalCell img = f.assign[static_cast<size_t>(id)];
    img.cell = tgt_new[static_cast<size_t>(img.cell)];
    if (img.cell < 0) throw StructuralError("restrict_map: image escapes truncation");
    out.assign.push_back(std::move(img));
  }
  return out;
}

PSh extend_truncation(const PSh& x, const Multidegree& trunc) {
  if (!x->complete()) throw RefusalError("cannot extend truncation of an incomplete presheaf", degree_key(trunc));
  Multidegree t(trunc);
  for (size_t i = 0; i < t.size(); ++i) t[i] = std::max(t[i], x->truncation()[i]);
  PresheafBuilder b(x->arity(), t, true);
  for (int id = 0; id < x->num_cells(); ++id) b.add_cell(x->cell(id).deg, x->cell(id).name);
  for (int id = 0; id < x->num_cells(); ++id) {
    const CellRecord& c = x->cell(id);
    for (int dir = 0; dir < x->arity(); ++dir)
      for (size_t i = 0; i < c.faces[static_cast<size_t>(dir)].size(); ++i)
        b.set_face(id, dir, static_cast<int>(i), c.faces[static_cast<size_t>(dir)][i]);
  }
  return b.finish();
}

PSh empty_presheaf(int arity, const Multidegree& trunc) {
  PresheafBuilder b(arity, trunc, true);
  return b.finish();
}

PSh terminal_presheaf(int arity, const Multidegree& trunc) {
  PresheafBuilder b(arity, trunc, true);
  b.add_cell(Multidegree(static_cast<size_t>(arity), 0), "pt");
  return b.finish();
}

PresheafMap map_from_empty(const PSh& target) {
  PresheafMap m;
  m.source = empty_presheaf(target->arity(), target->truncation());
  m.target = target;
  return m;
}

PresheafMap map_to_terminal(const PSh& source, const PSh& term) {
  PresheafMap m;
  m.source = source;
  m.target = term;
  for (int id = 0; id < source->num_cells(); ++id) {
    FormalCell img;
    img.cell = 0;
    img.words.resize(static_cast<size_t>(source->arity()));
    const auto& deg = source->cell(id).deg;
    for (int t = 0; t < source->arity(); ++t) {
      for (int i = deg[static_cast<size_t>(t)] - 1; i >= 0; --i) img.words[static_cast<size_t>(t)].push_back(i);
    }
    m.assign.push_back(std::move(img));
  }
  return m;
}

}  // namespace fibrant
