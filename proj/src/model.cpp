#include "fibrant/model.hpp"

#include <algorithm>

namespace fibrant {

namespace {
std::string label_key(const Multidegree& d, const std::string& label) { return degree_key(d) + "#" + label; }

std::vector<Ordinal> elementary_ops(const Multidegree& d, int arity, int dir, const Ordinal& op) {
  std::vector<Ordinal> ops;
  ops.reserve(static_cast<size_t>(arity));
  for (int t = 0; t < arity; ++t) ops.push_back(t == dir ? op : ordinal_id(d[static_cast<size_t>(t)]));
  return ops;
}
}  // namespace

FormalCell Ingested::locate(const Multidegree& d, const std::string& label) const {
  std::string key = label_key(d, label);
  auto hit = cache_.find(key);
  if (hit != cache_.end()) return hit->second;
  auto nd = nondeg_.find(key);
  if (nd != nondeg_.end()) {
    FormalCell f{nd->second, std::vector<DegWord>(static_cast<size_t>(model_.arity))};
    cache_.emplace(key, f);
    return f;
  }
  for (int t = 0; t < model_.arity; ++t) {
    int dt = d[static_cast<size_t>(t)];
    for (int i = 0; i < dt; ++i) {
      Ordinal mu = compose(coface(dt, i), codegeneracy(dt - 1, i));
      if (model_.act(d, elementary_ops(d, model_.arity, t, mu), label) != label) continue;
      Multidegree d2 = d;
      d2[static_cast<size_t>(t)] -= 1;
      std::string y = model_.act(d, elementary_ops(d, model_.arity, t, coface(dt, i)), label);
      FormalCell rec = locate(d2, y);
      Ordinal w = word_to_surjection(rec.words[static_cast<size_t>(t)], d2[static_cast<size_t>(t)]);
      Ordinal tot = compose(w, codegeneracy(dt - 1, i));
      FormalCell out = rec;
      out.words[static_cast<size_t>(t)] = surjection_to_word(tot);
      cache_.emplace(key, out);
      return out;
    }
  }
  throw StructuralError("model enumeration missing nondegenerate label at degree " + degree_key(d));
}

const std::vector<std::pair<Multidegree, std::string>>& Ingested::labels() const { return labels_by_id_; }

Ingested ingest(LabelModel model) {
  Ingested out;
  out.model_ = model;
  PresheafBuilder b(model.arity, model.trunc, model.complete);
  for (auto& d : degrees_upto(model.trunc)) {
    for (auto& label : model.cells(d)) {
      bool degen = false;
      for (int t = 0; t < model.arity && !degen; ++t) {
        int dt = d[static_cast<size_t>(t)];
        for (int i = 0; i < dt && !degen; ++i) {
          Ordinal mu = compose(coface(dt, i), codegeneracy(dt - 1, i));
          if (model.act(d, elementary_ops(d, model.arity, t, mu), label) == label) degen = true;
        }
      }
      if (degen) continue;
      int id = b.add_cell(d);
      out.nondeg_.emplace(label_key(d, label), id);
      out.labels_by_id_.emplace_back(d, label);
    }
  }
  for (int id = 0; id < static_cast<int>(out.labels_by_id_.size()); ++id) {
    const auto& [d, label] = out.labels_by_id_[static_cast<size_t>(id)];
    for (int t = 0; t < model.arity; ++t) {
      int dt = d[static_cast<size_t>(t)];
      if (dt < 1) continue;
      Multidegree d2 = d;
      d2[static_cast<size_t>(t)] -= 1;
      for (int i = 0; i <= dt; ++i) {
        std::string y = model.act(d, elementary_ops(d, model.arity, t, coface(dt, i)), label);
        b.set_face(id, t, i, out.locate(d2, y));
      }
    }
  }
  out.presheaf = b.finish();
  return out;
}

Multidegree Reindexer::apply(const Multidegree& d) const {
  Multidegree e;
  e.reserve(coords.size());
  for (auto& c : coords) e.push_back(c.input >= 0 ? d[static_cast<size_t>(c.input)] : c.constant);
  return e;
}

std::vector<Ordinal> Reindexer::apply_ops(const Multidegree& /*from*/, const Multidegree& /*to*/,
                                          const std::vector<Ordinal>& ops) const {
  std::vector<Ordinal> out;
  out.reserve(coords.size());
  for (auto& c : coords)
    out.push_back(c.input >= 0 ? ops[static_cast<size_t>(c.input)] : ordinal_id(c.constant));
  return out;
}

Reindexer rx_fdiag(int in_arity) {
  // in_arity is the arity of the result; the acted-on presheaf has one more.
  Reindexer r;
  r.in_arity = in_arity;
  r.coords.push_back({0, 0});
  r.coords.push_back({0, 0});
  for (int j = 1; j < in_arity; ++j) r.coords.push_back({j, 0});
  r.name = "fDiag";
  return r;
}

Reindexer rx_lemb() { return Reindexer{3, {{-1, 0}, {0, 0}, {1, 0}}, "LEmb"}; }
Reindexer rx_vemb() { return Reindexer{3, {{0, 0}, {-1, 0}, {1, 0}}, "VEmb"}; }
Reindexer rx_val(int k) { return Reindexer{2, {{0, 0}, {-1, k}, {1, 0}}, "Val_" + std::to_string(k)}; }
Reindexer rx_lfib(int n) { return Reindexer{2, {{-1, n}, {0, 0}, {1, 0}}, "LFib_" + std::to_string(n)}; }
Reindexer rx_diag1() { return Reindexer{2, {{0, 0}, {1, 0}, {1, 0}}, "Diag1"}; }
Reindexer rx_p1() { return rx_lemb(); }
Reindexer rx_p2() { return rx_vemb(); }

Reindexer rx_space_embed(int out_arity) {
  Reindexer r;
  r.in_arity = out_arity;
  r.coords.push_back({0, 0});
  r.name = "discrete-embed";
  return r;
}

Reindexer rx_const_embed(int out_arity) {
  Reindexer r;
  r.in_arity = out_arity;
  r.coords.push_back({out_arity - 1, 0});
  r.name = "constant-embed";
  return r;
}

Reindexer rx_dir_embed(int out_arity, int dir) {
  Reindexer r;
  r.in_arity = out_arity;
  r.coords.push_back({dir, 0});
  r.name = "dir-embed-" + std::to_string(dir);
  return r;
}

Reindexer rx_level_slice(int arity, int dir, int level) {
  Reindexer r;
  r.in_arity = arity - 1;
  int j = 0;
  for (int i = 0; i < arity; ++i) {
    if (i == dir)
      r.coords.push_back({-1, level});
    else
      r.coords.push_back({j++, 0});
  }
  r.name = "slice-" + std::to_string(dir) + "@" + std::to_string(level);
  return r;
}

Reindexer by_name(const std::string& name, int arity_hint) {
  if (name == "fDiag") return rx_fdiag(arity_hint - 1);
  if (name == "LEmb" || name == "p1") return rx_lemb();
  if (name == "VEmb" || name == "p2") return rx_vemb();
  if (name == "Diag1") return rx_diag1();
  if (name == "Val") return rx_val(0);
  if (name.rfind("Val_", 0) == 0) return rx_val(std::stoi(name.substr(4)));
  if (name == "LFib") return rx_lfib(0);
  if (name.rfind("LFib_", 0) == 0) return rx_lfib(std::stoi(name.substr(5)));
  if (name == "discrete-embed") return rx_space_embed(arity_hint);
  if (name == "constant-embed") return rx_const_embed(arity_hint);
  throw UnsupportedError("unsupported reindexing functor: " + name);
}

ReindexResult reindex(const PSh& x, const Reindexer& r, const std::optional<Multidegree>& requested) {
  if (static_cast<int>(r.coords.size()) != x->arity())
    throw StructuralError("reindexer does not match presheaf arity");
  int a = r.in_arity;
  Multidegree tout(static_cast<size_t>(a), -1);
  for (int j = 0; j < a; ++j) {
    int sound = -1;
    for (size_t i = 0; i < r.coords.size(); ++i)
      if (r.coords[i].input == j)
        sound = sound < 0 ? x->truncation()[i] : std::min(sound, x->truncation()[i]);
    int bound;
    if (sound < 0) {
      if (!requested) throw SpecError("reindex(" + r.name + "): truncation required for free direction " + std::to_string(j));
      bound = (*requested)[static_cast<size_t>(j)];
    } else if (requested) {
      int req = (*requested)[static_cast<size_t>(j)];
      if (req > sound && !x->complete())
        throw RefusalError("reindex(" + r.name + ") beyond sound truncation", std::to_string(sound));
      bound = req;
    } else {
      bound = sound;
    }
    tout[static_cast<size_t>(j)] = bound;
  }
  for (size_t i = 0; i < r.coords.size(); ++i)
    if (r.coords[i].input < 0 && r.coords[i].constant > x->truncation()[i])
      throw RefusalError("reindex(" + r.name + "): constant level beyond truncation",
                         std::to_string(r.coords[i].constant));

  PSh base = x;
  {
    Multidegree e = r.apply(tout);
    Multidegree need = x->truncation();
    bool grow = false;
    for (size_t i = 0; i < need.size(); ++i)
      if (e[i] > need[i]) {
        need[i] = e[i];
        grow = true;
      }
    if (grow) base = extend_truncation(x, need);  // only reachable when complete
  }

  bool comp = base->complete();
  if (comp) {
    Multidegree dims = base->dims();
    for (int j = 0; j < a; ++j) {
      int sum = 0;
      bool used = false;
      for (size_t i = 0; i < r.coords.size(); ++i)
        if (r.coords[i].input == j) {
          sum += dims[i];
          used = true;
        }
      if (used && tout[static_cast<size_t>(j)] < sum) comp = false;
    }
  }

  LabelModel m;
  m.arity = a;
  m.trunc = tout;
  m.complete = comp;
  m.cells = [base, r](const Multidegree& d) {
    std::vector<std::string> out;
    for (auto& f : base->formal_cells_at(r.apply(d))) out.push_back(formal_key(f));
    return out;
  };
  m.act = [base, r](const Multidegree& d, const std::vector<Ordinal>& ops, const std::string& L) {
    FormalCell f = formal_from_key(L);
    Multidegree e(d.size());
    for (size_t j = 0; j < d.size(); ++j) e[j] = ops[j].domain();
    return formal_key(base->act(f, r.apply_ops(e, d, ops)));
  };
  auto ing = std::make_shared<Ingested>(ingest(std::move(m)));
  ReindexResult out;
  out.presheaf = ing->presheaf;
  out.locate = [ing](const Multidegree& d, const FormalCell& f) { return ing->locate(d, formal_key(f)); };
  return out;
}

PresheafMap reindex_map(const PresheafMap& f, const Reindexer& r, const std::optional<Multidegree>& requested) {
  ReindexResult rs = reindex(f.source, r, requested);
  std::optional<Multidegree> req2 = requested;
  if (!req2) req2 = rs.presheaf->truncation();
  ReindexResult rt = reindex(f.target, r, req2);
  if (!deg_leq(rs.presheaf->truncation(), rt.presheaf->truncation()))
    throw StructuralError("reindex_map: truncation mismatch");
  PresheafMap out;
  out.source = rs.presheaf;
  out.target = rt.presheaf;
  // recover each source cell as a formal cell of f.source at degree r(d)
  // by scanning: ids are in canonical degree order matching ingestion
  const auto& src = *rs.presheaf;
  // Rebuild labels through locate on formal cells of f.source
  // We re-ingest knowledge by matching through rs.locate: every formal cell
  // of f.source at r(d) lands somewhere; the nondegenerate ones with empty
  // words are exactly the cells of the reindexed object.
  std::vector<FormalCell> assign(static_cast<size_t>(src.num_cells()));
  std::vector<bool> done(static_cast<size_t>(src.num_cells()), false);
  for (auto& d : degrees_upto(src.truncation())) {
    for (auto& g : f.source->formal_cells_at(r.apply(d))) {
      FormalCell here = rs.locate(d, g);
      if (!here.is_nondegenerate() || done[static_cast<size_t>(here.cell)]) continue;
      done[static_cast<size_t>(here.cell)] = true;
      assign[static_cast<size_t>(here.cell)] = rt.locate(d, f.apply(g));
    }
  }
  for (bool ok : done)
    if (!ok) throw StructuralError("reindex_map: unmatched cell");
  out.assign = std::move(assign);
  return out;
}

PSh lembed(const PSh& x, int outer_trunc) {
  if (x->arity() != 2) throw StructuralError("lembed expects a simplicial space");
  Multidegree req{outer_trunc, x->truncation()[0], x->truncation()[1]};
  return reindex(x, rx_lemb(), req).presheaf;
}

PresheafMap lembed_map(const PresheafMap& f, int outer_trunc) {
  Multidegree req{outer_trunc, f.source->truncation()[0], f.source->truncation()[1]};
  return reindex_map(f, rx_lemb(), req);
}

PSh vembed(const PSh& x, int middle_trunc) {
  if (x->arity() != 2) throw StructuralError("vembed expects a simplicial space");
  Multidegree req{x->truncation()[0], middle_trunc, x->truncation()[1]};
  return reindex(x, rx_vemb(), req).presheaf;
}

PresheafMap vembed_map(const PresheafMap& f, int middle_trunc) {
  Multidegree req{f.source->truncation()[0], middle_trunc, f.source->truncation()[1]};
  return reindex_map(f, rx_vemb(), req);
}

namespace {
FormalCell reverse_words(const Presheaf& p, FormalCell g, int dir) {
  Multidegree fd = p.formal_degree(g);
  DegWord& w = g.words[static_cast<size_t>(dir)];
  int m = fd[static_cast<size_t>(dir)];
  DegWord nw;
  for (int i : w) nw.push_back(m - 1 - i);
  std::sort(nw.begin(), nw.end(), std::greater<int>());
  w = std::move(nw);
  return g;
}
}  // namespace

PSh reverse_direction(const PSh& x, int dir) {
  PresheafBuilder b(x->arity(), x->truncation(), x->complete());
  for (int id = 0; id < x->num_cells(); ++id) b.add_cell(x->cell(id).deg, x->cell(id).name);
  for (int id = 0; id < x->num_cells(); ++id) {
    const CellRecord& c = x->cell(id);
    for (int t = 0; t < x->arity(); ++t) {
      int dt = c.deg[static_cast<size_t>(t)];
      if (dt < 1) continue;
      for (int i = 0; i <= dt; ++i) {
        int from = (t == dir) ? dt - i : i;
        b.set_face(id, t, i, reverse_words(*x, c.faces[static_cast<size_t>(t)][static_cast<size_t>(from)], dir));
      }
    }
  }
  return b.finish();
}

PresheafMap reverse_direction_map(const PresheafMap& f, int dir) {
  PresheafMap out;
  out.source = reverse_direction(f.source, dir);
  out.target = reverse_direction(f.target, dir);
  out.assign.reserve(f.assign.size());
  for (size_t id = 0; id < f.assign.size(); ++id)
    out.assign.push_back(reverse_words(*f.target, f.assign[id], dir));
  return out;
}

}  // namespace fibrant
