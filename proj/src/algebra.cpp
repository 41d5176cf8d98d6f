#include "fibrant/algebra.hpp"

#include <algorithm>
#include <set>

#include "fibrant/shapes.hpp"

namespace fibrant {

namespace {

struct ReducedPair {
  FormalCell left, right;
  std::vector<DegWord> common;
};

/// Split off the common degeneracy of a pair of formal cells of equal
/// degree: left = s_common(left'), right = s_common(right') with the primed
/// pair jointly nondegenerate.
ReducedPair joint_reduce(const Presheaf& px, const Presheaf& py, FormalCell fx, FormalCell fy) {
  int arity = px.arity();
  Multidegree d = px.formal_degree(fx);
  ReducedPair out;
  out.common.resize(static_cast<size_t>(arity));
  for (int t = 0; t < arity; ++t) {
    int m = d[static_cast<size_t>(t)];
    Ordinal u = word_to_surjection(fx.words[static_cast<size_t>(t)], m);
    Ordinal v = word_to_surjection(fy.words[static_cast<size_t>(t)], m);
    DegWord common;
    for (int i = m - 1; i >= 0; --i)
      if (u.vals[static_cast<size_t>(i)] == u.vals[static_cast<size_t>(i) + 1] &&
          v.vals[static_cast<size_t>(i)] == v.vals[static_cast<size_t>(i) + 1])
        common.push_back(i);
    Ordinal rho = word_to_surjection(common, m);
    // section picking the first element of each class
    std::vector<int> sec(static_cast<size_t>(rho.codomain) + 1, -1);
    for (int i = m; i >= 0; --i) sec[static_cast<size_t>(rho.vals[static_cast<size_t>(i)])] = i;
    Ordinal s(std::move(sec), m);
    fx.words[static_cast<size_t>(t)] = surjection_to_word(compose(u, s));
    fy.words[static_cast<size_t>(t)] = surjection_to_word(compose(v, s));
    out.common[static_cast<size_t>(t)] = std::move(common);
  }
  (void)py;
  out.left = std::move(fx);
  out.right = std::move(fy);
  return out;
}

bool jointly_nondegenerate(const FormalCell& fx, const FormalCell& fy) {
  for (size_t t = 0; t < fx.words.size(); ++t) {
    const DegWord& a = fx.words[t];
    const DegWord& b = fy.words[t];
    for (int i : a)
      for (int j : b)
        if (i == j) return false;
  }
  return true;
}

std::string pair_key(const FormalCell& fx, const FormalCell& fy) {
  return formal_key(fx) + "/" + formal_key(fy);
}

}  // namespace

ProductResult product(const PSh& x, const PSh& y) {
  if (x->arity() != y->arity()) throw StructuralError("product: arity mismatch");
  int arity = x->arity();
  Multidegree trunc = deg_min(x->truncation(), y->truncation());
  Multidegree dsum = x->dims();
  {
    Multidegree dy = y->dims();
    for (size_t i = 0; i < dsum.size(); ++i) dsum[i] += dy[i];
  }
  bool complete = x->complete() && y->complete() && deg_leq(dsum, trunc);
  PresheafBuilder b(arity, trunc, complete);
  auto index = std::make_shared<std::map<std::string, int>>();
  std::vector<std::pair<FormalCell, FormalCell>> pairs;
  for (auto& d : degrees_upto(trunc)) {
    auto fxs = x->formal_cells_at(d);
    auto fys = y->formal_cells_at(d);
    for (auto& fx : fxs)
      for (auto& fy : fys) {
        if (!jointly_nondegenerate(fx, fy)) continue;
        int id = b.add_cell(d);
        index->emplace(pair_key(fx, fy), id);
        pairs.emplace_back(fx, fy);
      }
  }
  for (int id = 0; id < static_cast<int>(pairs.size()); ++id) {
    const auto& [fx, fy] = pairs[static_cast<size_t>(id)];
    Multidegree d = x->formal_degree(fx);
    for (int t = 0; t < arity; ++t) {
      int dt = d[static_cast<size_t>(t)];
      if (dt < 1) continue;
      for (int i = 0; i <= dt; ++i) {
        ReducedPair rp = joint_reduce(*x, *y, x->face(fx, t, i), y->face(fy, t, i));
        auto it = index->find(pair_key(rp.left, rp.right));
        if (it == index->end()) throw StructuralError("product: missing face pair");
        b.set_face(id, t, i, FormalCell{it->second, rp.common});
      }
    }
  }
  ProductResult out;
  out.object = b.finish();
  out.proj1.source = out.object;
  out.proj1.target = x;
  out.proj2.source = out.object;
  out.proj2.target = y;
  for (auto& [fx, fy] : pairs) {
    out.proj1.assign.push_back(fx);
    out.proj2.assign.push_back(fy);
  }
  PSh xp = x, yp = y;
  out.pair = [xp, yp, index](const FormalCell& fx, const FormalCell& fy) {
    ReducedPair rp = joint_reduce(*xp, *yp, fx, fy);
    auto it = index->find(pair_key(rp.left, rp.right));
    if (it == index->end()) throw StructuralError("product: pair not found");
    return FormalCell{it->second, rp.common};
  };
  return out;
}

PresheafMap product_map(const PresheafMap& f, const PresheafMap& g, const ProductResult& src,
                        const ProductResult& tgt) {
  PresheafMap out;
  out.source = src.object;
  out.target = tgt.object;
  out.assign.reserve(src.proj1.assign.size());
  for (size_t id = 0; id < src.proj1.assign.size(); ++id)
    out.assign.push_back(tgt.pair(f.apply(src.proj1.assign[id]), g.apply(src.proj2.assign[id])));
  return out;
}

PresheafMap product_pair(const ProductResult& prod, const PresheafMap& u, const PresheafMap& v) {
  if (u.source.get() != v.source.get() && !u.source->same_table(*v.source))
    throw StructuralError("product_pair: cone legs have different sources");
  PresheafMap out;
  out.source = u.source;
  out.target = prod.object;
  out.assign.reserve(u.assign.size());
  for (size_t id = 0; id < u.assign.size(); ++id) out.assign.push_back(prod.pair(u.assign[id], v.assign[id]));
  return out;
}

PullbackResult pullback(const PresheafMap& f, const PresheafMap& g) {
  if (f.target.get() != g.target.get() && !f.target->same_table(*g.target))
    throw StructuralError("pullback: targets differ");
  ProductResult prod = product(f.source, g.source);
  const Presheaf& p = *prod.object;
  std::vector<int> remap(static_cast<size_t>(p.num_cells()), -1);
  PresheafBuilder b(p.arity(), p.truncation(), p.complete());
  for (auto& [deg, ids] : p.by_degree()) {
    for (int id : ids) {
      if (f.apply(prod.proj1.assign[static_cast<size_t>(id)]) ==
          g.apply(prod.proj2.assign[static_cast<size_t>(id)]))
        remap[static_cast<size_t>(id)] = b.add_cell(deg);
    }
  }
  for (int id = 0; id < p.num_cells(); ++id) {
    if (remap[static_cast<size_t>(id)] < 0) continue;
    const CellRecord& c = p.cell(id);
    for (int t = 0; t < p.arity(); ++t)
      for (size_t i = 0; i < c.faces[static_cast<size_t>(t)].size(); ++i) {
        FormalCell tgt = c.faces[static_cast<size_t>(t)][i];
        tgt.cell = remap[static_cast<size_t>(tgt.cell)];
        if (tgt.cell < 0) throw StructuralError("pullback: face escapes the subobject");
        b.set_face(remap[static_cast<size_t>(id)], t, static_cast<int>(i), std::move(tgt));
      }
  }
  PullbackResult out;
  out.object = b.finish();
  out.proj1.source = out.object;
  out.proj1.target = f.source;
  out.proj2.source = out.object;
  out.proj2.target = g.source;
  for (int id = 0; id < p.num_cells(); ++id) {
    if (remap[static_cast<size_t>(id)] < 0) continue;
    out.proj1.assign.push_back(prod.proj1.assign[static_cast<size_t>(id)]);
    out.proj2.assign.push_back(prod.proj2.assign[static_cast<size_t>(id)]);
  }
  auto remap_shared = std::make_shared<std::vector<int>>(std::move(remap));
  auto base_pair = prod.pair;
  out.pair = [base_pair, remap_shared](const FormalCell& fx, const FormalCell& fy) {
    FormalCell in = base_pair(fx, fy);
    FormalCell outc = in;
    outc.cell = (*remap_shared)[static_cast<size_t>(in.cell)];
    if (outc.cell < 0) throw StructuralError("pullback: pair not in the fiber product");
    return outc;
  };
  return out;
}

PresheafMap pullback_universal(const PullbackResult& pb, const PresheafMap& u, const PresheafMap& v) {
  PresheafMap out;
  out.source = u.source;
  out.target = pb.object;
  out.assign.reserve(u.assign.size());
  for (size_t id = 0; id < u.assign.size(); ++id) out.assign.push_back(pb.pair(u.assign[id], v.assign[id]));
  return out;
}

namespace {

struct PushoutState {
  // per degree: class representative of every tagged formal cell key
  std::map<Multidegree, std::map<std::string, std::string>, DegreeLess> rep;
  PSh b, c;
};

std::string tag_key(char tag, const FormalCell& f) { return std::string(1, tag) + "!" + formal_key(f); }

std::pair<char, FormalCell> parse_tag(const std::string& s) {
  return {s[0], formal_from_key(s.substr(2))};
}

}  // namespace

PushoutResult pushout(const PresheafMap& f, const PresheafMap& g) {
  if (f.source.get() != g.source.get() && !f.source->same_table(*g.source))
    throw StructuralError("pushout: sources differ");
  PSh a = f.source, bb = f.target, cc = g.target;
  int arity = a->arity();
  Multidegree trunc = deg_min(bb->truncation(), cc->truncation());
  bool complete = bb->complete() && cc->complete();

  auto st = std::make_shared<PushoutState>();
  st->b = bb;
  st->c = cc;
  for (auto& d : degrees_upto(trunc)) {
    std::vector<std::string> keys;
    for (auto& fb : bb->formal_cells_at(d)) keys.push_back(tag_key('B', fb));
    for (auto& fc : cc->formal_cells_at(d)) keys.push_back(tag_key('C', fc));
    std::map<std::string, int> idx;
    for (size_t i = 0; i < keys.size(); ++i) idx[keys[i]] = static_cast<int>(i);
    std::vector<int> up(keys.size());
    for (size_t i = 0; i < keys.size(); ++i) up[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int v) {
      while (up[static_cast<size_t>(v)] != v) v = up[static_cast<size_t>(v)] = up[static_cast<size_t>(up[static_cast<size_t>(v)])];
      return v;
    };
    if (deg_leq(d, a->truncation()))
      for (auto& fa : a->formal_cells_at(d)) {
        int i = idx.at(tag_key('B', f.apply(fa)));
        int j = idx.at(tag_key('C', g.apply(fa)));
        up[static_cast<size_t>(find(i))] = find(j);
      }
    std::map<int, std::string> best;
    for (size_t i = 0; i < keys.size(); ++i) {
      int r = find(static_cast<int>(i));
      auto it = best.find(r);
      if (it == best.end() || keys[i] < it->second) best[r] = keys[i];
    }
    auto& m = st->rep[d];
    for (size_t i = 0; i < keys.size(); ++i) m[keys[i]] = best[find(static_cast<int>(i))];
  }

  LabelModel model;
  model.arity = arity;
  model.trunc = trunc;
  model.complete = complete;
  model.cells = [st](const Multidegree& d) {
    std::set<std::string> reps;
    for (auto& [k, v] : st->rep.at(d)) reps.insert(v);
    return std::vector<std::string>(reps.begin(), reps.end());
  };
  model.act = [st](const Multidegree& d, const std::vector<Ordinal>& ops, const std::string& L) {
    auto [tag, fc] = parse_tag(L);
    const Presheaf& p = tag == 'B' ? *st->b : *st->c;
    FormalCell r = p.act(fc, ops);
    Multidegree e(d.size());
    for (size_t j = 0; j < d.size(); ++j) e[j] = ops[j].domain();
    return st->rep.at(e).at(tag_key(tag, r));
  };
  auto ing = std::make_shared<Ingested>(ingest(std::move(model)));

  PushoutResult out;
  out.object = ing->presheaf;
  out.inj1.source = bb;
  out.inj1.target = out.object;
  for (int id = 0; id < bb->num_cells(); ++id) {
    FormalCell self{id, std::vector<DegWord>(static_cast<size_t>(arity))};
    const Multidegree& d = bb->cell(id).deg;
    out.inj1.assign.push_back(ing->locate(d, st->rep.at(d).at(tag_key('B', self))));
  }
  out.inj2.source = cc;
  out.inj2.target = out.object;
  for (int id = 0; id < cc->num_cells(); ++id) {
    FormalCell self{id, std::vector<DegWord>(static_cast<size_t>(arity))};
    const Multidegree& d = cc->cell(id).deg;
    out.inj2.assign.push_back(ing->locate(d, st->rep.at(d).at(tag_key('C', self))));
  }
  PSh object = out.object;
  out.universal = [ing, st, object](const PresheafMap& pb, const PresheafMap& pc) {
    PresheafMap u;
    u.source = object;
    u.target = pb.target;
    for (auto& [d, label] : ing->labels()) {
      auto [tag, fc] = parse_tag(label);
      u.assign.push_back(tag == 'B' ? pb.apply(fc) : pc.apply(fc));
    }
    return u;
  };
  return out;
}

PresheafMap pushout_product(const PresheafMap& i, const PresheafMap& j) {
  if (i.source->arity() != j.source->arity())
    throw StructuralError("pushout_product: arity mismatch (embed first)");
  ProductResult bc = product(i.target, j.source);
  ProductResult ac = product(i.source, j.source);
  ProductResult ad = product(i.source, j.target);
  ProductResult bd = product(i.target, j.target);
  PresheafMap ac_to_bc = product_map(i, identity_map(j.source), ac, bc);
  PresheafMap ac_to_ad = product_map(identity_map(i.source), j, ac, ad);
  PushoutResult po = pushout(ac_to_bc, ac_to_ad);
  PresheafMap bc_to_bd = product_map(identity_map(i.target), j, bc, bd);
  PresheafMap ad_to_bd = product_map(i, identity_map(j.target), ad, bd);
  return po.universal(bc_to_bd, ad_to_bd);
}

std::vector<std::vector<FormalCell>> enumerate_maps(const PSh& a, const PSh& y, const EnumOptions& opt) {
  if (a->arity() != y->arity()) throw StructuralError("enumerate_maps: arity mismatch");
  if (!deg_leq(a->truncation(), y->truncation()))
    throw RefusalError("enumerate_maps: target truncation too small", degree_key(a->truncation()));
  std::vector<std::vector<FormalCell>> results;
  int n = a->num_cells();
  std::vector<int> order;
  order.reserve(static_cast<size_t>(n));
  for (auto& [deg, ids] : a->by_degree())
    for (int id : ids) order.push_back(id);

  std::map<Multidegree, std::vector<FormalCell>, DegreeLess> cands;
  for (auto& [deg, ids] : a->by_degree())
    if (!cands.count(deg)) cands[deg] = y->formal_cells_at(deg);

  std::vector<FormalCell> over_target;
  if (opt.over_p && opt.over_v) {
    over_target.resize(static_cast<size_t>(n));
    for (int id = 0; id < n; ++id)
      over_target[static_cast<size_t>(id)] =
          opt.over_v->assign[static_cast<size_t>(id)];
  }

  std::vector<FormalCell> cur(static_cast<size_t>(n));
  std::vector<bool> used(static_cast<size_t>(y->num_cells()), false);

  // image of a formal cell of the source under the partial assignment
  auto apply_partial = [&](const FormalCell& f) {
    const FormalCell& img = cur[static_cast<size_t>(f.cell)];
    FormalCell out;
    out.cell = img.cell;
    out.words.resize(f.words.size());
    const auto& base = a->cell(f.cell).deg;
    for (size_t t = 0; t < f.words.size(); ++t) {
      Ordinal wf = word_to_surjection(f.words[t], base[t] + static_cast<int>(f.words[t].size()));
      Ordinal wi = word_to_surjection(img.words[t], base[t]);
      out.words[t] = surjection_to_word(compose(wi, wf));
    }
    return out;
  };

  std::function<bool(size_t)> rec = [&](size_t pos) -> bool {
    if (pos == order.size()) {
      results.push_back(cur);
      return results.size() >= opt.limit;
    }
    int id = order[pos];
    const CellRecord& c = a->cell(id);
    FormalCell self{id, std::vector<DegWord>(static_cast<size_t>(a->arity()))};
    for (const FormalCell& cand : cands.at(c.deg)) {
      if (opt.prescribed) {
        auto it = opt.prescribed->find(id);
        if (it != opt.prescribed->end() && !(it->second == cand)) continue;
      }
      if (opt.injective_nondeg) {
        if (!cand.is_nondegenerate() || used[static_cast<size_t>(cand.cell)]) continue;
      }
      if (opt.over_p && opt.over_v) {
        if (!(opt.over_p->apply(cand) == over_target[static_cast<size_t>(id)])) continue;
      }
      bool ok = true;
      for (int t = 0; t < a->arity() && ok; ++t) {
        int dt = c.deg[static_cast<size_t>(t)];
        if (dt < 1) continue;
        for (int i = 0; i <= dt && ok; ++i) {
          FormalCell fa = a->face(self, t, i);
          if (!(y->face(cand, t, i) == apply_partial(fa))) ok = false;
        }
      }
      if (!ok) continue;
      cur[static_cast<size_t>(id)] = cand;
      if (opt.injective_nondeg) used[static_cast<size_t>(cand.cell)] = true;
      bool stop = rec(pos + 1);
      if (opt.injective_nondeg) used[static_cast<size_t>(cand.cell)] = false;
      if (stop) return true;
    }
    return false;
  };
  rec(0);
  return results;
}

std::optional<PresheafMap> find_isomorphism(const PSh& a, const PSh& y) {
  if (a->arity() != y->arity()) return std::nullopt;
  if (a->truncation() != y->truncation()) return std::nullopt;
  for (auto& [deg, ids] : a->by_degree())
    if (ids.size() != y->cells_at(deg).size()) return std::nullopt;
  for (auto& [deg, ids] : y->by_degree())
    if (ids.size() != a->cells_at(deg).size()) return std::nullopt;
  EnumOptions opt;
  opt.injective_nondeg = true;
  opt.limit = 1;
  auto found = enumerate_maps(a, y, opt);
  if (found.empty()) return std::nullopt;
  PresheafMap m;
  m.source = a;
  m.target = y;
  m.assign = found[0];
  return m;
}

PSh space_simplex(int arity, int n, const Multidegree& trunc) {
  if (arity == 1) return delta(n, trunc[0]);
  return reindex(delta(n), rx_const_embed(arity), trunc).presheaf;
}

// ---------------------------------------------------------------------------
// mapping spaces

namespace {

std::string assignment_label(const std::vector<FormalCell>& assign) {
  std::string s;
  for (size_t i = 0; i < assign.size(); ++i) {
    if (i) s += ';';
    s += formal_key(assign[i]);
  }
  return s;
}

std::vector<FormalCell> assignment_from_label(const std::string& L) {
  std::vector<FormalCell> out;
  if (L.empty()) return out;
  size_t p = 0;
  while (p <= L.size()) {
    size_t q = L.find(';', p);
    if (q == std::string::npos) q = L.size();
    out.push_back(formal_from_key(L.substr(p, q - p)));
    p = q + 1;
    if (q == L.size()) break;
  }
  return out;
}

}  // namespace

int map_space_sound_bound(const PSh& x, const PSh& y) {
  if (!x->complete()) return -1;
  int sp = x->arity() - 1;
  Multidegree dx = x->dims();
  for (int t = 0; t < sp; ++t)
    if (dx[static_cast<size_t>(t)] > y->truncation()[static_cast<size_t>(t)]) return -1;
  return y->truncation()[static_cast<size_t>(sp)] - dx[static_cast<size_t>(sp)];
}

const PresheafMap& MapSpace::cell_map(int id) const {
  return maps_.at(label_of_id_.at(static_cast<size_t>(id)).second);
}

int MapSpace::degree_of(int id) const { return label_of_id_.at(static_cast<size_t>(id)).first; }

FormalCell MapSpace::locate(int n, const PresheafMap& m) const {
  return ing_->locate({n}, assignment_label(m.assign));
}

const ProductResult& MapSpace::domain(int n) const { return domains_.at(n); }

MapSpace map_space(const PSh& x, const PSh& y, int nmax, const EnumOptions& opt) {
  if (x->arity() != y->arity()) throw StructuralError("map_space: arity mismatch");
  int arity = x->arity();
  int sp = arity - 1;
  bool exact = x->complete();
  if (exact) {
    int sound = map_space_sound_bound(x, y);
    if (sound < 0 || nmax > sound)
      throw RefusalError("map_space: requested degree beyond sound bound",
                         "N<=" + std::to_string(sound));
  }
  Multidegree w = deg_min(x->truncation(), y->truncation());
  PSh base = restrict_truncation(x, w);
  if (exact) {
    Multidegree ext = w;
    ext[static_cast<size_t>(sp)] = y->truncation()[static_cast<size_t>(sp)];
    base = extend_truncation(base, ext);
    w = ext;
  }

  MapSpace ms;
  ms.x_ = base;
  ms.y_ = y;
  auto domains = std::make_shared<std::map<int, ProductResult>>();
  for (int n = 0; n <= nmax; ++n) {
    PSh dn = space_simplex(arity, n, w);
    (*domains)[n] = product(base, dn);
  }
  // connecting maps between the simplex factors, cached per operator
  auto simplex_cache = std::make_shared<std::map<std::pair<int, std::vector<int>>, PresheafMap>>();
  Multidegree ww = w;
  int ar = arity;
  auto simplex_connect = [simplex_cache, ww, ar](const Ordinal& phi) -> const PresheafMap& {
    auto key = std::make_pair(phi.codomain, phi.vals);
    auto it = simplex_cache->find(key);
    if (it == simplex_cache->end()) {
      PresheafMap em = ar == 1 ? delta_map(phi, ww[0], ww[0])
                               : reindex_map(delta_map(phi), rx_const_embed(ar), ww);
      it = simplex_cache->emplace(key, std::move(em)).first;
    }
    return it->second;
  };

  auto maps_store = std::make_shared<std::map<std::string, PresheafMap>>();
  PSh ytgt = y;
  PSh xbase = base;

  // over-constraint plumbing: v_n = q . proj1 per degree
  std::shared_ptr<PresheafMap> p_shared;
  auto over_v_n = std::make_shared<std::map<int, PresheafMap>>();
  if (opt.over_p && opt.over_v) {
    p_shared = std::make_shared<PresheafMap>(*opt.over_p);
    for (int n = 0; n <= nmax; ++n) (*over_v_n)[n] = compose(*opt.over_v, domains->at(n).proj1);
  }

  LabelModel model;
  model.arity = 1;
  model.trunc = {nmax};
  model.complete = false;
  model.cells = [domains, ytgt, maps_store, p_shared, over_v_n](const Multidegree& d) {
    int n = d[0];
    EnumOptions eo;
    if (p_shared) {
      eo.over_p = p_shared.get();
      eo.over_v = &over_v_n->at(n);
    }
    auto found = enumerate_maps(domains->at(n).object, ytgt, eo);
    std::vector<std::string> labels;
    for (auto& assign : found) {
      std::string L = assignment_label(assign);
      PresheafMap m;
      m.source = domains->at(n).object;
      m.target = ytgt;
      m.assign = assign;
      maps_store->emplace(L, std::move(m));
      labels.push_back(std::move(L));
    }
    std::sort(labels.begin(), labels.end());
    return labels;
  };
  model.act = [domains, ytgt, maps_store, xbase, simplex_connect](const Multidegree& d,
                                                                  const std::vector<Ordinal>& ops,
                                                                  const std::string& L) {
    int n = d[0];
    const Ordinal& phi = ops[0];
    int e = phi.domain();
    const PresheafMap& conn = simplex_connect(phi);
    PresheafMap mphi = product_map(identity_map(xbase), conn, domains->at(e), domains->at(n));
    const PresheafMap& m = maps_store->at(L);
    std::vector<FormalCell> assign;
    assign.reserve(static_cast<size_t>(domains->at(e).object->num_cells()));
    for (int id = 0; id < domains->at(e).object->num_cells(); ++id)
      assign.push_back(m.apply(mphi.assign[static_cast<size_t>(id)]));
    std::string L2 = assignment_label(assign);
    if (!maps_store->count(L2)) {
      PresheafMap m2;
      m2.source = domains->at(e).object;
      m2.target = ytgt;
      m2.assign = std::move(assign);
      maps_store->emplace(L2, std::move(m2));
    }
    return L2;
  };

  ms.ing_ = std::make_shared<Ingested>(ingest(std::move(model)));
  ms.space = ms.ing_->presheaf;
  for (auto& [d, label] : ms.ing_->labels()) ms.label_of_id_.emplace_back(d[0], label);
  ms.domains_ = *domains;
  ms.maps_ = *maps_store;
  return ms;
}

MapSpace map_space_over(const PresheafMap& q, const PresheafMap& p, int n) {
  EnumOptions eo;
  eo.over_p = &p;
  eo.over_v = &q;
  return map_space(q.source, p.source, n, eo);
}

PresheafMap map_space_restrict(const MapSpace& mb, const MapSpace& ma, const PresheafMap& i) {
  PresheafMap out;
  out.source = mb.space;
  out.target = ma.space;
  for (int id = 0; id < mb.space->num_cells(); ++id) {
    int n = mb.degree_of(id);
    const PresheafMap& m = mb.cell_map(id);
    PresheafMap pre = product_map(i, identity_map(mb.domain(n).proj2.target), ma.domain(n), mb.domain(n));
    PresheafMap composite = compose(m, pre);
    out.assign.push_back(ma.locate(n, composite));
  }
  return out;
}

PresheafMap map_space_push(const MapSpace& my, const MapSpace& mz, const PresheafMap& p) {
  PresheafMap out;
  out.source = my.space;
  out.target = mz.space;
  for (int id = 0; id < my.space->num_cells(); ++id) {
    int n = my.degree_of(id);
    PresheafMap composite = compose(p, my.cell_map(id));
    out.assign.push_back(mz.locate(n, composite));
  }
  return out;
}

// ---------------------------------------------------------------------------
// internal hom

ProductResult representable(const Multidegree& d, const Multidegree& trunc) {
  int arity = static_cast<int>(d.size());
  if (arity == 1) {
    PSh dl = space_simplex(1, d[0], trunc);
    PSh pt = terminal_presheaf(1, trunc);
    return product(dl, pt);  // trivial wrapper so callers get a ProductResult
  }
  PSh first = reindex(delta(d[0]), rx_dir_embed(arity, 0), trunc).presheaf;
  PSh second = reindex(delta(d[1]), rx_dir_embed(arity, 1), trunc).presheaf;
  ProductResult acc = product(first, second);
  if (arity == 3) {
    PSh third = reindex(delta(d[2]), rx_dir_embed(arity, 2), trunc).presheaf;
    return product(acc.object, third);
  }
  return acc;
}

const PresheafMap& HomObject::cell_map(int id) const {
  return maps_.at(label_of_id_.at(static_cast<size_t>(id)).second);
}

FormalCell HomObject::locate(const Multidegree& d, const PresheafMap& m) const {
  return ing_->locate(d, assignment_label(m.assign));
}

const ProductResult& HomObject::domain(const Multidegree& d) const { return domains_.at(d); }

HomObject internal_hom(const PSh& x, const PSh& y, const Multidegree& out_trunc) {
  if (x->arity() != y->arity()) throw StructuralError("internal_hom: arity mismatch");
  int arity = x->arity();
  if (!x->complete()) throw RefusalError("internal_hom: exponent must be complete", "complete exponent");
  Multidegree dx = x->dims();
  for (int t = 0; t < arity; ++t)
    if (dx[static_cast<size_t>(t)] + out_trunc[static_cast<size_t>(t)] >
        y->truncation()[static_cast<size_t>(t)])
      throw RefusalError("internal_hom: output truncation beyond sound bound",
                         degree_key(Multidegree{y->truncation()}) + " minus exponent dims");
  Multidegree w = y->truncation();
  PSh base = extend_truncation(restrict_truncation(x, w), w);
  if (!base->complete()) throw RefusalError("internal_hom: exponent lost completeness", degree_key(w));

  HomObject h;
  h.x_ = base;
  h.y_ = y;
  auto domains = std::make_shared<std::map<Multidegree, ProductResult, DegreeLess>>();
  auto reps = std::make_shared<std::map<Multidegree, ProductResult, DegreeLess>>();
  for (auto& d : degrees_upto(out_trunc)) {
    (*reps)[d] = representable(d, w);
    (*domains)[d] = product(base, reps->at(d).object);
  }
  auto maps_store = std::make_shared<std::map<std::string, PresheafMap>>();
  PSh ytgt = y;
  PSh xbase = base;
  Multidegree ww = w;

  // connecting map R(e) -> R(d) for an operator tuple
  auto rep_connect = [reps, ww, arity](const Multidegree& dfrom, const Multidegree& dto,
                                       const std::vector<Ordinal>& ops) {
    const ProductResult& re = reps->at(dfrom);
    const ProductResult& rd = reps->at(dto);
    if (arity == 1) {
      PresheafMap dm = delta_map(ops[0], ww[0], ww[0]);
      return product_map(dm, identity_map(re.proj2.target), re, rd);
    }
    std::vector<PresheafMap> fmaps;
    for (int t = 0; t < arity; ++t)
      fmaps.push_back(reindex_map(delta_map(ops[static_cast<size_t>(t)]), rx_dir_embed(arity, t), ww));
    if (arity == 2) return product_map(fmaps[0], fmaps[1], re, rd);
    // arity 3: product((P0 x P1), P2) — rebuild the inner products to map them
    ProductResult inner_e = product(fmaps[0].source, fmaps[1].source);
    ProductResult inner_d = product(fmaps[0].target, fmaps[1].target);
    PresheafMap inner = product_map(fmaps[0], fmaps[1], inner_e, inner_d);
    // inner_e/d agree with the stored representables' first factors by construction
    PresheafMap inner_fixed = inner;
    inner_fixed.source = re.proj1.target;
    inner_fixed.target = rd.proj1.target;
    return product_map(inner_fixed, fmaps[2], re, rd);
  };

  LabelModel model;
  model.arity = arity;
  model.trunc = out_trunc;
  model.complete = false;
  model.cells = [domains, ytgt, maps_store](const Multidegree& d) {
    auto found = enumerate_maps(domains->at(d).object, ytgt, {});
    std::vector<std::string> labels;
    for (auto& assign : found) {
      std::string L = assignment_label(assign);
      PresheafMap m;
      m.source = domains->at(d).object;
      m.target = ytgt;
      m.assign = assign;
      maps_store->emplace(L, std::move(m));
      labels.push_back(std::move(L));
    }
    std::sort(labels.begin(), labels.end());
    return labels;
  };
  model.act = [domains, ytgt, maps_store, xbase, rep_connect](const Multidegree& d,
                                                              const std::vector<Ordinal>& ops,
                                                              const std::string& L) {
    Multidegree e(d.size());
    for (size_t j = 0; j < d.size(); ++j) e[j] = ops[j].domain();
    PresheafMap conn = rep_connect(e, d, ops);
    PresheafMap mphi = product_map(identity_map(xbase), conn, domains->at(e), domains->at(d));
    const PresheafMap& m = maps_store->at(L);
    std::vector<FormalCell> assign;
    for (int id = 0; id < domains->at(e).object->num_cells(); ++id)
      assign.push_back(m.apply(mphi.assign[static_cast<size_t>(id)]));
    std::string L2 = assignment_label(assign);
    if (!maps_store->count(L2)) {
      PresheafMap m2;
      m2.source = domains->at(e).object;
      m2.target = ytgt;
      m2.assign = std::move(assign);
      maps_store->emplace(L2, std::move(m2));
    }
    return L2;
  };

  h.ing_ = std::make_shared<Ingested>(ingest(std::move(model)));
  h.object = h.ing_->presheaf;
  for (auto& [d, label] : h.ing_->labels()) h.label_of_id_.emplace_back(d, label);
  h.domains_ = *domains;
  h.maps_ = *maps_store;
  return h;
}

PresheafMap hom_restrict(const HomObject& hb, const HomObject& ha, const PresheafMap& i) {
  PresheafMap out;
  out.source = hb.object;
  out.target = ha.object;
  for (int id = 0; id < hb.object->num_cells(); ++id) {
    const Multidegree& d = hb.object->cell(id).deg;
    const PresheafMap& m = hb.cell_map(id);
    PresheafMap pre =
        product_map(i, identity_map(hb.domain(d).proj2.target), ha.domain(d), hb.domain(d));
    out.assign.push_back(ha.locate(d, compose(m, pre)));
  }
  return out;
}

PresheafMap hom_push(const HomObject& hy, const HomObject& hx, const PresheafMap& p) {
  PresheafMap out;
  out.source = hy.object;
  out.target = hx.object;
  for (int id = 0; id < hy.object->num_cells(); ++id) {
    const Multidegree& d = hy.object->cell(id).deg;
    out.assign.push_back(hx.locate(d, compose(p, hy.cell_map(id))));
  }
  return out;
}

PresheafMap pullback_exponential(const PresheafMap& i, const PresheafMap& p,
                                 const Multidegree& out_trunc) {
  HomObject yb = internal_hom(i.target, p.source, out_trunc);
  HomObject ya = internal_hom(i.source, p.source, out_trunc);
  HomObject xb = internal_hom(i.target, p.target, out_trunc);
  HomObject xa = internal_hom(i.source, p.target, out_trunc);
  PresheafMap a = hom_restrict(yb, ya, i);
  PresheafMap b = hom_push(yb, xb, p);
  PresheafMap c = hom_restrict(xb, xa, i);
  PresheafMap d = hom_push(ya, xa, p);
  PullbackResult pb = pullback(d, c);
  return pullback_universal(pb, a, b);
}

}  // namespace fibrant
