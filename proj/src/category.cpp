#include "fibrant/category.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fibrant {

namespace {

struct Dsu {
  std::vector<int> up;
  explicit Dsu(size_t n) : up(n) {
    for (size_t i = 0; i < n; ++i) up[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (up[static_cast<size_t>(x)] != x)
      x = up[static_cast<size_t>(x)] = up[static_cast<size_t>(up[static_cast<size_t>(x)])];
    return x;
  }
  void unite(int a, int b) { up[static_cast<size_t>(find(a))] = find(b); }
};

bool word_less(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

int FiniteCategory::object_index(const std::string& name) const {
  for (int i = 0; i < num_objects(); ++i)
    if (objects_[static_cast<size_t>(i)] == name) return i;
  throw SpecError("unknown object: " + name);
}

int FiniteCategory::compose(int g, int f) const {
  int r = comp_[static_cast<size_t>(g)][static_cast<size_t>(f)];
  if (r < 0) throw StructuralError("morphisms not composable");
  return r;
}

std::vector<int> FiniteCategory::homset(int a, int b) const {
  std::vector<int> out;
  for (int i = 0; i < num_morphisms(); ++i)
    if (mors_[static_cast<size_t>(i)].src == a && mors_[static_cast<size_t>(i)].tgt == b) out.push_back(i);
  return out;
}

int FiniteCategory::morphism_of_word(const std::vector<int>& word) const {
  if (word.empty()) throw SpecError("morphism_of_word needs a source for empty words");
  int cur = gen_mor_[static_cast<size_t>(word[0])];
  for (size_t i = 1; i < word.size(); ++i) cur = compose(gen_mor_[static_cast<size_t>(word[i])], cur);
  return cur;
}

FiniteCategory FiniteCategory::from_presentation(
    std::vector<std::string> objects, std::vector<Generator> arrows,
    std::vector<std::pair<std::vector<int>, std::vector<int>>> relations, int word_cap) {
  FiniteCategory c;
  c.objects_ = std::move(objects);
  c.gens_ = std::move(arrows);
  const int nobj = c.num_objects();
  for (auto& g : c.gens_)
    if (g.src < 0 || g.src >= nobj || g.tgt < 0 || g.tgt >= nobj)
      throw SpecError("generator endpoints out of range");

  auto wsrc = [&](const std::vector<int>& w) { return c.gens_[static_cast<size_t>(w.front())].src; };
  auto wtgt = [&](const std::vector<int>& w) { return c.gens_[static_cast<size_t>(w.back())].tgt; };
  for (auto& [l, r] : relations) {
    if (l.empty() && r.empty()) continue;
    if (!l.empty() && !r.empty() && (wsrc(l) != wsrc(r) || wtgt(l) != wtgt(r)))
      throw SpecError("relation endpoints mismatch");
    if ((l.empty() || r.empty())) {
      const auto& w = l.empty() ? r : l;
      if (wsrc(w) != wtgt(w)) throw SpecError("relation against identity must be an endomorphism word");
    }
  }

  // composable words up to the cap; an entry is (source object, word)
  using Entry = std::pair<int, std::vector<int>>;
  std::vector<Entry> entries;
  std::map<Entry, int> index;
  std::vector<int> tgt_of;
  for (int o = 0; o < nobj; ++o) {
    index.emplace(Entry{o, {}}, static_cast<int>(entries.size()));
    entries.push_back({o, {}});
    tgt_of.push_back(o);
  }
  size_t lo = 0;
  for (int len = 1; len <= word_cap; ++len) {
    size_t hi = entries.size();
    for (size_t e = lo; e < hi; ++e) {
      if (static_cast<int>(entries[e].second.size()) != len - 1) continue;
      for (int g = 0; g < static_cast<int>(c.gens_.size()); ++g) {
        if (c.gens_[static_cast<size_t>(g)].src != tgt_of[e]) continue;
        Entry next = entries[e];
        next.second.push_back(g);
        index.emplace(next, static_cast<int>(entries.size()));
        entries.push_back(next);
        tgt_of.push_back(c.gens_[static_cast<size_t>(g)].tgt);
      }
    }
    lo = hi;
  }

  Dsu dsu(entries.size());
  auto object_at = [&](const Entry& e, size_t pos) {
    return pos == 0 ? e.first : c.gens_[static_cast<size_t>(e.second[pos - 1])].tgt;
  };
  for (size_t ei = 0; ei < entries.size(); ++ei) {
    const Entry& e = entries[ei];
    for (auto& [l, r] : relations) {
      for (int dirn = 0; dirn < 2; ++dirn) {
        const auto& from = dirn == 0 ? l : r;
        const auto& to = dirn == 0 ? r : l;
        if (e.second.size() < from.size()) continue;
        for (size_t p = 0; p + from.size() <= e.second.size(); ++p) {
          bool match = std::equal(from.begin(), from.end(), e.second.begin() + static_cast<long>(p));
          if (!match) continue;
          if (from.empty()) continue;  // handled by the other direction
          Entry repl = e;
          repl.second.erase(repl.second.begin() + static_cast<long>(p),
                            repl.second.begin() + static_cast<long>(p + from.size()));
          repl.second.insert(repl.second.begin() + static_cast<long>(p), to.begin(), to.end());
          auto it = index.find(repl);
          if (it != index.end()) dsu.unite(static_cast<int>(ei), it->second);
        }
        // insertion of `to` when `from` is empty: insert at any object-matching position
        if (from.empty() && !to.empty() && e.second.size() + to.size() <= static_cast<size_t>(word_cap)) {
          int at_obj = wsrc(to);
          for (size_t p = 0; p + 1 <= e.second.size() + 1; ++p) {
            if (object_at(e, p) != at_obj) continue;
            Entry repl = e;
            repl.second.insert(repl.second.begin() + static_cast<long>(p), to.begin(), to.end());
            auto it = index.find(repl);
            if (it != index.end()) dsu.unite(static_cast<int>(ei), it->second);
          }
        }
      }
    }
  }

  // representatives
  std::map<int, Entry> rep;
  for (size_t ei = 0; ei < entries.size(); ++ei) {
    int r = dsu.find(static_cast<int>(ei));
    auto it = rep.find(r);
    if (it == rep.end() || entries[ei].first < it->second.first ||
        (entries[ei].first == it->second.first && word_less(entries[ei].second, it->second.second)))
      rep[r] = entries[ei];
  }
  std::vector<Entry> reps;
  for (auto& [k, v] : rep) reps.push_back(v);
  std::sort(reps.begin(), reps.end(), [&](const Entry& a, const Entry& b) {
    if (a.first != b.first) return a.first < b.first;
    return word_less(a.second, b.second);
  });
  std::map<Entry, int> mor_of_rep;
  for (auto& e : reps) {
    Morphism m;
    m.word = e.second;
    m.src = e.first;
    m.tgt = e.second.empty() ? e.first : wtgt(e.second);
    mor_of_rep.emplace(e, static_cast<int>(c.mors_.size()));
    c.mors_.push_back(std::move(m));
  }
  auto class_of = [&](const Entry& e) -> int {
    auto it = index.find(e);
    if (it == index.end()) throw StructuralError("composition closure exceeded the word cap");
    return mor_of_rep.at(rep.at(dsu.find(it->second)));
  };

  c.ids_.resize(static_cast<size_t>(nobj));
  for (int o = 0; o < nobj; ++o) c.ids_[static_cast<size_t>(o)] = class_of(Entry{o, {}});
  c.gen_mor_.resize(c.gens_.size());
  for (int g = 0; g < static_cast<int>(c.gens_.size()); ++g)
    c.gen_mor_[static_cast<size_t>(g)] =
        class_of(Entry{c.gens_[static_cast<size_t>(g)].src, {g}});

  c.comp_.assign(c.mors_.size(), std::vector<int>(c.mors_.size(), -1));
  for (int f = 0; f < c.num_morphisms(); ++f)
    for (int g = 0; g < c.num_morphisms(); ++g) {
      const Morphism& mf = c.mors_[static_cast<size_t>(f)];
      const Morphism& mg = c.mors_[static_cast<size_t>(g)];
      if (mf.tgt != mg.src) continue;
      Entry e{mf.src, mf.word};
      e.second.insert(e.second.end(), mg.word.begin(), mg.word.end());
      c.comp_[static_cast<size_t>(g)][static_cast<size_t>(f)] = class_of(e);
    }
  return c;
}

FiniteCategory FiniteCategory::chain(int n) {
  std::vector<std::string> obj;
  std::vector<Generator> gens;
  for (int i = 0; i <= n; ++i) obj.push_back(std::to_string(i));
  for (int i = 0; i < n; ++i)
    gens.push_back({"a" + std::to_string(i), i, i + 1});
  return from_presentation(std::move(obj), std::move(gens), {}, std::max(n, 1));
}

FiniteCategory FiniteCategory::fence() {
  return from_presentation({"0", "1", "2"}, {{"a", 0, 1}, {"b", 2, 1}}, {}, 2);
}

FiniteCategory FiniteCategory::iso_groupoid(int l) {
  std::vector<std::string> obj;
  std::vector<Generator> gens;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> rels;
  for (int i = 0; i <= l; ++i) obj.push_back(std::to_string(i));
  for (int i = 0; i < l; ++i) {
    gens.push_back({"u" + std::to_string(i), i, i + 1});
    gens.push_back({"v" + std::to_string(i), i + 1, i});
  }
  for (int i = 0; i < l; ++i) {
    int u = 2 * i, v = 2 * i + 1;
    rels.push_back({{u, v}, {}});
    rels.push_back({{v, u}, {}});
  }
  return from_presentation(std::move(obj), std::move(gens), std::move(rels), 2 * l + 4);
}

FiniteCategory FiniteCategory::product(const FiniteCategory& c, const FiniteCategory& d) {
  // presented by pairs of generators with one side an identity
  std::vector<std::string> obj;
  for (int i = 0; i < c.num_objects(); ++i)
    for (int j = 0; j < d.num_objects(); ++j) obj.push_back(c.object_name(i) + "x" + d.object_name(j));
  auto oi = [&](int i, int j) { return i * d.num_objects() + j; };
  std::vector<Generator> gens;
  std::vector<std::pair<int, int>> tag;  // (c-gen or -1, d-gen or -1) per generator, with fixed other object
  std::vector<int> fixed;
  for (int g = 0; g < static_cast<int>(c.generators().size()); ++g)
    for (int j = 0; j < d.num_objects(); ++j) {
      auto& cg = c.generators()[static_cast<size_t>(g)];
      gens.push_back({cg.name + "x" + d.object_name(j), oi(cg.src, j), oi(cg.tgt, j)});
      tag.push_back({g, -1});
      fixed.push_back(j);
    }
  for (int h = 0; h < static_cast<int>(d.generators().size()); ++h)
    for (int i = 0; i < c.num_objects(); ++i) {
      auto& dg = d.generators()[static_cast<size_t>(h)];
      gens.push_back({c.object_name(i) + "x" + dg.name, oi(i, dg.src), oi(i, dg.tgt)});
      tag.push_back({-1, h});
      fixed.push_back(i);
    }
  // commuting squares between a c-generator and a d-generator
  std::vector<std::pair<std::vector<int>, std::vector<int>>> rels;
  int ncg = static_cast<int>(c.generators().size());
  for (int g = 0; g < ncg; ++g)
    for (int h = 0; h < static_cast<int>(d.generators().size()); ++h) {
      auto& cg = c.generators()[static_cast<size_t>(g)];
      auto& dg = d.generators()[static_cast<size_t>(h)];
      int g_at_src = g * d.num_objects() + dg.src;
      int g_at_tgt = g * d.num_objects() + dg.tgt;
      int h_at_src = ncg * d.num_objects() + h * c.num_objects() + cg.src;
      int h_at_tgt = ncg * d.num_objects() + h * c.num_objects() + cg.tgt;
      rels.push_back({{g_at_src, h_at_tgt}, {h_at_src, g_at_tgt}});
    }
  return from_presentation(std::move(obj), std::move(gens), std::move(rels), 6);
}

FiniteCategory::Slice FiniteCategory::slice_over(int x) const {
  Slice s;
  std::vector<int> objs;  // morphisms into x
  for (int m = 0; m < num_morphisms(); ++m)
    if (mors_[static_cast<size_t>(m)].tgt == x) objs.push_back(m);
  std::vector<std::string> names;
  for (int m : objs) names.push_back("m" + std::to_string(m));
  // generators: h : (f) -> (g) for every morphism h with g . h = f
  std::vector<Generator> gens;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> rels;
  std::vector<std::tuple<int, int, int>> gen_data;  // (slice src, slice tgt, morphism h)
  for (size_t a = 0; a < objs.size(); ++a)
    for (size_t b = 0; b < objs.size(); ++b) {
      int f = objs[a], g = objs[b];
      for (int h = 0; h < num_morphisms(); ++h) {
        if (is_identity(h)) continue;
        const Morphism& mh = mors_[static_cast<size_t>(h)];
        if (mh.src != mors_[static_cast<size_t>(f)].src || mh.tgt != mors_[static_cast<size_t>(g)].src) continue;
        if (compose(g, h) != f) continue;
        gens.push_back({"h" + std::to_string(h) + "_" + std::to_string(f) + "_" + std::to_string(g),
                        static_cast<int>(a), static_cast<int>(b)});
        gen_data.emplace_back(static_cast<int>(a), static_cast<int>(b), h);
      }
    }
  // relations: whenever two slice generators compose, the composite equals
  // the generator carrying the composed morphism (or the identity)
  for (size_t i = 0; i < gen_data.size(); ++i)
    for (size_t j = 0; j < gen_data.size(); ++j) {
      auto [as, at, h1] = gen_data[i];
      auto [bs, bt, h2] = gen_data[j];
      if (at != bs) continue;
      int hc = compose(h2, h1);
      if (is_identity(hc)) {
        if (as == bt) rels.push_back({{static_cast<int>(i), static_cast<int>(j)}, {}});
        continue;
      }
      for (size_t k = 0; k < gen_data.size(); ++k) {
        auto [cs, ct, h3] = gen_data[k];
        if (cs == as && ct == bt && h3 == hc)
          rels.push_back({{static_cast<int>(i), static_cast<int>(j)}, {static_cast<int>(k)}});
      }
    }
  s.cat = from_presentation(std::move(names), std::move(gens), std::move(rels), 6);
  s.obj_target = objs;
  return s;
}

Ingested nerve(const FiniteCategory& c, int dim) {
  auto cat = std::make_shared<FiniteCategory>(c);
  LabelModel m;
  m.arity = 1;
  m.trunc = {dim};
  // complete iff no chain of non-identity arrows of length dim+1
  {
    bool found = false;
    std::function<void(int, int)> dfs = [&](int obj, int len) {
      if (found) return;
      if (len == dim + 1) {
        found = true;
        return;
      }
      for (int h = 0; h < cat->num_morphisms(); ++h)
        if (!cat->is_identity(h) && cat->mor(h).src == obj) dfs(cat->mor(h).tgt, len + 1);
    };
    for (int o = 0; o < cat->num_objects() && !found; ++o) dfs(o, 0);
    m.complete = !found;
  }
  auto serialize = [](int src, const std::vector<int>& ms) {
    std::string s = std::to_string(src) + "#";
    for (size_t i = 0; i < ms.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(ms[i]);
    }
    return s;
  };
  auto parse = [](const std::string& L) {
    auto pos = L.find('#');
    int src = std::stoi(L.substr(0, pos));
    std::vector<int> ms;
    std::string rest = L.substr(pos + 1);
    size_t p = 0;
    while (p < rest.size()) {
      size_t q = rest.find(',', p);
      if (q == std::string::npos) q = rest.size();
      ms.push_back(std::stoi(rest.substr(p, q - p)));
      p = q + 1;
    }
    return std::pair<int, std::vector<int>>(src, ms);
  };
  m.cells = [cat, serialize](const Multidegree& d) {
    int n = d[0];
    std::vector<std::string> out;
    std::function<void(int, std::vector<int>&)> rec = [&](int src, std::vector<int>& acc) {
      if (static_cast<int>(acc.size()) == n) {
        out.push_back(serialize(acc.empty() ? src : cat->mor(acc[0]).src, acc));
        return;
      }
      int at = acc.empty() ? src : cat->mor(acc.back()).tgt;
      for (int h = 0; h < cat->num_morphisms(); ++h) {
        if (cat->mor(h).src != at) continue;
        acc.push_back(h);
        rec(src, acc);
        acc.pop_back();
      }
    };
    if (n == 0) {
      for (int o = 0; o < cat->num_objects(); ++o) out.push_back(serialize(o, {}));
    } else {
      for (int o = 0; o < cat->num_objects(); ++o) {
        std::vector<int> acc;
        rec(o, acc);
      }
    }
    return out;
  };
  m.act = [cat, serialize, parse](const Multidegree& d, const std::vector<Ordinal>& ops, const std::string& L) {
    auto [src, ms] = parse(L);
    (void)d;
    const Ordinal& phi = ops[0];
    auto object_at = [&](int pos) { return pos == 0 ? src : cat->mor(ms[static_cast<size_t>(pos) - 1]).tgt; };
    std::vector<int> out;
    int m2 = phi.domain();
    for (int j = 1; j <= m2; ++j) {
      int a = phi(j - 1), b = phi(j);
      int cur = cat->identity(object_at(a));
      for (int q = a + 1; q <= b; ++q) cur = cat->compose(ms[static_cast<size_t>(q) - 1], cur);
      out.push_back(cur);
    }
    return serialize(object_at(phi(0)), out);
  };
  return ingest(std::move(m));
}

PSh nerve2(const FiniteCategory& c, int dim, int space_trunc) {
  Ingested n = nerve(c, dim);
  Multidegree req{dim, space_trunc};
  return reindex(n.presheaf, rx_space_embed(2), req).presheaf;
}

PresheafMap nerve_vertex(const PSh& nrv, const FiniteCategory& c, int obj) {
  PresheafMap m;
  m.source = terminal_presheaf(nrv->arity(), nrv->truncation());
  m.target = nrv;
  // 0-cells of the nerve are in object order
  Multidegree zero(static_cast<size_t>(nrv->arity()), 0);
  const auto& verts = nrv->cells_at(zero);
  if (obj < 0 || obj >= static_cast<int>(verts.size())) throw SpecError("nerve_vertex: no such object");
  (void)c;
  m.assign.push_back(FormalCell{verts[static_cast<size_t>(obj)], std::vector<DegWord>(static_cast<size_t>(nrv->arity()))});
  return m;
}

}  // namespace fibrant
