#include "kirby/diagram.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>
#include <sstream>

#include "checked.hpp"
#include "kirby/error.hpp"
#include "kirby/lang.hpp"

namespace kirby {

bool is_valid_id(std::string_view token) {
  if (token.empty() || token == "framing") return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!alpha(token.front())) return false;
  return std::all_of(token.begin(), token.end(),
                     [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

// ---------------------------------------------------------------------------
// FreeWord

FreeWord FreeWord::reduce(std::span<const Letter> raw) {
  FreeWord out;
  for (const Letter& l : raw) {
    if (!out.letters_.empty() && out.letters_.back() == l.inverse()) {
      out.letters_.pop_back();
    } else {
      out.letters_.push_back(l);
    }
  }
  return out;
}

FreeWord FreeWord::generator(const GeneratorId& g, int sign) {
  FreeWord w;
  w.letters_.push_back({g, sign});
  return w;
}

FreeWord FreeWord::inverse() const {
  FreeWord w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
  return w;
}

FreeWord FreeWord::power(Int n) const {
  if (n < 0) return inverse().power(-n);
  FreeWord out;
  for (Int i = 0; i < n; ++i) out = out * *this;
  return out;
}

FreeWord FreeWord::operator*(const FreeWord& rhs) const {
  std::vector<Letter> raw = letters_;
  raw.insert(raw.end(), rhs.letters_.begin(), rhs.letters_.end());
  return reduce(raw);
}

Int FreeWord::exponent_of(const GeneratorId& g) const {
  Int e = 0;
  for (const Letter& l : letters_)
    if (l.gen == g) e += l.sign;
  return e;
}

bool FreeWord::mentions(const GeneratorId& g) const {
  return std::any_of(letters_.begin(), letters_.end(), [&](const Letter& l) { return l.gen == g; });
}

FreeWord reduce_word(std::span<const Letter> raw, std::span<const GeneratorId> dots) {
  for (const Letter& l : raw) {
    if (std::find(dots.begin(), dots.end(), l.gen) == dots.end())
      throw InvalidDiagram("unknown generator '" + l.gen.name + "'");
    if (l.sign != 1 && l.sign != -1) throw InvalidDiagram("letter sign must be +1 or -1");
  }
  return FreeWord::reduce(raw);
}

std::vector<Int> exponent_vector(const FreeWord& w, std::span<const GeneratorId> dots) {
  std::vector<Int> v(dots.size(), 0);
  for (const Letter& l : w.letters()) {
    auto it = std::find(dots.begin(), dots.end(), l.gen);
    if (it != dots.end()) v[static_cast<std::size_t>(it - dots.begin())] += l.sign;
  }
  return v;
}

// ---------------------------------------------------------------------------
// LinkingData

Int LinkingData::get(const HandleId& a, const HandleId& b) const {
  auto it = entries_.find({a, b});
  return it == entries_.end() ? 0 : it->second;
}

void LinkingData::set(const HandleId& a, const HandleId& b, Int value) {
  set_directed(a, b, value);
  set_directed(b, a, value);
}

void LinkingData::set_directed(const HandleId& a, const HandleId& b, Int value) {
  if (value == 0) {
    entries_.erase({a, b});
  } else {
    entries_[{a, b}] = value;
  }
}

void LinkingData::erase_handle(const HandleId& h) {
  std::erase_if(entries_, [&](const auto& kv) { return kv.first.first == h || kv.first.second == h; });
}

void LinkingData::rename_handle(const HandleId& from, const HandleId& to) {
  std::map<std::pair<HandleId, HandleId>, Int> out;
  for (const auto& [key, v] : entries_) {
    auto [a, b] = key;
    if (a == from) a = to;
    if (b == from) b = to;
    out[{a, b}] = v;
  }
  entries_ = std::move(out);
}

// ---------------------------------------------------------------------------
// HandleDiagram

const TwoHandle* HandleDiagram::find(const HandleId& h) const {
  for (const auto& t : handles)
    if (t.id == h) return &t;
  return nullptr;
}

TwoHandle* HandleDiagram::find(const HandleId& h) {
  for (auto& t : handles)
    if (t.id == h) return &t;
  return nullptr;
}

std::optional<std::size_t> HandleDiagram::index_of(const HandleId& h) const {
  for (std::size_t i = 0; i < handles.size(); ++i)
    if (handles[i].id == h) return i;
  return std::nullopt;
}

std::optional<std::size_t> HandleDiagram::index_of(const GeneratorId& g) const {
  for (std::size_t i = 0; i < dots.size(); ++i)
    if (dots[i] == g) return i;
  return std::nullopt;
}

const TwoHandle& HandleDiagram::handle(const HandleId& h) const {
  if (const auto* t = find(h)) return *t;
  throw MoveError("no 2-handle named '" + h.name + "'");
}

TwoHandle& HandleDiagram::handle(const HandleId& h) {
  if (auto* t = find(h)) return *t;
  throw MoveError("no 2-handle named '" + h.name + "'");
}

Int HandleDiagram::gram(const HandleId& a, const HandleId& b) const {
  if (a == b) return handle(a).framing;
  return linking.get(a, b);
}

GeneratorId fresh_generator_id(const HandleDiagram& d, const std::string& base) {
  for (int i = 0;; ++i) {
    GeneratorId g{i == 0 ? base : base + std::to_string(i)};
    if (!d.has_dot(g)) return g;
  }
}

HandleId fresh_handle_id(const HandleDiagram& d, const std::string& base) {
  for (int i = 0;; ++i) {
    HandleId h{i == 0 ? base : base + std::to_string(i)};
    if (!d.has_handle(h)) return h;
  }
}

// ---------------------------------------------------------------------------
// validate

std::vector<std::string> validate(const HandleDiagram& d) {
  std::vector<std::string> out;
  if (!is_valid_id(d.name)) out.push_back("diagram name '" + d.name + "' is not a valid id");

  std::set<GeneratorId> dot_set;
  for (const auto& g : d.dots) {
    if (!is_valid_id(g.name)) out.push_back("dot id '" + g.name + "' is not a valid id");
    if (!dot_set.insert(g).second) out.push_back("duplicate dot '" + g.name + "'");
  }

  std::set<HandleId> handle_set;
  for (const auto& h : d.handles) {
    if (!is_valid_id(h.id.name)) out.push_back("handle id '" + h.id.name + "' is not a valid id");
    if (!handle_set.insert(h.id).second) out.push_back("duplicate handle '" + h.id.name + "'");
    const auto& letters = h.word.letters();
    for (std::size_t i = 0; i < letters.size(); ++i) {
      if (!dot_set.count(letters[i].gen))
        out.push_back("handle '" + h.id.name + "' uses undeclared generator '" + letters[i].gen.name + "'");
      if (letters[i].sign != 1 && letters[i].sign != -1)
        out.push_back("handle '" + h.id.name + "' has a letter with sign other than +-1");
      if (i > 0 && letters[i] == letters[i - 1].inverse())
        out.push_back("word of handle '" + h.id.name + "' is not reduced");
    }
  }

  for (const auto& [key, v] : d.linking.entries()) {
    const auto& [a, b] = key;
    if (a == b) {
      out.push_back("self-linking entry for '" + a.name + "' (framings belong on the handle)");
      continue;
    }
    if (!handle_set.count(a) || !handle_set.count(b))
      out.push_back("linking entry references absent handle ('" + a.name + "', '" + b.name + "')");
    if (d.linking.get(b, a) != v)
      out.push_back("linking is not symmetric for ('" + a.name + "', '" + b.name + "')");
  }

  if (d.n3 < 0) out.push_back("negative 3-handle count");
  if (d.n4 != 0 && d.n4 != 1) out.push_back("4-handle count must be 0 or 1");
  return out;
}

bool is_valid(const HandleDiagram& d) { return validate(d).empty(); }

void require_valid(const HandleDiagram& d) {
  auto v = validate(d);
  if (!v.empty()) throw InvalidDiagram("invalid diagram: " + v.front());
}

HandleDiagram relabel(const HandleDiagram& d, const std::map<GeneratorId, GeneratorId>& dots,
                      const std::map<HandleId, HandleId>& handles) {
  auto gmap = [&](const GeneratorId& g) {
    auto it = dots.find(g);
    return it == dots.end() ? g : it->second;
  };
  auto hmap = [&](const HandleId& h) {
    auto it = handles.find(h);
    return it == handles.end() ? h : it->second;
  };
  HandleDiagram out;
  out.name = d.name;
  out.n3 = d.n3;
  out.n4 = d.n4;
  for (const auto& g : d.dots) out.dots.push_back(gmap(g));
  for (const auto& h : d.handles) {
    std::vector<Letter> raw;
    for (const auto& l : h.word.letters()) raw.push_back({gmap(l.gen), l.sign});
    out.handles.push_back({hmap(h.id), FreeWord::reduce(raw), h.framing});
  }
  for (const auto& [key, v] : d.linking.entries()) out.linking.set_directed(hmap(key.first), hmap(key.second), v);
  return out;
}

// ---------------------------------------------------------------------------
// Canonical labeling
//
// Individualization-refinement over the bipartite structure (handles, dots).
// Colors are refined by label-free signatures; every leaf of the search tree
// yields a total order, and the lexicographically least serialization over
// all leaves is the canonical form.  Transpositions that are automorphisms
// are pruned at branch points.

namespace {

class Canonicalizer {
 public:
  explicit Canonicalizer(const HandleDiagram& d) : d_(d), n_(d.handles.size()), k_(d.dots.size()) {
    words_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (const auto& l : d.handles[i].word.letters())
        words_[i].push_back({static_cast<int>(*d.index_of(l.gen)), l.sign});
    gram_.assign(n_, std::vector<Int>(n_, 0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        gram_[i][j] = i == j ? d.handles[i].framing : d.linking.get(d.handles[i].id, d.handles[j].id);
  }

  HandleDiagram run() {
    std::vector<int> colors(n_ + k_, 0);
    for (std::size_t a = 0; a < k_; ++a) colors[n_ + a] = 1;
    search(refine(std::move(colors)));
    return best_;
  }

 private:
  using Signature = std::vector<Int>;

  std::vector<int> refine(std::vector<int> colors) const {
    std::size_t classes = count_classes(colors);
    for (;;) {
      std::vector<Signature> sig(n_ + k_);
      for (std::size_t i = 0; i < n_; ++i) {
        Signature& s = sig[i];
        s = {0, colors[i], gram_[i][i], static_cast<Int>(words_[i].size())};
        for (auto [g, e] : words_[i]) {
          s.push_back(colors[n_ + g]);
          s.push_back(e);
        }
        std::vector<std::pair<Int, Int>> nbrs;
        for (std::size_t j = 0; j < n_; ++j)
          if (j != i && gram_[i][j] != 0) nbrs.push_back({colors[j], gram_[i][j]});
        std::sort(nbrs.begin(), nbrs.end());
        s.push_back(static_cast<Int>(nbrs.size()));
        for (auto [c, v] : nbrs) {
          s.push_back(c);
          s.push_back(v);
        }
      }
      std::vector<std::vector<std::array<Int, 3>>> occ(k_);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t p = 0; p < words_[i].size(); ++p)
          occ[words_[i][p].first].push_back({colors[i], static_cast<Int>(p), words_[i][p].second});
      for (std::size_t a = 0; a < k_; ++a) {
        Signature& s = sig[n_ + a];
        s = {1, colors[n_ + a], static_cast<Int>(occ[a].size())};
        std::sort(occ[a].begin(), occ[a].end());
        for (const auto& t : occ[a]) s.insert(s.end(), t.begin(), t.end());
      }
      std::vector<Signature> sorted = sig;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      for (std::size_t v = 0; v < sig.size(); ++v)
        colors[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
      std::size_t next = sorted.size();
      if (next == classes) return colors;
      classes = next;
    }
  }

  static std::size_t count_classes(const std::vector<int>& colors) {
    std::set<int> s(colors.begin(), colors.end());
    return s.size();
  }

  bool handle_transposition_is_automorphism(std::size_t u, std::size_t v) const {
    if (gram_[u][u] != gram_[v][v] || words_[u] != words_[v]) return false;
    for (std::size_t m = 0; m < n_; ++m)
      if (m != u && m != v && gram_[u][m] != gram_[v][m]) return false;
    return true;
  }

  bool dot_transposition_is_automorphism(int a, int b) const {
    for (const auto& w : words_)
      for (auto [g, e] : w) {
        (void)e;
        if (g == a || g == b) {
          auto swapped = w;
          for (auto& letter : swapped) {
            if (letter.first == a) letter.first = b;
            else if (letter.first == b) letter.first = a;
          }
          if (swapped != w) return false;
          break;
        }
      }
    return true;
  }

  void search(const std::vector<int>& colors) {
    // first non-singleton cell, by color
    std::map<int, std::vector<std::size_t>> cells;
    for (std::size_t v = 0; v < colors.size(); ++v) cells[colors[v]].push_back(v);
    const std::vector<std::size_t>* target = nullptr;
    int target_color = 0;
    for (const auto& [c, members] : cells)
      if (members.size() > 1) {
        target = &members;
        target_color = c;
        break;
      }
    if (!target) {
      leaf(colors);
      return;
    }
    std::vector<std::size_t> tried;
    for (std::size_t v : *target) {
      bool redundant = std::any_of(tried.begin(), tried.end(), [&](std::size_t u) {
        if (u < n_) return handle_transposition_is_automorphism(u, v);
        return dot_transposition_is_automorphism(static_cast<int>(u - n_), static_cast<int>(v - n_));
      });
      if (redundant) continue;
      tried.push_back(v);
      std::vector<int> next(colors.size());
      for (std::size_t x = 0; x < colors.size(); ++x)
        next[x] = 2 * colors[x] + ((colors[x] == target_color && x != v) ? 1 : 0);
      search(refine(std::move(next)));
    }
  }

  void leaf(const std::vector<int>& colors) {
    std::vector<std::size_t> horder(n_), gorder(k_);
    for (std::size_t i = 0; i < n_; ++i) horder[i] = i;
    for (std::size_t a = 0; a < k_; ++a) gorder[a] = a;
    std::sort(horder.begin(), horder.end(), [&](auto x, auto y) { return colors[x] < colors[y]; });
    std::sort(gorder.begin(), gorder.end(), [&](auto x, auto y) { return colors[n_ + x] < colors[n_ + y]; });

    std::vector<GeneratorId> gname(k_);
    for (std::size_t r = 0; r < k_; ++r) gname[gorder[r]] = GeneratorId{"g" + std::to_string(r + 1)};
    std::vector<HandleId> hname(n_);
    for (std::size_t r = 0; r < n_; ++r) hname[horder[r]] = HandleId{"h" + std::to_string(r + 1)};

    HandleDiagram out;
    out.n3 = d_.n3;
    out.n4 = d_.n4;
    for (std::size_t r = 0; r < k_; ++r) out.dots.push_back(gname[gorder[r]]);
    for (std::size_t r = 0; r < n_; ++r) {
      std::size_t i = horder[r];
      std::vector<Letter> raw;
      for (auto [g, e] : words_[i]) raw.push_back({gname[static_cast<std::size_t>(g)], e});
      out.handles.push_back({hname[i], FreeWord::reduce(raw), gram_[i][i]});
    }
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i != j && gram_[i][j] != 0) out.linking.set_directed(hname[i], hname[j], gram_[i][j]);

    std::string text = serialize_diagram(out);
    if (!have_best_ || text < best_text_) {
      best_text_ = std::move(text);
      best_ = std::move(out);
      have_best_ = true;
    }
  }

  const HandleDiagram& d_;
  std::size_t n_, k_;
  std::vector<std::vector<std::pair<int, int>>> words_;
  std::vector<std::vector<Int>> gram_;
  HandleDiagram best_;
  std::string best_text_;
  bool have_best_ = false;
};

}  // namespace

HandleDiagram canonical_diagram(const HandleDiagram& d) {
  require_valid(d);
  return Canonicalizer(d).run();
}

std::string canonical_form(const HandleDiagram& d) { return "KD1\n" + serialize_diagram(canonical_diagram(d)); }

std::string canonical_hash(const HandleDiagram& d) { return hash_of_form(canonical_form(d)); }

std::string hash_of_form(std::string_view form) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : form) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kirby
