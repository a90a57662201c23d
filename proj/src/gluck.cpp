#include "kirby/gluck.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "checked.hpp"
#include "kirby/error.hpp"
#include "kirby/invariants.hpp"
#include "kirby/lang.hpp"

namespace kirby {

using detail::checked_add;
using detail::checked_mul;

void require_sphere_handle(const HandleDiagram& d, const HandleId& sphere) {
  const TwoHandle& s = d.handle(sphere);
  if (!s.word.empty() || s.framing != 0)
    throw MoveError("'" + sphere.name + "' is not a 0-framed handle with trivial word");
}

HandleDiagram gluck_twist(const HandleDiagram& d, const HandleId& sphere, int sign) {
  if (sign != 1 && sign != -1) throw MoveError("sign must be + or -");
  require_sphere_handle(d, sphere);
  HandleDiagram out = d;
  std::vector<Int> v(d.handles.size());
  for (std::size_t i = 0; i < d.handles.size(); ++i)
    v[i] = d.handles[i].id == sphere ? 0 : d.linking.get(d.handles[i].id, sphere);
  for (std::size_t i = 0; i < d.handles.size(); ++i) {
    if (v[i] == 0) continue;
    auto& m = out.handles[i];
    m.framing = checked_add(m.framing, checked_mul(sign, checked_mul(v[i], v[i])));
    for (std::size_t j = i + 1; j < d.handles.size(); ++j) {
      if (v[j] == 0) continue;
      const HandleId& n = d.handles[j].id;
      out.linking.set(m.id, n, checked_add(d.linking.get(m.id, n), checked_mul(sign, checked_mul(v[i], v[j]))));
    }
  }
  return out;
}

HandleDiagram surger_sphere(const HandleDiagram& d, const HandleId& sphere, const GeneratorId& g) {
  return exchange_zero_to_dot(d, sphere, g);
}

// ---------------------------------------------------------------------------
// Spherical classes

FreeWord certificate_word(const HandleDiagram& d, const SphericalClassCertificate& cert) {
  FreeWord w;
  for (const auto& t : cert.terms)
    w = w * t.conjugator * d.handle(t.handle).word.power(t.sign) * t.conjugator.inverse();
  return w;
}

std::vector<Int> certificate_coefficients(const HandleDiagram& d, const SphericalClassCertificate& cert) {
  std::vector<Int> c(d.handles.size(), 0);
  for (const auto& t : cert.terms) {
    auto i = d.index_of(t.handle);
    if (!i) throw MoveError("certificate names unknown handle '" + t.handle.name + "'");
    c[*i] += t.sign;
  }
  return c;
}

void require_valid_certificate(const HandleDiagram& d, const SphericalClassCertificate& cert) {
  for (const auto& t : cert.terms) {
    d.handle(t.handle);
    if (t.sign != 1 && t.sign != -1) throw MoveError("certificate sign must be + or -");
    for (const auto& l : t.conjugator.letters())
      if (!d.has_dot(l.gen)) throw MoveError("certificate conjugator uses unknown generator '" + l.gen.name + "'");
  }
  FreeWord w = certificate_word(d, cert);
  if (!w.empty()) throw MoveError("certificate boundary word " + format_word(w) + " is not freely trivial");
}

RepresentedClass represent_spherical_class(const HandleDiagram& d, const SphericalClassCertificate& cert,
                                           std::optional<HandleId> fresh) {
  require_valid_certificate(d, cert);
  HandleId h = fresh ? *fresh : fresh_handle_id(d, "c");

  MoveScript script{move::IntroducePair23{h}};
  for (const auto& t : cert.terms) script.push_back(move::SlideHandle{h, t.handle, t.sign, t.conjugator});
  ScriptResult r = apply_script(d, script);

  // f_h must equal c^T L c
  std::vector<Int> c = certificate_coefficients(d, cert);
  IntMatrix L = linking_matrix(d);
  BigInt q = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) q += BigInt(c[i]) * L(i, j) * c[j];
  const TwoHandle& made = r.diagram.handle(h);
  if (!made.word.empty() || BigInt(made.framing) != q)
    throw std::logic_error("represent_spherical_class postcondition failed");
  return {std::move(r.diagram), h, std::move(r.log)};
}

Verdict check_gluck_triviality_hypothesis(const HandleDiagram& d, const HandleId& sphere,
                                          const std::optional<SphericalClassCertificate>& cert) {
  require_sphere_handle(d, sphere);
  ScriptResult surgered = apply_script(d, {move::SurgerSphere{sphere, fresh_generator_id(d)}});
  const HandleDiagram& dd = surgered.diagram;

  for (const auto& k : dd.handles)
    if (is_free_trivial(k.word) && k.framing % 2 != 0) return Certified{k.id, d, surgered.log};

  if (cert) {
    RepresentedClass rep = represent_spherical_class(dd, *cert);
    if (rep.diagram.handle(rep.handle).framing % 2 != 0) {
      MoveLog log = surgered.log;
      log.insert(log.end(), rep.log.begin(), rep.log.end());
      return Certified{*cert, d, std::move(log)};
    }
  }
  return Unknown{};
}

// ---------------------------------------------------------------------------
// Trivialization search

namespace {

struct Features {
  std::vector<Int> framings;  // sorted
  std::vector<Int> linkings;  // |L_ij| for i < j, sorted descending
  std::vector<Int> word_lengths;  // sorted descending
  Int dots = 0, handles = 0, n3 = 0;
};

Features features_of(const HandleDiagram& d) {
  Features f;
  f.dots = static_cast<Int>(d.dots.size());
  f.handles = static_cast<Int>(d.handles.size());
  f.n3 = d.n3;
  for (const auto& h : d.handles) {
    f.framings.push_back(h.framing);
    f.word_lengths.push_back(static_cast<Int>(h.word.size()));
  }
  for (const auto& [key, v] : d.linking.entries())
    if (key.first < key.second) f.linkings.push_back(v < 0 ? -v : v);
  std::sort(f.framings.begin(), f.framings.end());
  std::sort(f.linkings.rbegin(), f.linkings.rend());
  std::sort(f.word_lengths.rbegin(), f.word_lengths.rend());
  return f;
}

Int l1_padded(const std::vector<Int>& a, const std::vector<Int>& b) {
  Int s = 0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    Int x = i < a.size() ? a[i] : 0;
    Int y = i < b.size() ? b[i] : 0;
    s += x > y ? x - y : y - x;
  }
  return s;
}

Int distance(const Features& a, const Features& b) {
  auto absdiff = [](Int x, Int y) { return x > y ? x - y : y - x; };
  return l1_padded(a.framings, b.framings) + l1_padded(a.linkings, b.linkings) +
         l1_padded(a.word_lengths, b.word_lengths) + 2 * absdiff(a.dots, b.dots) +
         2 * absdiff(a.handles, b.handles) + absdiff(a.n3, b.n3);
}

bool is_meridian(const HandleDiagram& d, const TwoHandle& c) {
  if (c.framing != 0 || !c.word.empty()) return false;
  int nonzero = 0;
  bool unit = true;
  for (const auto& m : d.handles) {
    if (m.id == c.id) continue;
    Int l = d.linking.get(c.id, m.id);
    if (l == 0) continue;
    ++nonzero;
    if (l != 1 && l != -1) unit = false;
  }
  return nonzero == 1 && unit;
}

std::vector<Move> candidate_moves(const HandleDiagram& d, const HandleId& k, bool may_introduce) {
  std::vector<Move> out;
  auto slides_over = [&](const HandleId& over) {
    for (const auto& m : d.handles) {
      if (m.id == over) continue;
      out.push_back(move::SlideHandle{m.id, over, 1, {}});
      out.push_back(move::SlideHandle{m.id, over, -1, {}});
    }
  };
  if (d.has_handle(k)) slides_over(k);
  for (const auto& c : d.handles)
    if (c.id != k && is_meridian(d, c)) slides_over(c.id);

  for (const auto& h : d.handles)
    if (h.word.empty() && h.framing == 0) out.push_back(move::ExchangeZeroToDot{h.id, fresh_generator_id(d)});
  for (const auto& g : d.dots) out.push_back(move::ExchangeDotToZero{g, fresh_handle_id(d)});
  for (const auto& h : d.handles)
    if (h.word.size() == 1) out.push_back(move::CancelPair12{h.word.letters().front().gen, h.id});
  if (d.n3 > 0)
    for (const auto& h : d.handles) out.push_back(move::CancelPair23{h.id});
  if (may_introduce) {
    out.push_back(move::IntroducePair12{fresh_generator_id(d), fresh_handle_id(d)});
    out.push_back(move::IntroducePair23{fresh_handle_id(d)});
  }
  for (const auto& a : d.dots)
    for (const auto& b : d.dots) {
      if (a == b) continue;
      out.push_back(move::SlideDot{a, b, 1});
      out.push_back(move::SlideDot{a, b, -1});
    }
  return out;
}

struct Node {
  HandleDiagram diagram;
  std::string canon;
  std::size_t parent;
  std::optional<Move> via;
  std::size_t depth;
};

}  // namespace

Int structural_distance(const HandleDiagram& a, const HandleDiagram& b) {
  return distance(features_of(a), features_of(b));
}

Verdict trivialize_gluck(const HandleDiagram& d, const HandleId& sphere, const HandleId& k,
                         const SearchBudget& budget) {
  require_sphere_handle(d, sphere);
  if (k == sphere) throw MoveError("the odd handle must differ from the sphere");
  const TwoHandle& kh = d.handle(k);
  if (!is_free_trivial(kh.word)) throw MoveError("handle '" + k.name + "' does not have a freely trivial word");
  if (kh.framing % 2 == 0) throw MoveError("handle '" + k.name + "' does not have odd framing");
  if (budget.max_nodes == 0) return Unknown{};

  const std::string target = canonical_form(d);
  const Features target_features = features_of(d);
  const std::size_t size_limit = d.dots.size() + d.handles.size() + budget.max_extra_handles;

  std::vector<Node> nodes;
  {
    HandleDiagram start = gluck_twist(d, sphere, 1);
    std::string canon = canonical_form(start);
    nodes.push_back({std::move(start), std::move(canon), 0, std::nullopt, 0});
  }

  // (priority, depth, canonical hash, node index); smallest first
  using Entry = std::tuple<Int, std::size_t, std::string, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  std::set<std::string> seen;
  seen.insert(nodes[0].canon);
  frontier.push({distance(features_of(nodes[0].diagram), target_features), 0, hash_of_form(nodes[0].canon), 0});

  std::optional<std::size_t> found;
  std::size_t expanded = 0;
  while (!frontier.empty() && expanded < budget.max_nodes) {
    auto [prio, depth, hash, index] = frontier.top();
    frontier.pop();
    ++expanded;
    if (nodes[index].canon == target) {
      found = index;
      break;
    }
    if (depth >= budget.max_depth) continue;

    const HandleDiagram current = nodes[index].diagram;
    const bool may_introduce = current.dots.size() + current.handles.size() + 2 <= size_limit;
    for (const Move& m : candidate_moves(current, k, may_introduce)) {
      HandleDiagram next;
      try {
        next = apply_move(current, m);
      } catch (const Error&) {
        continue;
      }
      std::string canon = canonical_form(next);
      if (seen.count(canon)) continue;
      seen.insert(canon);
      Int p = distance(features_of(next), target_features);
      std::string h = hash_of_form(canon);
      nodes.push_back({std::move(next), std::move(canon), index, m, depth + 1});
      frontier.push({p, depth + 1, std::move(h), nodes.size() - 1});
    }
  }
  if (!found) return Unknown{};

  MoveScript path;
  for (std::size_t i = *found; nodes[i].via; i = nodes[i].parent) path.push_back(*nodes[i].via);
  std::reverse(path.begin(), path.end());
  path.insert(path.begin(), move::GluckTwist{sphere, 1});

  ScriptResult r = apply_script(d, path);
  if (canonical_form(replay(d, r.log)) != target) throw std::logic_error("trivialization endpoint mismatch");
  return Certified{std::monostate{}, d, std::move(r.log)};
}

std::string render(const Verdict& v) {
  std::ostringstream os;
  if (std::holds_alternative<Unknown>(v)) {
    os << "verdict: unknown\n";
    return os.str();
  }
  const auto& c = std::get<Certified>(v);
  os << "verdict: certified\n";
  std::visit(
      [&](const auto& w) {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, HandleId>) {
          os << "witness: handle " << w.name << '\n';
        } else if constexpr (std::is_same_v<T, SphericalClassCertificate>) {
          os << "witness: certificate\n" << format_certificate(w);
        } else {
          os << "witness: script\n";
        }
      },
      c.witness);
  os << "script:\n";
  for (const auto& e : c.log) os << format_move(e.move) << '\n';
  os << "hashes:\n";
  os << (c.log.empty() ? canonical_hash(c.start) : c.log.front().pre_hash) << '\n';
  for (const auto& e : c.log) os << e.post_hash << '\n';
  return os.str();
}

}  // namespace kirby
