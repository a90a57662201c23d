#include "kirby/moves.hpp"

#include <algorithm>

#include "checked.hpp"
#include "kirby/error.hpp"
#include "kirby/gluck.hpp"
#include "kirby/lang.hpp"

namespace kirby {

using detail::checked_add;
using detail::checked_mul;

namespace {

void require_sign(int sign) {
  if (sign != 1 && sign != -1) throw MoveError("sign must be + or -");
}

void require_declared(const HandleDiagram& d, const FreeWord& w, const char* what) {
  for (const auto& l : w.letters())
    if (!d.has_dot(l.gen)) throw MoveError(std::string(what) + " uses unknown generator '" + l.gen.name + "'");
}

void require_fresh(const HandleDiagram& d, const GeneratorId& g) {
  if (!is_valid_id(g.name)) throw MoveError("'" + g.name + "' is not a valid id");
  if (d.has_dot(g)) throw MoveError("dot '" + g.name + "' already exists");
}

void require_fresh(const HandleDiagram& d, const HandleId& h) {
  if (!is_valid_id(h.name)) throw MoveError("'" + h.name + "' is not a valid id");
  if (d.has_handle(h)) throw MoveError("handle '" + h.name + "' already exists");
}

void require_dot(const HandleDiagram& d, const GeneratorId& g) {
  if (!d.has_dot(g)) throw MoveError("no dot named '" + g.name + "'");
}

void remove_handle(HandleDiagram& d, const HandleId& h) {
  std::erase_if(d.handles, [&](const TwoHandle& t) { return t.id == h; });
  d.linking.erase_handle(h);
}

}  // namespace

bool changes_manifold(const Move& m) {
  return std::holds_alternative<move::ExchangeZeroToDot>(m) || std::holds_alternative<move::ExchangeDotToZero>(m) ||
         std::holds_alternative<move::GluckTwist>(m) || std::holds_alternative<move::SurgerSphere>(m);
}

HandleDiagram slide_two_handle(const HandleDiagram& d, const HandleId& i, const HandleId& j, int sign,
                               const FreeWord& band) {
  require_sign(sign);
  if (i == j) throw MoveError("cannot slide handle '" + i.name + "' over itself");
  const TwoHandle& hi = d.handle(i);
  const TwoHandle& hj = d.handle(j);
  require_declared(d, band, "band");

  HandleDiagram out = d;
  const Int lij = d.linking.get(i, j);
  TwoHandle& ni = out.handle(i);
  ni.word = hi.word * band * hj.word.power(sign) * band.inverse();
  ni.framing = checked_add(checked_add(hi.framing, hj.framing), checked_mul(2 * sign, lij));
  out.linking.set(i, j, checked_add(lij, checked_mul(sign, hj.framing)));
  for (const auto& m : d.handles) {
    if (m.id == i || m.id == j) continue;
    Int ljm = d.linking.get(j, m.id);
    if (ljm != 0) out.linking.set(i, m.id, checked_add(d.linking.get(i, m.id), checked_mul(sign, ljm)));
  }
  return out;
}

HandleDiagram slide_dot(const HandleDiagram& d, const GeneratorId& a, const GeneratorId& b, int sign) {
  require_sign(sign);
  if (a == b) throw MoveError("cannot slide dot '" + a.name + "' over itself");
  require_dot(d, a);
  require_dot(d, b);

  // a -> a b^-sign, hence a^-1 -> b^sign a^-1
  HandleDiagram out = d;
  for (auto& h : out.handles) {
    if (!h.word.mentions(a)) continue;
    std::vector<Letter> raw;
    for (const auto& l : h.word.letters()) {
      if (l.gen != a) {
        raw.push_back(l);
      } else if (l.sign == 1) {
        raw.push_back({a, 1});
        raw.push_back({b, -sign});
      } else {
        raw.push_back({b, sign});
        raw.push_back({a, -1});
      }
    }
    h.word = FreeWord::reduce(raw);
  }
  return out;
}

HandleDiagram introduce_cancelling_pair(const HandleDiagram& d, PairKind kind, const GeneratorId& g,
                                        const HandleId& h) {
  require_fresh(d, h);
  HandleDiagram out = d;
  if (kind == PairKind::OneTwo) {
    require_fresh(d, g);
    out.dots.push_back(g);
    out.handles.push_back({h, FreeWord::generator(g), 0});
  } else {
    out.handles.push_back({h, FreeWord{}, 0});
    out.n3 = checked_add(out.n3, 1);
  }
  return out;
}

HandleDiagram cancel_pair_12(const HandleDiagram& d, const GeneratorId& g, const HandleId& h) {
  require_dot(d, g);
  const TwoHandle& hh = d.handle(h);
  const auto& hl = hh.word.letters();
  if (hl.size() != 1 || hl.front().gen != g)
    throw MoveError("handle '" + h.name + "' does not pass over dot '" + g.name + "' exactly once");
  const int s = hl.front().sign;

  HandleDiagram out = d;
  std::vector<HandleId> others;
  for (const auto& m : d.handles)
    if (m.id != h) others.push_back(m.id);
  for (const auto& m : others) {
    for (;;) {
      const auto& letters = out.handle(m).word.letters();
      auto it = std::find_if(letters.begin(), letters.end(), [&](const Letter& l) { return l.gen == g; });
      if (it == letters.end()) break;
      // w_m = p g^t q; appending q^-1 g^-t q leaves p q
      const int t = it->sign;
      FreeWord suffix = FreeWord::reduce(std::vector<Letter>(it + 1, letters.end()));
      out = slide_two_handle(out, m, h, -t * s, suffix.inverse());
    }
  }
  std::erase(out.dots, g);
  remove_handle(out, h);
  return out;
}

HandleDiagram cancel_pair_23(const HandleDiagram& d, const HandleId& h) {
  const TwoHandle& hh = d.handle(h);
  if (d.n3 < 1) throw MoveError("no 3-handle to cancel against");
  if (!hh.word.empty()) throw MoveError("handle '" + h.name + "' has a nontrivial word");
  if (hh.framing != 0) throw MoveError("handle '" + h.name + "' is not 0-framed");
  for (const auto& m : d.handles)
    if (m.id != h && d.linking.get(h, m.id) != 0)
      throw MoveError("handle '" + h.name + "' links '" + m.id.name + "'");
  HandleDiagram out = d;
  remove_handle(out, h);
  out.n3 -= 1;
  return out;
}

HandleDiagram exchange_zero_to_dot(const HandleDiagram& d, const HandleId& h, const GeneratorId& g) {
  const TwoHandle& hh = d.handle(h);
  if (!hh.word.empty() || hh.framing != 0)
    throw MoveError("handle '" + h.name + "' is not a 0-framed handle with trivial word");
  require_fresh(d, g);
  HandleDiagram out = d;
  out.dots.push_back(g);
  for (auto& m : out.handles) {
    if (m.id == h) continue;
    Int l = d.linking.get(m.id, h);
    if (l != 0) m.word = m.word * FreeWord::generator(g).power(l);
  }
  remove_handle(out, h);
  return out;
}

HandleDiagram exchange_dot_to_zero(const HandleDiagram& d, const GeneratorId& g, const HandleId& h) {
  require_dot(d, g);
  require_fresh(d, h);
  HandleDiagram out = d;
  std::erase(out.dots, g);
  for (auto& m : out.handles) {
    Int e = m.word.exponent_of(g);
    std::vector<Letter> raw;
    for (const auto& l : m.word.letters())
      if (l.gen != g) raw.push_back(l);
    m.word = FreeWord::reduce(raw);
    if (e != 0) out.linking.set(m.id, h, e);
  }
  out.handles.push_back({h, FreeWord{}, 0});
  return out;
}

HandleDiagram apply_move(const HandleDiagram& d, const Move& m) {
  return std::visit(
      [&](const auto& mv) -> HandleDiagram {
        using T = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<T, move::SlideHandle>) {
          return slide_two_handle(d, mv.handle, mv.over, mv.sign, mv.band);
        } else if constexpr (std::is_same_v<T, move::SlideDot>) {
          return slide_dot(d, mv.dot, mv.over, mv.sign);
        } else if constexpr (std::is_same_v<T, move::IntroducePair12>) {
          return introduce_cancelling_pair(d, PairKind::OneTwo, mv.dot, mv.handle);
        } else if constexpr (std::is_same_v<T, move::CancelPair12>) {
          return cancel_pair_12(d, mv.dot, mv.handle);
        } else if constexpr (std::is_same_v<T, move::IntroducePair23>) {
          return introduce_cancelling_pair(d, PairKind::TwoThree, GeneratorId{}, mv.handle);
        } else if constexpr (std::is_same_v<T, move::CancelPair23>) {
          return cancel_pair_23(d, mv.handle);
        } else if constexpr (std::is_same_v<T, move::ExchangeZeroToDot>) {
          return exchange_zero_to_dot(d, mv.handle, mv.dot);
        } else if constexpr (std::is_same_v<T, move::ExchangeDotToZero>) {
          return exchange_dot_to_zero(d, mv.dot, mv.handle);
        } else if constexpr (std::is_same_v<T, move::GluckTwist>) {
          return gluck_twist(d, mv.sphere, mv.sign);
        } else {
          return surger_sphere(d, mv.sphere, mv.dot);
        }
      },
      m);
}

ScriptResult apply_script(const HandleDiagram& d, const MoveScript& script) {
  ScriptResult r{d, {}};
  std::string hash;
  try {
    hash = canonical_hash(d);
  } catch (const Error& e) {
    throw ScriptError(0, e.what());
  }
  for (std::size_t step = 0; step < script.size(); ++step) {
    try {
      r.diagram = apply_move(r.diagram, script[step]);
      std::string next = canonical_hash(r.diagram);
      r.log.push_back({script[step], hash, next});
      hash = std::move(next);
    } catch (const Error& e) {
      throw ScriptError(step, std::string(e.what()) + " [" + format_move(script[step]) + "]");
    }
  }
  return r;
}

HandleDiagram replay(const HandleDiagram& d, const MoveLog& log) {
  HandleDiagram cur = d;
  for (std::size_t step = 0; step < log.size(); ++step) {
    const auto& entry = log[step];
    try {
      if (canonical_hash(cur) != entry.pre_hash) throw ScriptError(step, "pre-hash mismatch");
      cur = apply_move(cur, entry.move);
      if (canonical_hash(cur) != entry.post_hash) throw ScriptError(step, "post-hash mismatch");
    } catch (const ScriptError&) {
      throw;
    } catch (const Error& e) {
      throw ScriptError(step, e.what());
    }
  }
  return cur;
}

MoveScript script_of(const MoveLog& log) {
  MoveScript s;
  s.reserve(log.size());
  for (const auto& e : log) s.push_back(e.move);
  return s;
}

}  // namespace kirby
