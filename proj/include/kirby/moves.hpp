#pragma once

// Kirby-move rewrite rules on HandleDiagram.
//
// Sign conventions are fixed by the slide formula
//   w_i' = w_i . u . w_j^e . u^-1
//   f_i' = f_i + f_j + 2e L_ij,  L_ij' = L_ij + e f_j,  L_im' = L_im + e L_jm
// which is the change of basis e_i -> e_i + e*e_j on the 2-chains.

#include <string>
#include <variant>
#include <vector>

#include "kirby/diagram.hpp"

namespace kirby {

namespace move {

struct SlideHandle {
  HandleId handle;
  HandleId over;
  int sign = 1;
  FreeWord band;
  bool operator==(const SlideHandle&) const = default;
};

struct SlideDot {
  GeneratorId dot;
  GeneratorId over;
  int sign = 1;
  bool operator==(const SlideDot&) const = default;
};

struct IntroducePair12 {
  GeneratorId dot;
  HandleId handle;
  bool operator==(const IntroducePair12&) const = default;
};

struct CancelPair12 {
  GeneratorId dot;
  HandleId handle;
  bool operator==(const CancelPair12&) const = default;
};

struct IntroducePair23 {
  HandleId handle;
  bool operator==(const IntroducePair23&) const = default;
};

struct CancelPair23 {
  HandleId handle;
  bool operator==(const CancelPair23&) const = default;
};

struct ExchangeZeroToDot {
  HandleId handle;
  GeneratorId dot;
  bool operator==(const ExchangeZeroToDot&) const = default;
};

struct ExchangeDotToZero {
  GeneratorId dot;
  HandleId handle;
  bool operator==(const ExchangeDotToZero&) const = default;
};

struct GluckTwist {
  HandleId sphere;
  int sign = 1;
  bool operator==(const GluckTwist&) const = default;
};

/// Same diagram effect as ExchangeZeroToDot; logged under its own name.
struct SurgerSphere {
  HandleId sphere;
  GeneratorId dot;
  bool operator==(const SurgerSphere&) const = default;
};

}  // namespace move

using Move = std::variant<move::SlideHandle, move::SlideDot, move::IntroducePair12, move::CancelPair12,
                          move::IntroducePair23, move::CancelPair23, move::ExchangeZeroToDot,
                          move::ExchangeDotToZero, move::GluckTwist, move::SurgerSphere>;

using MoveScript = std::vector<Move>;

/// Exchanges, twists and surgeries change the manifold; everything else
/// is a handle move.
bool changes_manifold(const Move& m);

struct LogEntry {
  Move move;
  std::string pre_hash;
  std::string post_hash;
  bool operator==(const LogEntry&) const = default;
};

using MoveLog = std::vector<LogEntry>;

enum class PairKind { OneTwo, TwoThree };

HandleDiagram slide_two_handle(const HandleDiagram& d, const HandleId& i, const HandleId& j, int sign,
                               const FreeWord& band = {});
HandleDiagram slide_dot(const HandleDiagram& d, const GeneratorId& a, const GeneratorId& b, int sign);

/// kind OneTwo adds dot g and handle h with w_h = g; kind TwoThree ignores g
/// and adds a trivial 0-framed handle h plus one 3-handle.
HandleDiagram introduce_cancelling_pair(const HandleDiagram& d, PairKind kind, const GeneratorId& g,
                                        const HandleId& h);
HandleDiagram cancel_pair_12(const HandleDiagram& d, const GeneratorId& g, const HandleId& h);
HandleDiagram cancel_pair_23(const HandleDiagram& d, const HandleId& h);
HandleDiagram exchange_zero_to_dot(const HandleDiagram& d, const HandleId& h, const GeneratorId& g);
HandleDiagram exchange_dot_to_zero(const HandleDiagram& d, const GeneratorId& g, const HandleId& h);

/// Dispatches on the move alternative.  Throws MoveError / InvalidDiagram.
HandleDiagram apply_move(const HandleDiagram& d, const Move& m);

struct ScriptResult {
  HandleDiagram diagram;
  MoveLog log;
};

/// Folds the script left to right.  Throws ScriptError naming the first
/// inapplicable step.
ScriptResult apply_script(const HandleDiagram& d, const MoveScript& script);

/// Re-applies the log's moves from d, checking every recorded hash.
/// Returns the endpoint.  Throws ScriptError on the first mismatch.
HandleDiagram replay(const HandleDiagram& d, const MoveLog& log);

MoveScript script_of(const MoveLog& log);

}  // namespace kirby
