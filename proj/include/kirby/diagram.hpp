#pragma once

// Algebraic model of a 4-dimensional handlebody presented by a Kirby diagram
// in dotted-circle notation.
//
// A diagram records, for every 2-handle, the free-group word its attaching
// circle reads in the 1-handle (dot) generators, its integer framing, and the
// pairwise linking numbers of attaching circles.  3-handles are only counted.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kirby {

using Int = std::int64_t;

/// Name of a dotted circle (1-handle); doubles as a free generator.
struct GeneratorId {
  std::string name;

  auto operator<=>(const GeneratorId&) const = default;
};

/// Name of a 2-handle.
struct HandleId {
  std::string name;

  auto operator<=>(const HandleId&) const = default;
};

/// True for tokens usable as ids in the text format: [A-Za-z_][A-Za-z0-9_]*,
/// excluding the reserved word `framing`.
bool is_valid_id(std::string_view token);

struct Letter {
  GeneratorId gen;
  int sign = 1;  // +1 or -1

  bool operator==(const Letter&) const = default;
  Letter inverse() const { return {gen, -sign}; }
};

/// Freely reduced word in the dot generators.
class FreeWord {
 public:
  FreeWord() = default;

  /// Freely reduces an arbitrary letter sequence.
  static FreeWord reduce(std::span<const Letter> raw);
  static FreeWord generator(const GeneratorId& g, int sign = 1);

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }

  FreeWord inverse() const;
  FreeWord power(Int n) const;
  /// Reduced product this * rhs.
  FreeWord operator*(const FreeWord& rhs) const;

  /// Signed number of occurrences of g.
  Int exponent_of(const GeneratorId& g) const;
  bool mentions(const GeneratorId& g) const;

  bool operator==(const FreeWord&) const = default;

 private:
  std::vector<Letter> letters_;
};

/// Reduces raw letters, rejecting generators not in `dots`.  Throws InvalidDiagram.
FreeWord reduce_word(std::span<const Letter> raw, std::span<const GeneratorId> dots);

/// Signed letter count per dot, in the order of `dots`.
std::vector<Int> exponent_vector(const FreeWord& w, std::span<const GeneratorId> dots);

struct TwoHandle {
  HandleId id;
  FreeWord word;
  Int framing = 0;

  bool operator==(const TwoHandle&) const = default;
};

/// Linking numbers between distinct 2-handles.  Zero entries are not stored.
///
/// set() writes both orientations of a pair.  set_directed() writes only one
/// and exists so that raw (possibly asymmetric) input can be represented and
/// rejected by validate().
class LinkingData {
 public:
  Int get(const HandleId& a, const HandleId& b) const;
  void set(const HandleId& a, const HandleId& b, Int value);
  void set_directed(const HandleId& a, const HandleId& b, Int value);
  void erase_handle(const HandleId& h);
  void rename_handle(const HandleId& from, const HandleId& to);

  /// All stored directed entries, ordered by (first, second) name.
  const std::map<std::pair<HandleId, HandleId>, Int>& entries() const { return entries_; }

  bool operator==(const LinkingData&) const = default;

 private:
  std::map<std::pair<HandleId, HandleId>, Int> entries_;
};

struct HandleDiagram {
  std::string name = "X";
  std::vector<GeneratorId> dots;
  std::vector<TwoHandle> handles;
  LinkingData linking;
  Int n3 = 0;
  Int n4 = 0;

  bool operator==(const HandleDiagram&) const = default;

  const TwoHandle* find(const HandleId& h) const;
  TwoHandle* find(const HandleId& h);
  std::optional<std::size_t> index_of(const HandleId& h) const;
  std::optional<std::size_t> index_of(const GeneratorId& g) const;
  bool has_dot(const GeneratorId& g) const { return index_of(g).has_value(); }
  bool has_handle(const HandleId& h) const { return index_of(h).has_value(); }

  /// Throws MoveError if h is absent.
  const TwoHandle& handle(const HandleId& h) const;
  TwoHandle& handle(const HandleId& h);

  /// Gram entry: framing on the diagonal, linking off it.
  Int gram(const HandleId& a, const HandleId& b) const;
};

/// Lowest unused id of the form <base>, <base>1, <base>2, ...
GeneratorId fresh_generator_id(const HandleDiagram& d, const std::string& base = "g");
HandleId fresh_handle_id(const HandleDiagram& d, const std::string& base = "h");

/// Every violated well-formedness condition, in a deterministic order.
/// Empty means the diagram is valid.
std::vector<std::string> validate(const HandleDiagram& d);
bool is_valid(const HandleDiagram& d);
/// Throws InvalidDiagram listing the first violation.
void require_valid(const HandleDiagram& d);

/// Labeling-independent serialization: `KD1\n` followed by the text form of
/// the canonically relabeled diagram.  Equal outputs iff the diagrams are
/// isomorphic as labeled diagrams (ids and list order ignored).
std::string canonical_form(const HandleDiagram& d);

/// The canonically relabeled diagram itself (dots g1.., handles h1..).
HandleDiagram canonical_diagram(const HandleDiagram& d);

/// 16 hex digit FNV-1a digest of canonical_form(d).
std::string canonical_hash(const HandleDiagram& d);
/// Same digest for an already computed canonical form.
std::string hash_of_form(std::string_view form);

/// Applies the id maps to every occurrence; unmapped ids are kept.
HandleDiagram relabel(const HandleDiagram& d, const std::map<GeneratorId, GeneratorId>& dots,
                      const std::map<HandleId, HandleId>& handles);

}  // namespace kirby
