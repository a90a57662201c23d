#pragma once

// Gluck twists along a 0-framed trivial-word handle S, surgery X -> X_S°,
// spherical-class representatives, the odd-class hypothesis checker and the
// trivialization search.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kirby/diagram.hpp"
#include "kirby/moves.hpp"

namespace kirby {

/// Framings f_m += e*v_m^2 and linkings L_mn += e*v_m*v_n where v_m = L_mS.
/// S itself, all words, dots and handle counts are unchanged.
HandleDiagram gluck_twist(const HandleDiagram& d, const HandleId& sphere, int sign = 1);

/// X_S°: the sphere's 0-framed handle becomes a dotted circle g.
HandleDiagram surger_sphere(const HandleDiagram& d, const HandleId& sphere, const GeneratorId& g);

/// Throws MoveError unless `sphere` is a 0-framed handle with empty word.
void require_sphere_handle(const HandleDiagram& d, const HandleId& sphere);

struct CertificateTerm {
  HandleId handle;
  int sign = 1;
  FreeWord conjugator;
  bool operator==(const CertificateTerm&) const = default;
};

/// Presents the class sum(sign_t * [handle_t]) together with the bands that
/// make its boundary word freely trivial:
///   prod_t  u_t * w_{h_t}^{sign_t} * u_t^-1  = 1  in the free group.
struct SphericalClassCertificate {
  std::vector<CertificateTerm> terms;
  bool operator==(const SphericalClassCertificate&) const = default;
};

/// The product of conjugated handle words, reduced.
FreeWord certificate_word(const HandleDiagram& d, const SphericalClassCertificate& cert);

/// Coefficient of every handle (in diagram order) in the certified class.
std::vector<Int> certificate_coefficients(const HandleDiagram& d, const SphericalClassCertificate& cert);

/// Throws MoveError if a handle is missing, a sign is not +-1, a conjugator
/// uses an unknown generator, or the boundary word is not freely trivial.
void require_valid_certificate(const HandleDiagram& d, const SphericalClassCertificate& cert);

struct RepresentedClass {
  HandleDiagram diagram;
  HandleId handle;
  MoveLog log;
};

/// Introduces a cancelling 2/3 pair with fresh handle h and slides h over
/// every certificate term.  The resulting h has trivial word and framing
/// Q(c, c).
RepresentedClass represent_spherical_class(const HandleDiagram& d, const SphericalClassCertificate& cert,
                                           std::optional<HandleId> fresh = std::nullopt);

struct Certified {
  std::variant<std::monostate, HandleId, SphericalClassCertificate> witness;
  /// Diagram the log starts from.
  HandleDiagram start;
  MoveLog log;
};

struct Unknown {};

using Verdict = std::variant<Certified, Unknown>;

inline bool is_certified(const Verdict& v) { return std::holds_alternative<Certified>(v); }

/// Semi-decision for "X_S° has a spherical class with odd square".
/// Never answers no: failure to find a witness is Unknown.
Verdict check_gluck_triviality_hypothesis(const HandleDiagram& d, const HandleId& sphere,
                                          const std::optional<SphericalClassCertificate>& cert = std::nullopt);

struct SearchBudget {
  std::size_t max_nodes = 10000;
  std::size_t max_depth = 8;
  /// Introductions of cancelling pairs are allowed while the total number of
  /// dots and handles stays within the start diagram's count plus this.
  std::size_t max_extra_handles = 1;
};

/// Best-first search from gluck_twist(d, S, +1) back to d's canonical form.
/// A Certified result's log starts at d with the twist itself and replays
/// to canonical_form(d).
Verdict trivialize_gluck(const HandleDiagram& d, const HandleId& sphere, const HandleId& k,
                         const SearchBudget& budget = {});

/// Heuristic distance between two diagrams' structural data.
Int structural_distance(const HandleDiagram& a, const HandleDiagram& b);

/// `verdict: certified|unknown` followed by witness, script and hash chain.
std::string render(const Verdict& v);

}  // namespace kirby
