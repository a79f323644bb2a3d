#pragma once

// Stokes rays and decay sectors of the dual flat section exp(integral alpha),
// piecewise contours built from lines, arcs and decay rays, and their
// validation as rapid-decay cycles.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ipd/connection.hpp"

namespace ipd {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383280;

/// Minimum distance from singular points away from decay rays.
inline constexpr double kDefaultDelta = 1e-3;
/// Directions closer than this to a Stokes ray are rejected as anchors.
inline constexpr double kAnchorMargin = 1e-6;
inline constexpr double kDefaultHankelRadius = 1e-2;

/// Open angular interval (start, end) of plane directions, end = start + pi/k.
/// Angles are arg(z - x) at a finite point and arg(z) at infinity.
struct DecaySector {
  double start = 0;
  double end = 0;

  double bisector() const { return 0.5 * (start + end); }
  bool contains(double theta, double margin = 0) const;
};

struct StokesGeometry {
  Point point;
  /// Leading term a w^{-k} of the exponential part.
  ExactScalar leading;
  int k = 0;
  std::vector<double> stokes_rays;  // sorted, in [0, 2 pi)
  std::vector<DecaySector> decay_sectors;  // sorted by start, start in [0, 2 pi)

  /// Index of the sector containing theta (with margin), or -1.
  int sector_of(double theta, double margin = kAnchorMargin) const;
};

/// Throws NotIrregular when m <= 1.
StokesGeometry stokes_geometry(const SingularPointData& sp);
StokesGeometry stokes_geometry(const Point& point, const ExactScalar& leading, int k);

/// Real part of the leading exponent along direction theta, per unit |w|^{-k}.
double leading_decay_rate(const StokesGeometry& g, double theta);

struct LinePiece {
  cplx from;
  cplx to;
};

/// center + radius e^{i theta}, theta running from theta_from to theta_to.
struct ArcPiece {
  cplx center;
  double radius = 0;
  double theta_from = 0;
  double theta_to = 0;
};

enum class RayOrientation { FromPoint, ToPoint };

/// Straight ray between a singular point and the junction. At a finite point x
/// the ray is x + rho e^{i direction}, 0 < rho <= |junction - x|; at infinity it
/// is junction + tau e^{i direction}, tau >= 0.
struct RayPiece {
  Point point;
  double direction = 0;
  cplx junction;
  RayOrientation orientation = RayOrientation::FromPoint;
};

using Piece = std::variant<LinePiece, ArcPiece, RayPiece>;

cplx piece_start(const Piece& p);
cplx piece_end(const Piece& p);
Piece reversed(const Piece& p);

enum class CycleKind { RayPair, Circle, Hankel, Pochhammer, Custom };
std::string to_string(CycleKind kind);
CycleKind cycle_kind_from_string(std::string_view text);

struct Cycle {
  std::string name;
  CycleKind kind = CycleKind::Custom;
  std::vector<Piece> pieces;
  /// Branch state at the base point: arg(base - a_j) for each finite singular point.
  cplx base;
  std::vector<double> base_args;
  int orientation = 1;

  bool closed() const;
};

/// Base point of a piece list: the junction of a leading ray, otherwise the start.
cplx cycle_base(const std::vector<Piece>& pieces);
/// Principal arguments of base - a_j for the finite singular points of c.
std::vector<double> principal_args(const Connection& c, cplx z);

struct Anchor {
  Point point;
  double direction = 0;
};

/// Geometry shared by the cycle builders: clearance radii and the junction
/// radius at infinity.
class CycleGeometry {
 public:
  explicit CycleGeometry(const Connection& c);

  const std::vector<cplx>& finite_points() const { return finite_; }
  /// min(0.5, 0.4 * distance to the nearest other finite singular point)
  double clearance(std::size_t i) const { return clearance_[i]; }
  double clearance_of(cplx x) const;
  double infinity_radius() const { return infinity_radius_; }

  /// Straight segment from a to b with arcs around the clearance disks it
  /// would cross. Disks strictly containing a or b are never detoured;
  /// `ignore` lists further disks to pass straight through.
  std::vector<Piece> route(cplx a, cplx b, const std::vector<std::size_t>& ignore = {}) const;
  /// Distance from z to the nearest finite singular point other than `skip`.
  double distance_to_points(cplx z, std::optional<std::size_t> skip = std::nullopt) const;
  std::optional<std::size_t> index_of(cplx x) const;

 private:
  std::vector<cplx> finite_;
  std::vector<double> clearance_;
  double infinity_radius_ = 2;
};

/// Path from the valley of `from` to the valley of `to` through the finite plane.
Cycle build_ray_pair(const Connection& c, const Anchor& from, const Anchor& to);
/// Counterclockwise circle; radius defaults to min(1, 0.4 * distance to the nearest other point).
Cycle build_circle(const Connection& c, const ExactScalar& center, std::optional<double> radius = std::nullopt);
/// Decay ray in, counterclockwise loop of radius r around `around`, decay ray out.
Cycle build_hankel(const Connection& c, const ExactScalar& around, const Anchor& anchor,
                   double radius = kDefaultHankelRadius);
/// Commutator loop around two finite points based near the first.
Cycle build_pochhammer(const Connection& c, const ExactScalar& first, const ExactScalar& second);
Cycle build_custom(const Connection& c, std::vector<Piece> pieces, std::string name = "custom");

struct ValidityReport {
  bool valid = true;
  std::string reason;  // first violated condition
};

ValidityReport validate_cycle(const Connection& c, const Cycle& cy, double delta = kDefaultDelta);

/// Exactly h1_XD cycles; throws BasisNotFound otherwise.
std::vector<Cycle> candidate_basis(const Connection& c);

/// Inserts jittered midpoints into line pieces and shifts ray junctions by at most `amplitude`.
Cycle perturb_waypoints(const Connection& c, const Cycle& cy, double amplitude, std::uint64_t seed);

/// Distance from z to the piece; a ray's own endpoint is ignored (infinite distance).
double piece_distance(const Piece& piece, cplx z);

/// Winding number of a closed piece list around z0 (real-valued for open lists).
double winding_number(const std::vector<Piece>& pieces, cplx z0);

}  // namespace ipd
