#pragma once

// Dimension bookkeeping for the homology of the local system on U and the
// rapid-decay homology of (X, D) for rank-1 connections.

#include <string>
#include <vector>

#include "ipd/connection.hpp"

namespace ipd {

enum class Side { Self, Dual };

struct MonodromyEntry {
  Point point;
  /// mu = exp(2 pi i exponent); the exponent is -s on the self side, +s on the dual side.
  ExactScalar exponent;
  bool trivial = true;
};

struct MonodromyData {
  Side side = Side::Dual;
  /// One entry per point of D, infinity included.
  std::vector<MonodromyEntry> entries;

  bool all_trivial() const;
};

MonodromyData monodromy(const Connection& c, Side side);

struct LocalSystemHomology {
  int h0 = 0;
  int h1 = 0;
};

/// Throws InconsistentMonodromy when the multipliers do not multiply to 1.
LocalSystemHomology local_system_homology(const MonodromyData& mu, int n);

struct FormalBlock {
  int pole_order = 0;
  int dim = 1;
};

/// (1/d) sum_{m >= 2} (m - 1) dimM; NonIntegralDimension when not an integer.
int local_rd_dim(const std::vector<FormalBlock>& blocks, int ramification = 1);

struct LocalDimension {
  Point point;
  int dim = 0;
};

struct HomologyProfile {
  int h1_u = 0;
  int h0_u = 0;
  std::vector<LocalDimension> local;
  int h1_xd = 0;
  int h0_xd = 0;

  int local_total() const;
};

/// Dimensions for the dual local system, assembled along the long exact sequence.
HomologyProfile rd_profile(const Connection& c);

}  // namespace ipd
