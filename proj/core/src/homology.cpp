#include "ipd/homology.hpp"

#include <algorithm>

#include "ipd/error.hpp"

namespace ipd {

bool MonodromyData::all_trivial() const {
  return std::all_of(entries.begin(), entries.end(), [](const MonodromyEntry& e) { return e.trivial; });
}

MonodromyData monodromy(const Connection& c, Side side) {
  MonodromyData out;
  out.side = side;
  for (const auto& d : singular_profile(c)) {
    MonodromyEntry e;
    e.point = d.point;
    e.exponent = side == Side::Self ? -d.residue : d.residue;
    e.trivial = e.exponent.is_integer();
    out.entries.push_back(std::move(e));
  }
  return out;
}

LocalSystemHomology local_system_homology(const MonodromyData& mu, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "need at least one puncture");
  ExactScalar total;
  for (const auto& e : mu.entries) total += e.exponent;
  if (!total.is_integer()) {
    throw Error(ErrorCode::InconsistentMonodromy, "monodromy exponents sum to " + total.to_string());
  }
  LocalSystemHomology out;
  out.h0 = mu.all_trivial() ? 1 : 0;
  out.h1 = n - 2 + out.h0;
  return out;
}

int local_rd_dim(const std::vector<FormalBlock>& blocks, int ramification) {
  if (ramification < 1) throw Error(ErrorCode::InvalidInput, "ramification degree must be positive");
  long sum = 0;
  for (const auto& b : blocks) {
    if (b.pole_order < 0) throw Error(ErrorCode::InvalidInput, "negative pole order");
    if (b.pole_order >= 2) sum += static_cast<long>(b.pole_order - 1) * b.dim;
  }
  if (sum % ramification != 0) {
    throw Error(ErrorCode::NonIntegralDimension,
                std::to_string(sum) + "/" + std::to_string(ramification) + " is not an integer");
  }
  return static_cast<int>(sum / ramification);
}

int HomologyProfile::local_total() const {
  int s = 0;
  for (const auto& l : local) s += l.dim;
  return s;
}

HomologyProfile rd_profile(const Connection& c) {
  const auto mu = monodromy(c, Side::Dual);
  const int n = static_cast<int>(c.singular_set().size());
  const auto u = local_system_homology(mu, n);
  HomologyProfile p;
  p.h0_u = u.h0;
  p.h1_u = u.h1;
  bool any_decay = false;
  for (const auto& d : singular_profile(c)) {
    const int dim = local_rd_dim({{d.pole_order, 1}});
    any_decay = any_decay || dim > 0;
    p.local.push_back({d.point, dim});
  }
  p.h0_xd = any_decay ? 0 : p.h0_u;
  p.h1_xd = p.h1_u + p.local_total() - p.h0_u + p.h0_xd;
  return p;
}

}  // namespace ipd
