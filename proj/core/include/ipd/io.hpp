#pragma once

// JSON and CSV encodings of connections, dimension data, cycles and periods.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ipd/derham.hpp"
#include "ipd/homology.hpp"
#include "ipd/periods.hpp"
#include "ipd/stokes.hpp"

namespace ipd::io {

using nlohmann::json;

/// {"label": text, "alpha": {"num": [...], "den": [...]}}, ascending powers. Throws Parse.
Connection connection_from_json(const json& j);
json connection_to_json(const Connection& c);
Connection read_connection(const std::filesystem::path& path);

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

json singular_points_to_json(const std::vector<SingularPointData>& profile);
/// Stokes rays and decay sectors of every irregular point.
json stokes_to_json(const Connection& c);
json profile_to_json(const HomologyProfile& p);
json dims_to_json(const CohomologyBasis& basis, const EulerCharacteristics& chi);

json cycle_to_json(const Connection& c, const Cycle& cy);
json cycles_to_json(const Connection& c, const std::vector<Cycle>& cycles);
/// Inverse of cycles_to_json; missing base arguments default to principal ones.
std::vector<Cycle> cycles_from_json(const Connection& c, const json& j);

json period_value_to_json(const PeriodValue& v);
json periods_to_json(const PeriodMatrix& m, const std::vector<Cycle>& cycles, const std::vector<RationalFunction>& forms);
/// One row per entry: cycle,form,re,im,abs_error,tail_bound,converged
std::string periods_to_csv(const PeriodMatrix& m, const std::vector<Cycle>& cycles,
                           const std::vector<RationalFunction>& forms);

}  // namespace ipd::io
