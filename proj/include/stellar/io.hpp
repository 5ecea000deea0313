#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stellar/constellation.hpp"
#include "stellar/dynamics.hpp"
#include "stellar/state.hpp"

namespace stellar::io {

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double v);

/// {"n": n, "dicke": [[re, im], ...]}
std::string state_to_json(const SymmetricState& state);
/// ParseError on malformed JSON, DomainError on a well-formed document of the wrong shape.
SymmetricState state_from_json(std::string_view text);

/// {"n": n, "stars": [{"theta": t, "phi": p}, ...]}
std::string constellation_to_json(const Constellation& c);
Constellation constellation_from_json(std::string_view text);
/// star_index,theta,phi,x,y,z
std::string constellation_to_csv(const Constellation& c);

struct SweepRow {
    std::string family;
    double param1 = 0.0;
    double param2 = 0.0;
    double e_b = 0.0;
    /// E_G and its witness, when computed.
    std::optional<double> e_g;
    double witness_theta = 0.0;
    double witness_phi = 0.0;
};

/// family,param1,param2,E_B,E_G,EG_witness_theta,EG_witness_phi; E_G columns
/// are left empty when not computed.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// beta,star_index,theta,phi,x,y,z,e_b
std::string trajectory_to_csv(const Trajectory& traj);
/// beta,star_index,dtheta_dbeta,flag
std::string velocity_to_csv(const VelocityProfile& profile);
/// {"n": n, "offblock_norm": x, "V": [[[re, im], ...], ...], "W": ...}
std::string block_to_json(int n, const BlockDecomposition& block);

}  // namespace stellar::io
