#include "stellar/io.hpp"

#include <cstdio>

#include "json.hpp"

#include "stellar/errors.hpp"

namespace stellar::io {

namespace {

using nlohmann::json;

std::string complex_pair(Complex z) { return "[" + format_real(z.real()) + ", " + format_real(z.imag()) + "]"; }

std::string matrix_json(const MatrixXcd& m) {
    std::string out = "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out += r ? ",\n    [" : "\n    [";
        for (Eigen::Index c = 0; c < m.cols(); ++c) out += (c ? ", " : "") + complex_pair(m(r, c));
        out += "]";
    }
    return out + (m.rows() ? "\n  ]" : "]");
}

// nlohmann reports a byte offset; convert it to line and column.
[[noreturn]] void rethrow_parse(const json::parse_error& e, std::string_view text) {
    int line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < end; ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    const std::string token = end < text.size() ? std::string(1, text[end]) : std::string("end of input");
    throw ParseError("invalid JSON", line, column, token);
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        rethrow_parse(e, text);
    }
}

double number_at(const json& j, const char* what) {
    if (!j.is_number()) throw DomainError(std::string("expected a number for ") + what);
    return j.get<double>();
}

}  // namespace

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string state_to_json(const SymmetricState& state) {
    std::string out = "{\"n\": " + std::to_string(state.n()) + ", \"dicke\": [";
    for (int k = 0; k <= state.n(); ++k) out += (k ? ", " : "") + complex_pair(state[k]);
    return out + "]}";
}

SymmetricState state_from_json(std::string_view text) {
    const json j = parse_json(text);
    if (!j.is_object() || !j.contains("dicke") || !j["dicke"].is_array())
        throw DomainError("state JSON: expected an object with a \"dicke\" array");
    const json& d = j["dicke"];
    VectorXcd v(static_cast<Eigen::Index>(d.size()));
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (!d[k].is_array() || d[k].size() != 2)
            throw DomainError("state JSON: dicke entries must be [re, im] pairs");
        v[static_cast<Eigen::Index>(k)] = Complex(number_at(d[k][0], "re"), number_at(d[k][1], "im"));
    }
    if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<long long>() + 1 != v.size()))
        throw DomainError("state JSON: \"n\" does not match the number of dicke entries");
    return SymmetricState(std::move(v));
}

std::string constellation_to_json(const Constellation& c) {
    std::string out = "{\"n\": " + std::to_string(c.n()) + ", \"stars\": [";
    for (int i = 0; i < c.n(); ++i)
        out += std::string(i ? ", " : "") + "{\"theta\": " + format_real(c[i].theta()) +
               ", \"phi\": " + format_real(c[i].phi()) + "}";
    return out + "]}";
}

Constellation constellation_from_json(std::string_view text) {
    const json j = parse_json(text);
    if (!j.is_object() || !j.contains("stars") || !j["stars"].is_array())
        throw DomainError("constellation JSON: expected an object with a \"stars\" array");
    std::vector<Star> stars;
    for (const json& s : j["stars"]) {
        if (!s.is_object() || !s.contains("theta") || !s.contains("phi"))
            throw DomainError("constellation JSON: stars need \"theta\" and \"phi\"");
        stars.push_back(Star::from_angles(number_at(s["theta"], "theta"), number_at(s["phi"], "phi")));
    }
    return Constellation(std::move(stars));
}

std::string constellation_to_csv(const Constellation& c) {
    std::string out = "star_index,theta,phi,x,y,z\n";
    for (int i = 0; i < c.n(); ++i) {
        const Vector3d& v = c[i].vector();
        out += std::to_string(i) + "," + format_real(c[i].theta()) + "," + format_real(c[i].phi()) + "," +
               format_real(v.x()) + "," + format_real(v.y()) + "," + format_real(v.z()) + "\n";
    }
    return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "family,param1,param2,E_B,E_G,EG_witness_theta,EG_witness_phi\n";
    for (const auto& r : rows) {
        out += r.family + "," + format_real(r.param1) + "," + format_real(r.param2) + "," + format_real(r.e_b) + ",";
        if (r.e_g)
            out += format_real(*r.e_g) + "," + format_real(r.witness_theta) + "," + format_real(r.witness_phi);
        else
            out += ",,";
        out += "\n";
    }
    return out;
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "beta,star_index,theta,phi,x,y,z,e_b\n";
    for (const auto& p : traj.points) {
        for (int i = 0; i < p.stars.n(); ++i) {
            const Vector3d& v = p.stars[i].vector();
            out += format_real(p.beta) + "," + std::to_string(i) + "," + format_real(p.stars[i].theta()) + "," +
                   format_real(p.stars[i].phi()) + "," + format_real(v.x()) + "," + format_real(v.y()) + "," +
                   format_real(v.z()) + "," + format_real(p.e_b) + "\n";
        }
    }
    return out;
}

std::string velocity_to_csv(const VelocityProfile& profile) {
    std::string out = "beta,star_index,dtheta_dbeta,flag\n";
    for (std::size_t p = 0; p < profile.betas.size(); ++p) {
        const auto row = static_cast<Eigen::Index>(p);
        for (Eigen::Index i = 0; i < profile.rate.cols(); ++i)
            out += format_real(profile.betas[p]) + "," + std::to_string(i) + "," +
                   format_real(profile.rate(row, i)) + "," + (profile.flag(row, i) ? "1" : "0") + "\n";
    }
    return out;
}

std::string block_to_json(int n, const BlockDecomposition& block) {
    return "{\n  \"n\": " + std::to_string(n) + ",\n  \"offblock_norm\": " + format_real(block.offblock_norm) +
           ",\n  \"V\": " + matrix_json(block.v) + ",\n  \"W\": " + matrix_json(block.w) + "\n}\n";
}

}  // namespace stellar::io
