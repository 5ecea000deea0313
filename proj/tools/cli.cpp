#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "stellar/composition.hpp"
#include "stellar/constellation.hpp"
#include "stellar/dynamics.hpp"
#include "stellar/errors.hpp"
#include "stellar/hamiltonian.hpp"
#include "stellar/io.hpp"
#include "stellar/measures.hpp"

namespace stellar::cli {

namespace {

double parse_number(std::string_view s, const std::string& what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw UsageError("invalid " + what + ": '" + std::string(s) + "'");
    return v;
}

int parse_int(std::string_view s, const std::string& what) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw UsageError("invalid " + what + ": '" + std::string(s) + "'");
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// "%.15g" for human-readable lines; files use io::format_real.
std::string short_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

void expect_count(const std::vector<std::string>& t, std::size_t count, const char* usage) {
    if (t.size() != count) throw UsageError(std::string("state '") + t[0] + "' expects: " + usage);
}

struct StateArgs {
    std::vector<std::string> state, ghz, w, dicke, bell, rec4, coherent;
    bool tetra = false;

    void add(CLI::App* app) {
        app->add_option("--state", state,
                        "Named state: ghz N | w N | dicke N K | bell psi+|psi-|phi+|phi- | tetra | "
                        "rec4 THETA PHI | coherent N THETA PHI | bitstring | @file.json")
            ->expected(1, 4)
            ->default_str("");
        app->add_option("--ghz", ghz, "Shortcut for --state ghz N")->expected(1)->default_str("");
        app->add_option("--w", w, "Shortcut for --state w N")->expected(1)->default_str("");
        app->add_option("--dicke", dicke, "Shortcut for --state dicke N K")->expected(2)->default_str("");
        app->add_option("--bell", bell, "Shortcut for --state bell NAME")->expected(1)->default_str("");
        app->add_flag("--tetra", tetra, "Shortcut for --state tetra");
        app->add_option("--rec4", rec4, "Shortcut for --state rec4 THETA PHI")->expected(2)->default_str("");
        app->add_option("--coherent", coherent, "Shortcut for --state coherent N THETA PHI")->expected(3)->default_str("");
    }

    SymmetricState resolve() const {
        std::vector<std::vector<std::string>> given;
        if (!state.empty()) given.push_back(state);
        auto shortcut = [&](const char* name, const std::vector<std::string>& args) {
            if (args.empty()) return;
            std::vector<std::string> t{name};
            t.insert(t.end(), args.begin(), args.end());
            given.push_back(std::move(t));
        };
        shortcut("ghz", ghz);
        shortcut("w", w);
        shortcut("dicke", dicke);
        shortcut("bell", bell);
        shortcut("rec4", rec4);
        shortcut("coherent", coherent);
        if (tetra) given.push_back({"tetra"});
        if (given.size() != 1) throw UsageError("give exactly one state (--state or a shortcut such as --dicke)");
        return named_state(given.front());
    }
};

struct GridArgs {
    GeometricOptions options;

    void add(CLI::App* app) {
        app->add_option("--grid-theta", options.grid_theta, "E_G search grid, polar points")
            ->check(CLI::Range(2, 100000));
        app->add_option("--grid-phi", options.grid_phi, "E_G search grid, azimuthal points")
            ->check(CLI::Range(2, 100000));
        app->add_option("--grid-starts", options.grid_starts, "Best grid maxima used as ascent starts")
            ->check(CLI::Range(1, 100000));
        app->add_option("--gradient-tol", options.gradient_tolerance, "E_G ascent gradient tolerance")
            ->check(CLI::PositiveNumber);
    }
};

struct DynamicsArgs {
    std::string hamiltonian;
    std::string betas;
    EvolveOptions options;

    void add(CLI::App* app) {
        app->add_option("--hamiltonian", hamiltonian, "Hamiltonian expression, e.g. 'sym(X Z P0)'")->required();
        app->add_option("--betas", betas, "Grid START:STOP:COUNT (angles may use pi)")->required();
        app->add_option("--step-bound", options.step_bound, "Largest matched star move per step (rad)")
            ->check(CLI::PositiveNumber);
        app->add_option("--max-depth", options.max_refinement_depth, "Midpoint refinement depth")
            ->check(CLI::Range(0, 40));
        app->add_option("--symmetry-tol", options.symmetry_tolerance, "Permutation deficit tolerance for H")
            ->check(CLI::PositiveNumber);
    }

    std::vector<double> grid() const {
        std::vector<std::string> parts;
        std::stringstream ss(betas);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw UsageError("--betas expects START:STOP:COUNT, got '" + betas + "'");
        const double a = parse_angle(parts[0]), b = parse_angle(parts[1]);
        const int count = parse_int(parts[2], "beta count");
        if (count < 2) throw UsageError("--betas needs COUNT >= 2");
        if (a == b) throw UsageError("--betas needs START != STOP");
        std::vector<double> g(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) g[k] = a + (b - a) * k / (count - 1);
        return g;
    }

    Trajectory run(const SymmetricState& psi0) const {
        return evolve(build_matrix(hamiltonian), psi0, grid(), options);
    }
};

std::vector<int> parse_grid(const std::string& text, int dims) {
    std::vector<int> out;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, 'x');) out.push_back(parse_int(p, "grid size"));
    if (static_cast<int>(out.size()) != dims)
        throw UsageError("--grid expects " + std::string(dims == 1 ? "N" : "NxM") + ", got '" + text + "'");
    for (int g : out)
        if (g < 2) throw UsageError("--grid sizes must be at least 2");
    return out;
}

double lerp(double a, double b, int k, int count) { return a + (b - a) * k / (count - 1); }

io::SweepRow measure_row(const std::string& family, double p1, double p2, const SymmetricState& s, bool eg,
                         const GeometricOptions& options) {
    io::SweepRow row{family, p1, p2, e_b(s), std::nullopt, 0.0, 0.0};
    if (eg) {
        const GeometricResult g = e_g(s, options);
        row.e_g = g.value;
        row.witness_theta = g.witness.theta();
        row.witness_phi = g.witness.phi();
    }
    return row;
}

}  // namespace

double parse_angle(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    const std::size_t at = s.find("pi");
    if (at == std::string::npos) return parse_number(s, "angle");

    std::string head = s.substr(0, at);
    const std::string tail = s.substr(at + 2);
    double sign = 1.0;
    if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
        if (head[0] == '-') sign = -1.0;
        head.erase(0, 1);
    }
    if (!head.empty() && head.back() == '*') head.pop_back();
    const double factor = head.empty() ? 1.0 : parse_number(head, "angle factor");
    double divisor = 1.0;
    if (!tail.empty()) {
        if (tail[0] != '/') throw UsageError("invalid angle: '" + std::string(text) + "'");
        divisor = parse_number(tail.substr(1), "angle divisor");
        if (divisor == 0.0) throw UsageError("invalid angle: division by zero");
    }
    return sign * factor * kPi / divisor;
}

SymmetricState named_state(const std::vector<std::string>& t) {
    if (t.empty()) throw UsageError("empty state specification");
    const std::string& name = t[0];
    if (name.starts_with("@")) {
        expect_count(t, 1, "@file.json");
        return io::state_from_json(read_file(name.substr(1)));
    }
    if (name == "ghz") {
        expect_count(t, 2, "ghz N");
        return ghz_state(parse_int(t[1], "qubit count"));
    }
    if (name == "w") {
        expect_count(t, 2, "w N");
        return dicke_state(parse_int(t[1], "qubit count"), 1);
    }
    if (name == "dicke") {
        expect_count(t, 3, "dicke N K");
        return dicke_state(parse_int(t[1], "qubit count"), parse_int(t[2], "excitation count"));
    }
    if (name == "bell") {
        expect_count(t, 2, "bell psi+|psi-|phi+|phi-");
        const std::string& which = t[1];
        const double r = 1.0 / std::sqrt(2.0);
        if (which == "psi+") return dicke_state(2, 1);
        if (which == "phi+") return SymmetricState(Eigen::Vector3cd(r, 0.0, r));
        if (which == "phi-") return SymmetricState(Eigen::Vector3cd(r, 0.0, -r));
        if (which == "psi-") throw DomainError("bell psi-: the singlet is antisymmetric, not permutation symmetric");
        throw UsageError("unknown Bell state '" + which + "'");
    }
    if (name == "tetra") {
        expect_count(t, 1, "tetra");
        return tetrahedron_state();
    }
    if (name == "rec4") {
        expect_count(t, 3, "rec4 THETA PHI");
        return rec_family_state(parse_angle(t[1]), parse_angle(t[2]));
    }
    if (name == "coherent") {
        expect_count(t, 4, "coherent N THETA PHI");
        const int n = parse_int(t[1], "qubit count");
        return coherent_state(n, QubitState(parse_angle(t[2]), parse_angle(t[3])));
    }
    if (!name.empty() && name.find_first_not_of("01") == std::string::npos) {
        expect_count(t, 1, "a bitstring");
        const int n = static_cast<int>(name.size());
        if (name.find('0') != std::string::npos && name.find('1') != std::string::npos)
            throw DomainError("basis state " + name + " is not permutation symmetric");
        return dicke_state(n, name[0] == '1' ? n : 0);
    }
    throw UsageError("unknown state '" + name + "'");
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"stellar"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Majorana stellar representation of symmetric multiqubit states", "stellar"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "Write results to this file instead of stdout");

    StateArgs stars_state;
    std::string stars_format = "json";
    CLI::App* stars = app.add_subcommand("stars", "Constellation of a state");
    stars_state.add(stars);
    stars->add_option("--format", stars_format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    StateArgs measure_state;
    GridArgs measure_grid;
    bool want_eb = false, want_eg = false;
    std::string measure_format = "text";
    CLI::App* measure = app.add_subcommand("measure", "E_B and E_G of a state (both unless one is chosen)");
    measure_state.add(measure);
    measure_grid.add(measure);
    measure->add_flag("--eb", want_eb, "Barycentric measure");
    measure->add_flag("--eg", want_eg, "Geometric measure");
    measure->add_option("--format", measure_format, "Output format")->check(CLI::IsMember({"text", "json"}));

    std::vector<std::string> left, right;
    std::string compose_format = "json";
    CLI::App* comp = app.add_subcommand("compose", "Compose two states (union of constellations)");
    comp->add_option("--left", left, "First state, same syntax as --state")->expected(1, 4)->required()->default_str("");
    comp->add_option("--right", right, "Second state, same syntax as --state")->expected(1, 4)->required()->default_str("");
    comp->add_option("--format", compose_format, "json: state, stars: constellation JSON, csv: constellation CSV")
        ->check(CLI::IsMember({"json", "stars", "csv"}));

    std::string family;
    std::string grid_text;
    int sweep_n = 10;
    bool sweep_eb = false, sweep_eg = false;
    GridArgs sweep_grid;
    CLI::App* sweep = app.add_subcommand("sweep", "Measures over a state family, CSV");
    sweep->add_option("--family", family, "two: theta in [0,pi]; three: theta in [0,pi]; "
                                          "rec4: theta in [0,pi/2] x phi in [0,pi]; dicke: k = 0..n")
        ->required()
        ->check(CLI::IsMember({"two", "three", "rec4", "dicke"}));
    sweep->add_option("--grid", grid_text, "N for two/three (default 181), NxM for rec4 (default 33x33)");
    sweep->add_option("--n", sweep_n, "Qubit count for the dicke family")->check(CLI::Range(1, 1000));
    sweep->add_flag("--eb", sweep_eb, "Barycentric measure");
    sweep->add_flag("--eg", sweep_eg, "Geometric measure");
    sweep_grid.add(sweep);

    int random_n = 0;
    int random_count = 1;
    bool antipodal = false;
    std::optional<std::uint64_t> seed;
    CLI::App* random = app.add_subcommand("random", "Random states from uniformly distributed stars");
    random->add_option("--n", random_n, "Qubit count")->required()->check(CLI::Range(1, 100000));
    random->add_option("--count", random_count, "Number of states")->check(CLI::Range(1, 10000000));
    random->add_flag("--antipodal", antipodal, "Compose random antipodal pairs (even n)");
    random->add_option("--seed", seed, "64-bit seed; drawn from the OS when absent")->envname("STELLAR_SEED");

    StateArgs evolve_state;
    DynamicsArgs evolve_args;
    CLI::App* evolve_cmd = app.add_subcommand("evolve", "Star trajectories under exp(-i beta H), CSV");
    evolve_state.add(evolve_cmd);
    evolve_args.add(evolve_cmd);

    StateArgs velocity_state;
    DynamicsArgs velocity_args;
    CLI::App* velocity_cmd = app.add_subcommand("velocity", "Polar velocities d theta / d beta, CSV");
    velocity_state.add(velocity_cmd);
    velocity_args.add(velocity_cmd);

    std::string reduce_h;
    std::string reduce_beta = "1";
    double reduce_tol = 1e-10;
    CLI::App* reduce_cmd = app.add_subcommand("reduce", "Block form V (+) W of exp(-i beta H), JSON");
    reduce_cmd->add_option("--hamiltonian", reduce_h, "Hamiltonian expression")->required();
    reduce_cmd->add_option("--beta", reduce_beta, "Phase beta (angles may use pi)");
    reduce_cmd->add_option("--tol", reduce_tol, "Off-block norm tolerance")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string op = "stellar " + sub->get_name();
    std::ostringstream result;
    try {
        if (sub == stars) {
            const Constellation c = state_to_stars(stars_state.resolve());
            result << (stars_format == "csv" ? io::constellation_to_csv(c) : io::constellation_to_json(c) + "\n");
        } else if (sub == measure) {
            const SymmetricState s = measure_state.resolve();
            if (!want_eb && !want_eg) want_eb = want_eg = true;
            std::optional<double> eb;
            std::optional<GeometricResult> eg;
            if (want_eb) eb = e_b(s);
            if (want_eg) eg = e_g(s, measure_grid.options);
            if (measure_format == "json") {
                std::string body;
                if (eb) body += "\"E_B\": " + io::format_real(*eb);
                if (eg)
                    body += std::string(body.empty() ? "" : ", ") + "\"E_G\": " + io::format_real(eg->value) +
                            ", \"EG_witness_theta\": " + io::format_real(eg->witness.theta()) +
                            ", \"EG_witness_phi\": " + io::format_real(eg->witness.phi());
                result << "{" << body << "}\n";
            } else {
                if (eb) result << "E_B = " << short_real(*eb) << "\n";
                if (eg)
                    result << "E_G = " << short_real(eg->value) << "\n"
                           << "E_G witness theta = " << short_real(eg->witness.theta())
                           << ", phi = " << short_real(eg->witness.phi()) << "\n";
            }
        } else if (sub == comp) {
            const SymmetricState c = compose(named_state(left), named_state(right));
            if (compose_format == "json")
                result << io::state_to_json(c) << "\n";
            else if (compose_format == "stars")
                result << io::constellation_to_json(state_to_stars(c)) << "\n";
            else
                result << io::constellation_to_csv(state_to_stars(c));
        } else if (sub == sweep) {
            if (!sweep_eb && !sweep_eg) sweep_eb = sweep_eg = true;
            std::vector<io::SweepRow> rows;
            auto add = [&](double p1, double p2, const SymmetricState& s) {
                rows.push_back(measure_row(family, p1, p2, s, sweep_eg, sweep_grid.options));
            };
            if (family == "two" || family == "three") {
                const int g = parse_grid(grid_text.empty() ? "181" : grid_text, 1)[0];
                for (int k = 0; k < g; ++k) {
                    const double t = lerp(0.0, kPi, k, g);
                    add(t, 0.0, family == "two" ? two_qubit_family(t) : three_qubit_family(t));
                }
            } else if (family == "rec4") {
                const auto g = parse_grid(grid_text.empty() ? "33x33" : grid_text, 2);
                for (int a = 0; a < g[0]; ++a)
                    for (int b = 0; b < g[1]; ++b) {
                        const double t = lerp(0.0, kPi / 2.0, a, g[0]), p = lerp(0.0, kPi, b, g[1]);
                        add(t, p, rec_family_state(t, p));
                    }
            } else {
                for (int k = 0; k <= sweep_n; ++k) add(k, sweep_n, dicke_state(sweep_n, k));
            }
            if (!sweep_eb)
                for (auto& r : rows) r.e_b = std::nan("");
            result << io::sweep_to_csv(rows);
        } else if (sub == random) {
            SeededRng rng = seed ? SeededRng(*seed) : SeededRng::from_entropy();
            result << "{\"seed\": " << rng.seed() << ", \"states\": [";
            for (int k = 0; k < random_count; ++k) {
                const SymmetricState s =
                    antipodal ? random_antipodal_state(random_n, rng) : random_state(random_n, rng);
                result << (k ? ",\n  " : "\n  ") << io::state_to_json(s);
            }
            result << "\n]}\n";
        } else if (sub == evolve_cmd) {
            result << io::trajectory_to_csv(evolve_args.run(evolve_state.resolve()));
        } else if (sub == velocity_cmd) {
            result << io::velocity_to_csv(velocity(velocity_args.run(velocity_state.resolve())));
        } else if (sub == reduce_cmd) {
            const HermitianOperator h = build_matrix(reduce_h);
            result << io::block_to_json(h.n, reduce(exponentiate(h, parse_angle(reduce_beta)), reduce_tol));
        }
    } catch (const UsageError& e) {
        err << op << ": " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << op << ": " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << op << ": " << e.what() << "\n";
        return 3;
    } catch (const ResourceError& e) {
        err << op << ": " << e.what() << "\n";
        return 3;
    } catch (const SymmetryError& e) {
        err << op << ": " << e.what() << "\n";
        return 4;
    } catch (const NumericError& e) {
        err << op << ": " << e.what() << "\n";
        return 4;
    }

    if (out_path.empty()) {
        out << result.str();
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            err << op << ": cannot write '" << out_path << "'\n";
            return 2;
        }
        file << result.str();
    }
    return 0;
}

}  // namespace stellar::cli
