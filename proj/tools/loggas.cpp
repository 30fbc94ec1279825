#include "loggas/error.hpp"
#include "loggas/expansion.hpp"
#include "loggas/flow.hpp"
#include "loggas/operators.hpp"
#include "loggas/parallel.hpp"
#include "loggas/run_config.hpp"
#include "loggas/sampler.hpp"
#include "loggas/special.hpp"
#include "loggas/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace loggas;
using nlohmann::json;

namespace {

struct PotentialOptions {
    std::string potential = "gaussian";
    std::string base;
    std::string phi;
    double t = 1.0;
    double amplitude = 0.0;
    double omega = 1.0;
    double phi_mean = 0.0;
    double phi_width = 1.0;
    bool amplitude_set = false;

    void attach(CLI::App* app, bool with_phi)
    {
        app->add_option("--potential", potential, "preset name")->capture_default_str();
        app->add_option("--base", base, "even polynomial: \"x^2/2\", \"x^4\" or coefficients of x^0,x^2,...");
        if (!with_phi) return;
        app->add_option("--phi", phi, "perturbation: zero, cos, bump, lorentz");
        app->add_option("--t", t, "interpolation parameter of V + t phi")->capture_default_str();
        app->add_option("--amp", amplitude, "perturbation amplitude")->each([this](const std::string&) {
            amplitude_set = true;
        });
        app->add_option("--omega", omega, "frequency of the cos perturbation")->capture_default_str();
        app->add_option("--mean", phi_mean, "centre of the bump perturbation")->capture_default_str();
        app->add_option("--width", phi_width, "width of the bump perturbation")->capture_default_str();
    }

    PotentialSpec spec() const
    {
        PotentialSpec out;
        bool preset = false;
        for (const auto& [name, p] : potential_presets())
            if (name == potential) {
                out = p;
                preset = true;
            }
        if (!preset) throw std::invalid_argument("unknown potential preset '" + potential + "'");
        if (!base.empty()) out.even_coefficients = parse_even_polynomial(base);
        out.t = t;
        if (!phi.empty()) {
            out.perturbation.kind = parse_perturbation_kind(phi);
            out.perturbation.amplitude = amplitude_set ? amplitude : 0.2;
            out.perturbation.omega = omega;
            out.perturbation.mean = phi_mean;
            out.perturbation.width = phi_width;
        } else if (amplitude_set) {
            out.perturbation.amplitude = amplitude;
        }
        out.validate();
        return out;
    }
};

struct Common {
    double P = 1.0;
    std::size_t points = Grid::default_points;
    double tail_eps = 1e-14;
    double half_width = 0.0;
    double tol = 1e-12;
    std::string out;
    std::string format;
    std::uint64_t seed = 42;
};

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot open output file " + path);
    f << text;
}

json config_json(const std::string& command, const PotentialSpec& potential, std::map<std::string, double> parameters,
                 const Common& c)
{
    RunConfig rc;
    rc.command = command;
    rc.potential = potential;
    rc.parameters = std::move(parameters);
    if (!c.out.empty()) rc.outputs["out"] = c.out;
    rc.format = c.format.empty() ? "json" : c.format;
    rc.seed = c.seed;
    return json::parse(to_json(rc));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string csv_number(double v)
{
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

Grid make_grid(const Common& c, std::initializer_list<PotentialSpec> potentials)
{
    if (c.half_width > 0.0) return Grid(c.half_width, c.points);
    double L = 0.0;
    for (const PotentialSpec& V : potentials) L = std::max(L, choose_domain(V, c.P, c.tail_eps, c.points).half_width());
    return Grid(L, c.points);
}

std::string sidecar_path(const std::string& csv_path)
{
    const auto dot = csv_path.rfind('.');
    const auto slash = csv_path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv_path + ".json";
    return csv_path.substr(0, dot) + ".json";
}

int run_equilibrium(const Common& c, const PotentialOptions& po)
{
    const PotentialSpec V = po.spec();
    const Grid grid = make_grid(c, {V});
    const EquilibriumMeasure mu = solve_equilibrium(V, c.P, grid, c.tol);
    json j;
    j["config"] = config_json("equilibrium", V,
                              {{"P", c.P}, {"points", double(c.points)}, {"tail_eps", c.tail_eps}, {"tol", c.tol}}, c);
    j["P"] = c.P;
    j["L"] = grid.half_width();
    j["M"] = grid.size();
    j["lambda"] = mu.lambda;
    j["iterations"] = mu.iterations;
    j["final_residual"] = mu.residual;
    j["mass"] = integrate(mu.rho);
    j["energy"] = energy_functional(mu);
    if (c.format == "json") {
        write_text(c.out, dump(j));
        return 0;
    }
    const GridFunction r = characterization_residual(mu);
    std::ostringstream s;
    s << "x,rho,residual\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        s << csv_number(grid.node(i)) << ',' << csv_number(mu.rho[i]) << ',' << csv_number(r[i]) << '\n';
    write_text(c.out, s.str());
    if (!c.out.empty() && c.out != "-") write_text(sidecar_path(c.out), dump(j));
    return 0;
}

int run_d1(const Common& c, const PotentialOptions& po, const std::string& psi_kind, double omega)
{
    const PotentialSpec V = po.spec();
    const Grid grid = make_grid(c, {V});
    const EquilibriumMeasure mu = solve_equilibrium(V, c.P, grid, c.tol);
    const Perturbation psi{parse_perturbation_kind(psi_kind), 1.0, omega, 0.0, 1.0};
    const GridFunction f = psi.sample(grid);
    const D1Terms d = d1_terms(f, mu);
    json j;
    j["config"] = config_json("d1", V, {{"P", c.P}, {"points", double(c.points)}, {"omega", omega}}, c);
    j["psi"] = psi_kind;
    j["mean"] = mu.mean(f);
    j["derivative_term"] = d.derivative_term;
    j["insertion_term"] = d.insertion_term;
    j["d1"] = d.value;
    write_text(c.out, dump(j));
    return 0;
}

int run_flow(const Common& c, const PotentialOptions& po, double t_end, int steps, const std::string& rule,
             const std::string& method)
{
    const PotentialSpec V = po.spec();
    if (V.perturbation.is_zero()) throw std::invalid_argument("flow needs a non-zero perturbation (--phi, --amp)");
    FlowOptions options;
    if (rule == "printed") options.rule = FlowRule::printed;
    else if (rule != "corrected") throw std::invalid_argument("--rule must be corrected or printed");
    const bool all = method == "all";

    const Grid grid = make_grid(c, {V.at(0.0), V.at(t_end)});
    const EquilibriumMeasure mu0 = solve_equilibrium(V.at(0.0), c.P, grid, c.tol);
    const GridFunction phi = V.perturbation.sample(grid);
    std::vector<std::pair<std::string, GridFunction>> routes;
    json j;
    j["config"] = config_json("flow", V, {{"P", c.P}, {"t_end", t_end}, {"steps", steps}}, c);
    j["rule"] = rule;
    j["method"] = method;
    if (all || method == "ode") routes.emplace_back("ode", flow_density(phi, mu0, t_end, steps, options).rho);
    if (all || method == "fixedpoint") {
        const FlowState fp = fixed_point_u(phi, 0.0, t_end, mu0, c.P);
        j["fixed_point_iterations"] = fp.iterations;
        j["lambda_fixed_point"] = fp.mu.lambda;
        routes.emplace_back("fixedpoint", fp.mu.rho);
    }
    if (all || method == "refit") {
        const EquilibriumMeasure refit =
            solve_equilibrium(V.at(t_end), c.P, grid, c.tol, 2000, mu0.log_rho, mu0.kernel);
        j["lambda_refit"] = refit.lambda;
        routes.emplace_back("refit", refit.rho);
    }
    j["gaps"] = json::array();
    for (std::size_t a = 0; a < routes.size(); ++a)
        for (std::size_t b = a + 1; b < routes.size(); ++b)
            j["gaps"].push_back({{"first", routes[a].first}, {"second", routes[b].first},
                                 {"sup_norm", (routes[a].second - routes[b].second).sup_norm()}});

    if (c.out.empty() || c.out == "-") {
        write_text(c.out, dump(j));
        return 0;
    }
    std::ostringstream s;
    s << "x,rho_initial";
    for (const auto& r : routes) s << ",rho_" << r.first;
    s << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        s << csv_number(grid.node(i)) << ',' << csv_number(mu0.rho[i]);
        for (const auto& r : routes) s << ',' << csv_number(r.second[i]);
        s << '\n';
    }
    write_text(c.out, s.str());
    write_text(sidecar_path(c.out), dump(j));
    return 0;
}

int run_expand(const Common& c, int orders)
{
    const ExpansionResult g = gaussian_expansion_coefficients(c.P, orders);
    json j;
    j["config"] = config_json("expand-gaussian", gaussian_potential(), {{"P", c.P}, {"orders", orders}}, c);
    j["P"] = c.P;
    j["method"] = to_string(g.method);
    j["coefficients"] = g.coefficients;
    j["g1_series"] = c.P > 0.0 ? g1_series(c.P) : 0.0;
    j["remainder_slope"] = orders >= 1 && c.P > 0.0 ? remainder_slope(g) : 0.0;
    write_text(c.out, dump(j));
    return 0;
}

int run_free_energy(const Common& c, const std::vector<double>& ps)
{
    if (ps.empty()) throw std::invalid_argument("--p-list needs at least one value");
    if (c.format == "csv") {
        std::ostringstream s;
        s << "P,free_energy,large_p_law,scaled_residual\n";
        for (double P : ps) {
            const double F = free_energy(P), law = free_energy_large_p(P);
            s << csv_number(P) << ',' << csv_number(F) << ',' << csv_number(law) << ',' << csv_number((F - law) * P) << '\n';
        }
        write_text(c.out, s.str());
        return 0;
    }
    json j;
    j["config"] = config_json("free-energy", gaussian_potential(), {{"count", double(ps.size())}}, c);
    j["entries"] = json::array();
    for (double P : ps) {
        const double F = free_energy(P), law = free_energy_large_p(P);
        j["entries"].push_back({{"P", P}, {"free_energy", F}, {"large_p_law", law}, {"scaled_residual", (F - law) * P}});
    }
    write_text(c.out, dump(j));
    return 0;
}

int run_coefficients(const Common& c, const PotentialOptions& po, int t_nodes)
{
    const PotentialSpec V = po.spec();
    InterpolationOptions opt;
    opt.t_nodes = t_nodes;
    opt.grid_points = c.points;
    opt.tail_eps = c.tail_eps;
    opt.tol = c.tol;
    const CoefficientResult r = perturbed_coefficients(V, c.P, opt);
    json j;
    j["config"] = config_json("coefficients", V, {{"P", c.P}, {"t_nodes", t_nodes}, {"points", double(c.points)}}, c);
    j["c0"] = r.c0_energy;
    j["c0_interpolated"] = r.c0_interpolated;
    j["c1"] = r.c1;
    j["g0"] = r.g0;
    j["g1"] = r.g1;
    j["smoothness"] = r.smoothness;
    j["nodes"] = json::array();
    for (const InterpolationNode& n : r.nodes)
        j["nodes"].push_back({{"t", n.t}, {"weight", n.weight}, {"mean_phi", n.mean_phi}, {"d1", n.d1}});
    write_text(c.out, dump(j));
    return 0;
}

int run_sample(const Common& c, const PotentialOptions& po, int N, long sweeps, long burn_in, int chains,
               const std::string& psi_kind, double scale)
{
    ChainConfig cfg;
    cfg.N = N;
    cfg.P = c.P;
    cfg.potential = po.spec();
    cfg.n_sweeps = sweeps;
    cfg.burn_in = burn_in;
    cfg.proposal_scale = scale;
    cfg.seed = c.seed;
    std::function<double(double)> psi;
    if (psi_kind == "x2") psi = [](double x) { return x * x; };
    else if (psi_kind == "one") psi = [](double) { return 1.0; };
    else {
        const Perturbation p{parse_perturbation_kind(psi_kind), 1.0, 1.0, 0.0, 1.0};
        psi = [p](double x) { return p.value(x); };
    }
    const SampleEstimate e = linear_statistic_estimate(cfg, psi, chains);
    if (c.format == "csv") {
        std::ostringstream s;
        s << "chain,batch,mean\n";
        for (std::size_t k = 0; k < e.batch_means.size(); ++k)
            s << k / 32 << ',' << k % 32 << ',' << csv_number(e.batch_means[k]) << '\n';
        write_text(c.out, s.str());
        return 0;
    }
    json j;
    j["config"] = config_json("sample", cfg.potential,
                              {{"P", c.P}, {"N", N}, {"sweeps", double(sweeps)}, {"burn_in", double(burn_in)},
                               {"chains", chains}, {"proposal_scale", scale}},
                              c);
    j["psi"] = psi_kind;
    j["value"] = e.value;
    j["std_error"] = e.std_error;
    j["n_samples"] = e.n_samples;
    j["acceptance_rate"] = e.acceptance_rate;
    j["integrated_autocorrelation"] = e.integrated_autocorrelation;
    write_text(c.out, dump(j));
    return 0;
}

int run_verify(const Common& c)
{
    const std::vector<Check> checks = verification_suite(c.seed);
    json j;
    j["seed"] = c.seed;
    j["checks"] = json::array();
    bool all = true;
    for (const Check& k : checks) {
        j["checks"].push_back({{"name", k.name}, {"value", k.value}, {"tolerance", k.tolerance}, {"pass", k.pass}});
        all = all && k.pass;
    }
    j["all_pass"] = all;
    write_text(c.out, dump(j));
    return all ? 0 : 1;
}

unsigned threads_from_environment()
{
    const char* env = std::getenv("LOGGAS_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0') throw CLI::ValidationError("LOGGAS_THREADS", "must be a non-negative integer");
    return static_cast<unsigned>(v);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Log-gas equilibrium measures, 1/N expansions and Monte Carlo oracles"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads = 0;
    bool threads_set = false;
    app.add_option("--threads", threads, "worker threads (default: LOGGAS_THREADS or all cores)")
        ->each([&](const std::string&) { threads_set = true; });

    Common c;
    PotentialOptions po;
    const auto add_common = [&](CLI::App* sub, bool grid) {
        sub->add_option("--p", c.P, "temperature parameter P")->capture_default_str();
        sub->add_option("--out", c.out, "output file (default: stdout)");
        if (grid) {
            sub->add_option("--grid-points,--points", c.points, "grid points (even, >= 64)")->capture_default_str();
            sub->add_option("--half-width", c.half_width, "domain half width (0 = automatic)")->capture_default_str();
            sub->add_option("--tail-eps", c.tail_eps, "tail tolerance of the automatic domain")->capture_default_str();
            sub->add_option("--tol", c.tol, "equilibrium tolerance")->capture_default_str();
        }
    };

    auto* eq = app.add_subcommand("equilibrium", "solve for the equilibrium density");
    add_common(eq, true);
    po.attach(eq, true);
    eq->add_option("--format", c.format, "csv (density) or json (summary)")->check(CLI::IsMember({"csv", "json"}));

    std::string psi_kind = "cos";
    double omega = 1.0;
    auto* d1 = app.add_subcommand("d1", "first-order correction of a linear statistic");
    add_common(d1, true);
    po.attach(d1, false);
    d1->add_option("--psi", psi_kind, "cos, bump or lorentz")->capture_default_str();
    d1->add_option("--omega", omega, "frequency of cos")->capture_default_str();

    double t_end = 1.0;
    int steps = 20;
    std::string rule = "corrected";
    std::string method = "all";
    auto* flow = app.add_subcommand("flow", "density flow along V + t phi, three routes");
    add_common(flow, true);
    po.attach(flow, true);
    flow->add_option("--t-end", t_end, "final t")->capture_default_str();
    flow->add_option("--steps", steps, "RK4 steps (>= 16)")->capture_default_str();
    flow->add_option("--rule", rule, "corrected or printed")->capture_default_str();
    flow->add_option("--method", method, "ode, fixedpoint, refit or all")
        ->check(CLI::IsMember({"ode", "fixedpoint", "refit", "all"}))
        ->capture_default_str();

    int orders = 2;
    auto* expand = app.add_subcommand("expand-gaussian", "coefficients g_k of the Gaussian 1/N expansion");
    add_common(expand, false);
    expand->add_option("--orders", orders, "highest order K (0..8)")->capture_default_str();

    std::vector<double> p_list{10.0, 30.0, 100.0};
    auto* fe = app.add_subcommand("free-energy", "free energy F(P) and its large-P law");
    fe->add_option("--out", c.out, "output file (default: stdout)");
    fe->add_option("--p-list", p_list, "values of P")->delimiter(',')->capture_default_str();
    fe->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    int t_nodes = 12;
    auto* coef = app.add_subcommand("coefficients", "c0 and c1 for V_G + phi by interpolation");
    add_common(coef, true);
    po.attach(coef, true);
    coef->add_option("--t-nodes", t_nodes, "Gauss-Legendre nodes in t (>= 8)")->capture_default_str();

    int n_particles = 100, chains = 4;
    long sweeps = 20000, burn_in = 1000;
    double scale = 0.5;
    std::string sample_psi = "cos";
    auto* sample = app.add_subcommand("sample", "Metropolis estimate of a linear statistic");
    add_common(sample, false);
    po.attach(sample, true);
    sample->add_option("--n", n_particles, "particles")->capture_default_str();
    sample->add_option("--sweeps", sweeps, "recorded sweeps per chain")->capture_default_str();
    sample->add_option("--burn-in", burn_in, "discarded sweeps per chain")->capture_default_str();
    sample->add_option("--chains", chains, "independent chains")->capture_default_str();
    sample->add_option("--psi", sample_psi, "cos, bump, lorentz, x2 or one")->capture_default_str();
    sample->add_option("--proposal-scale", scale, "initial proposal width")->capture_default_str();
    sample->add_option("--seed", c.seed, "random seed")->capture_default_str();
    sample->add_option("--format", c.format, "json (estimate) or csv (batch means)")->check(CLI::IsMember({"csv", "json"}));

    auto* verify = app.add_subcommand("verify", "run the oracle suite and print a pass/fail report");
    verify->add_option("--seed", c.seed, "random seed")->capture_default_str();
    verify->add_option("--out", c.out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        set_thread_count(threads_set ? threads : threads_from_environment());
        if (c.format.empty()) c.format = eq->parsed() ? "csv" : "json";
        if (eq->parsed()) return run_equilibrium(c, po);
        if (d1->parsed()) return run_d1(c, po, psi_kind, omega);
        if (flow->parsed()) return run_flow(c, po, t_end, steps, rule, method);
        if (expand->parsed()) return run_expand(c, orders);
        if (fe->parsed()) return run_free_energy(c, p_list);
        if (coef->parsed()) return run_coefficients(c, po, t_nodes);
        if (sample->parsed()) return run_sample(c, po, n_particles, sweeps, burn_in, chains, sample_psi, scale);
        if (verify->parsed()) return run_verify(c);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
