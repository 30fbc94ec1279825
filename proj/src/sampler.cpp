#include "loggas/sampler.hpp"
#include "loggas/grid.hpp"
#include "loggas/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace loggas {

void ChainConfig::validate() const
{
    if (N < 1) throw std::invalid_argument("N must be at least 1");
    if (!(P >= 0.0) || !std::isfinite(P)) throw std::invalid_argument("P must be non-negative");
    if (n_sweeps < 64) throw std::invalid_argument("at least 64 recorded sweeps are required");
    if (burn_in < 0) throw std::invalid_argument("burn_in must be non-negative");
    if (!(proposal_scale > 0.0) || !std::isfinite(proposal_scale))
        throw std::invalid_argument("proposal_scale must be positive");
    potential.validate();
}

namespace {

constexpr std::size_t chunk = 32;

// sum_{j in [begin, end)} log|a - x_j| - log|b - x_j|, one log per chunk of products.
double log_gap_ratio(const double* x, std::size_t begin, std::size_t end, double a, double b)
{
    double acc = 0.0;
    for (std::size_t s = begin; s < end; s += chunk) {
        const std::size_t e = std::min(end, s + chunk);
        double pa[4] = {1.0, 1.0, 1.0, 1.0}, pb[4] = {1.0, 1.0, 1.0, 1.0};
        std::size_t j = s;
        for (; j + 4 <= e; j += 4)
            for (std::size_t l = 0; l < 4; ++l) {
                pa[l] *= std::abs(a - x[j + l]);
                pb[l] *= std::abs(b - x[j + l]);
            }
        for (; j < e; ++j) {
            pa[0] *= std::abs(a - x[j]);
            pb[0] *= std::abs(b - x[j]);
        }
        const double qa = (pa[0] * pa[1]) * (pa[2] * pa[3]);
        const double qb = (pb[0] * pb[1]) * (pb[2] * pb[3]);
        if (qa > 1e-150 && qa < 1e150 && qb > 1e-150 && qb < 1e150) {
            acc += std::log(qa / qb);
            continue;
        }
        for (j = s; j < e; ++j) {
            const double da = std::abs(a - x[j]);
            if (da == 0.0) return -std::numeric_limits<double>::infinity();
            acc += std::log(da) - std::log(std::abs(b - x[j]));
        }
    }
    return acc;
}

std::mt19937_64 chain_rng(std::uint64_t seed, std::uint64_t chain)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chain), static_cast<std::uint32_t>(chain >> 32)};
    return std::mt19937_64(seq);
}

} // namespace

double metropolis_log_ratio(std::span<const double> x, std::size_t i, double proposal, double coupling,
                            const PotentialSpec& potential)
{
    if (i >= x.size()) throw std::out_of_range("particle index out of range");
    const double current = x[i];
    double r = potential.value(current) - potential.value(proposal);
    if (coupling != 0.0) {
        const double g = log_gap_ratio(x.data(), 0, i, proposal, current)
            + log_gap_ratio(x.data(), i + 1, x.size(), proposal, current);
        if (std::isinf(g) && g < 0.0) return g;
        r += coupling * g;
    }
    return r;
}

ChainSummary metropolis_sample(const ChainConfig& cfg, const std::function<void(std::span<const double>)>& observe,
                               std::uint64_t chain)
{
    cfg.validate();
    const auto n = static_cast<std::size_t>(cfg.N);
    const double coupling = 2.0 * cfg.P / cfg.N;
    std::mt19937_64 rng = chain_rng(cfg.seed, chain);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    std::vector<double> x(n);
    for (double& v : x) v = normal(rng);

    double scale = cfg.proposal_scale;
    long accepted = 0, proposed = 0;
    const auto sweep = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            const double y = x[i] + scale * normal(rng);
            const double r = metropolis_log_ratio(x, i, y, coupling, cfg.potential);
            ++proposed;
            if (r >= 0.0 || uniform(rng) < std::exp(r)) {
                x[i] = y;
                ++accepted;
            }
        }
    };

    constexpr long window = 20;
    for (long s = 0; s < cfg.burn_in; ++s) {
        sweep();
        if ((s + 1) % window == 0) {
            const double a = static_cast<double>(accepted) / static_cast<double>(proposed);
            if (a < 0.4 || a > 0.6) scale *= std::clamp(a / 0.5, 0.5, 2.0);
            accepted = proposed = 0;
        }
    }
    accepted = proposed = 0;
    for (long s = 0; s < cfg.n_sweeps; ++s) {
        sweep();
        if (observe) observe(x);
    }
    return {static_cast<double>(accepted) / static_cast<double>(std::max(proposed, 1L)), scale, x};
}

namespace {

struct ChainMoments {
    std::vector<double> batch_means;
    double sum = 0.0;
    double sum_sq = 0.0;
    long count = 0;
    double acceptance = 0.0;
};

ChainMoments run_chain(const ChainConfig& cfg, const std::function<double(std::span<const double>)>& observable,
                       std::uint64_t chain)
{
    constexpr long batches = 32;
    const long size = cfg.n_sweeps / batches;
    ChainMoments m;
    m.batch_means.assign(batches, 0.0);
    std::vector<long> counts(batches, 0);
    long t = 0;
    const ChainSummary summary = metropolis_sample(cfg, [&](std::span<const double> x) {
        const double v = observable(x);
        const auto b = static_cast<std::size_t>(std::min(t / size, batches - 1));
        m.batch_means[b] += v;
        ++counts[b];
        m.sum += v;
        m.sum_sq += v * v;
        ++m.count;
        ++t;
    }, chain);
    for (std::size_t b = 0; b < m.batch_means.size(); ++b) m.batch_means[b] /= static_cast<double>(counts[b]);
    m.acceptance = summary.acceptance_rate;
    return m;
}

} // namespace

SampleEstimate configuration_estimate(const ChainConfig& cfg,
                                      const std::function<double(std::span<const double>)>& observable, int chains)
{
    if (chains < 1) throw std::invalid_argument("at least one chain is required");
    cfg.validate();
    std::vector<ChainMoments> results(static_cast<std::size_t>(chains));
    parallel_for(results.size(), [&](std::size_t c) { results[c] = run_chain(cfg, observable, c); });

    double sum = 0.0, sum_sq = 0.0, acceptance = 0.0;
    long count = 0;
    std::vector<double> means;
    for (const ChainMoments& m : results) {
        sum += m.sum;
        sum_sq += m.sum_sq;
        count += m.count;
        acceptance += m.acceptance;
        means.insert(means.end(), m.batch_means.begin(), m.batch_means.end());
    }
    SampleEstimate e;
    e.n_samples = count;
    e.value = sum / static_cast<double>(count);
    e.acceptance_rate = acceptance / chains;
    const double k = static_cast<double>(means.size());
    double bm = 0.0;
    for (double v : means) bm += v;
    bm /= k;
    double var_b = 0.0;
    for (double v : means) var_b += (v - bm) * (v - bm);
    var_b /= (k - 1.0);
    e.std_error = std::sqrt(var_b / k);
    const double var_s = std::max(0.0, sum_sq / static_cast<double>(count) - e.value * e.value);
    const double batch_size = static_cast<double>(cfg.n_sweeps / 32);
    e.integrated_autocorrelation = var_s > 0.0 ? batch_size * var_b / var_s : 1.0;
    e.batch_means = std::move(means);
    return e;
}

SampleEstimate linear_statistic_estimate(const ChainConfig& cfg, const std::function<double(double)>& psi, int chains)
{
    return configuration_estimate(cfg, [&psi](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += psi(v);
        return s / static_cast<double>(x.size());
    }, chains);
}

namespace {

struct Rule1D {
    std::vector<double> x, w;
};

Rule1D trapezoid(double a, double b, std::size_t n)
{
    Rule1D r;
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        r.x.push_back(a + h * static_cast<double>(k));
        r.w.push_back((k == 0 || k + 1 == n) ? 0.5 * h : h);
    }
    return r;
}

// Tanh-sinh rule on [0, A], clustering at 0.
Rule1D tanh_sinh(double A, std::size_t n)
{
    constexpr double T = 3.2;
    Rule1D r;
    const double dt = 2.0 * T / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = -T + dt * static_cast<double>(k);
        const double s = std::numbers::pi * std::sinh(t);
        const double e = std::exp(-s);
        r.x.push_back(A / (1.0 + e));
        r.w.push_back(A * e / ((1.0 + e) * (1.0 + e)) * std::numbers::pi * std::cosh(t) * dt);
    }
    return r;
}

double quadrature_half_width(double P, const PotentialSpec& potential)
{
    potential.validate();
    for (double L = 1.0; L <= 200.0; L += 0.5)
        if (std::min(potential.value(L), potential.value(-L)) - 2.0 * P * std::log1p(2.0 * L) > 40.0) return L;
    throw std::invalid_argument("potential too flat for tensor quadrature");
}

// Returns {int f, int f g} with g symmetrized over particle order.
std::pair<double, double> tensor_integral(int N, double P, const PotentialSpec& V,
                                          const std::function<double(std::span<const double>)>* g)
{
    if (N < 1 || N > 3) throw std::invalid_argument("tensor quadrature supports N in {1, 2, 3}");
    if (!(P >= 0.0) || !std::isfinite(P)) throw std::invalid_argument("P must be non-negative");
    const double L = quadrature_half_width(P, V);
    double z = 0.0, zg = 0.0;
    if (N == 1) {
        const Rule1D r = trapezoid(-L, L, 400);
        for (std::size_t k = 0; k < r.x.size(); ++k) {
            const double f = r.w[k] * std::exp(-V.value(r.x[k]));
            z += f;
            if (g) zg += f * (*g)(std::span<const double>(&r.x[k], 1));
        }
        return {z, zg};
    }
    if (N == 2) {
        const double W = std::numbers::sqrt2 * L;
        const Rule1D ru = tanh_sinh(W, 400);
        const Rule1D rv = trapezoid(-W, W, 400);
        for (std::size_t a = 0; a < ru.x.size(); ++a) {
            const double u = ru.x[a];
            const double inter = std::pow(std::numbers::sqrt2 * u, P);
            for (std::size_t b = 0; b < rv.x.size(); ++b) {
                const double v = rv.x[b];
                double p[2] = {(v + u) / std::numbers::sqrt2, (v - u) / std::numbers::sqrt2};
                const double f = 2.0 * ru.w[a] * rv.w[b] * inter * std::exp(-V.value(p[0]) - V.value(p[1]));
                z += f;
                if (g) {
                    double q[2] = {p[1], p[0]};
                    zg += 0.5 * f * ((*g)(p) + (*g)(q));
                }
            }
        }
        return {z, zg};
    }
    const double beta = 2.0 * P / 3.0;
    const Rule1D r1 = trapezoid(-L, L, 160);
    const Rule1D rg = tanh_sinh(2.0 * L, 160);
    std::vector<double> vx(r1.x.size());
    for (std::size_t k = 0; k < r1.x.size(); ++k) vx[k] = V.value(r1.x[k]);
    for (std::size_t ia = 0; ia < rg.x.size(); ++ia) {
        const double a = rg.x[ia];
        for (std::size_t ib = 0; ib < rg.x.size(); ++ib) {
            const double b = rg.x[ib];
            const double inter = 6.0 * rg.w[ia] * rg.w[ib] * std::pow(a * b * (a + b), beta);
            for (std::size_t k = 0; k < r1.x.size(); ++k) {
                double p[3] = {r1.x[k], r1.x[k] + a, r1.x[k] + a + b};
                const double f = inter * r1.w[k] * std::exp(-vx[k] - V.value(p[1]) - V.value(p[2]));
                z += f;
                if (g) {
                    double s = 0.0;
                    std::sort(p, p + 3);
                    do {
                        s += (*g)(p);
                    } while (std::next_permutation(p, p + 3));
                    zg += f * s / 6.0;
                }
            }
        }
    }
    return {z, zg};
}

} // namespace

double brute_force_log_partition(int N, double P, const PotentialSpec& potential)
{
    return std::log(tensor_integral(N, P, potential, nullptr).first);
}

double brute_force_expectation(int N, double P, const PotentialSpec& potential,
                               const std::function<double(std::span<const double>)>& observable)
{
    const auto [z, zg] = tensor_integral(N, P, potential, &observable);
    return zg / z;
}

SampleEstimate thermodynamic_integration(const ChainConfig& cfg, int t_nodes, int chains)
{
    if (t_nodes < 8) throw std::invalid_argument("the t-quadrature needs at least 8 nodes");
    cfg.validate();
    SampleEstimate out;
    if (cfg.potential.perturbation.is_zero()) return out;
    const QuadratureRule rule = gauss_legendre(static_cast<std::size_t>(t_nodes), 0.0, 1.0);
    const Perturbation phi = cfg.potential.perturbation;
    double variance = 0.0, tau = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        ChainConfig node = cfg;
        node.potential = cfg.potential.at(rule.nodes[k]);
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(k), 0x7469u};
        std::uint32_t words[2];
        seq.generate(words, words + 2);
        node.seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
        const SampleEstimate e = linear_statistic_estimate(node, [&phi](double x) { return phi.value(x); }, chains);
        out.value -= cfg.N * rule.weights[k] * e.value;
        variance += std::pow(cfg.N * rule.weights[k] * e.std_error, 2);
        out.n_samples += e.n_samples;
        out.acceptance_rate += e.acceptance_rate / t_nodes;
        tau += e.integrated_autocorrelation / t_nodes;
    }
    out.std_error = std::sqrt(variance);
    out.integrated_autocorrelation = tau;
    return out;
}

} // namespace loggas
