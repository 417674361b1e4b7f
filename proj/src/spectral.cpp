#include "mergedyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>

namespace mergedyn {

void SparseMatrix::add(int i, int j, double v) {
    rows[static_cast<size_t>(i)].emplace_back(j, v);
}

double SparseMatrix::at(int i, int j) const {
    for (const auto& [col, v] : rows[static_cast<size_t>(i)])
        if (col == j) return v;
    return 0.0;
}

std::vector<double> SparseMatrix::apply(const std::vector<double>& x) const {
    std::vector<double> y(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, v] : rows[static_cast<size_t>(i)])
            y[static_cast<size_t>(i)] += v * x[static_cast<size_t>(j)];
    return y;
}

std::vector<double> SparseMatrix::apply_transpose(const std::vector<double>& x) const {
    std::vector<double> y(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, v] : rows[static_cast<size_t>(i)])
            y[static_cast<size_t>(j)] += v * x[static_cast<size_t>(i)];
    return y;
}

SparseMatrix SparseMatrix::scaled(double c) const {
    SparseMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, v] : rows[static_cast<size_t>(i)]) out.add(i, j, c * v);
    return out;
}

Digraph SparseMatrix::support() const {
    Digraph g(n);
    for (int i = 0; i < n; ++i)
        for (const auto& [j, v] : rows[static_cast<size_t>(i)])
            if (v != 0.0) g.add_edge(i, j);
    return g;
}

bool SparseMatrix::has_zero_row() const {
    for (const auto& r : rows)
        if (r.empty()) return true;
    return false;
}

SparseMatrix adjacency_matrix(const MergeGraph& g, EdgeMode mode) {
    SparseMatrix m(static_cast<int>(g.vertices.size()));
    for (const auto& e : g.edges)
        m.add(e.src, e.dst, mode == EdgeMode::Ops ? static_cast<double>(e.mult) : 1.0);
    return m;
}

SparseMatrix adjacency_matrix(const MergeGraph& g) { return adjacency_matrix(g, g.config.edge_mode); }

namespace {

double sup_norm(const std::vector<double>& x) {
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

// Sup-norm renormalized power iteration; assumes irreducible aperiodic
// support. Convergence is judged componentwise relative to the entry, so
// entries many orders of magnitude below the largest one (weighted chains at
// tiny t) are resolved too; all summands are positive, so those small entries
// carry full relative precision.
std::pair<double, std::vector<double>> power_iterate(const SparseMatrix& K, bool transpose,
                                                     double tol, long max_iter, long& iters_out) {
    const size_t n = static_cast<size_t>(K.n);
    std::vector<double> x(n, 1.0);
    double lambda = 0;
    bool warned_flush = false;
    for (long it = 1; it <= max_iter; ++it) {
        std::vector<double> y = transpose ? K.apply_transpose(x) : K.apply(x);
        lambda = sup_norm(y);
        if (lambda == 0) throw Error("matrix annihilated a positive vector");
        bool converged = it > 1;
        for (size_t i = 0; i < n; ++i) {
            double ref = lambda * x[i];
            if (std::abs(y[i] - ref) > 0.25 * tol * std::max(ref, 1e-300)) converged = false;
        }
        for (size_t i = 0; i < n; ++i) {
            y[i] /= lambda;
            if (y[i] != 0.0 && y[i] < 1e-300) {
                y[i] = 0.0;
                if (!warned_flush) {
                    std::cerr << "power_iterate: flushed entries below 1e-300\n";
                    warned_flush = true;
                }
            }
        }
        x.swap(y);
        if (converged) {
            iters_out = it;
            return {lambda, x};
        }
    }
    throw NoConvergenceError("power iteration did not converge in " + std::to_string(max_iter) +
                             " steps");
}

} // namespace

PFResult perron_frobenius(const SparseMatrix& K, double tol, long max_iter, PFNorm mode) {
    Digraph g = K.support();
    if (!is_strongly_connected(g)) throw ReducibleError("matrix support is reducible");
    if (period(g) != 1) throw PeriodicError("matrix support is periodic");

    PFResult r;
    r.mode = mode;
    long it_r = 0, it_l = 0;
    auto [lam_r, eta] = power_iterate(K, false, tol, max_iter, it_r);
    auto [lam_l, psi] = power_iterate(K, true, tol, max_iter, it_l);
    if (std::abs(lam_r - lam_l) > tol * std::max(1.0, std::abs(lam_r)) * 4)
        throw NoConvergenceError("left/right eigenvalue estimates disagree");
    r.lambda = 0.5 * (lam_r + lam_l);
    r.eta = std::move(eta);
    r.psi = std::move(psi);
    r.iterations = it_r + it_l;

    auto norm2 = [](const std::vector<double>& x) {
        double s = 0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    };
    double ne = norm2(r.eta), np = norm2(r.psi);
    for (auto& v : r.eta) v /= ne;
    for (auto& v : r.psi) v /= np;
    if (mode == PFNorm::Pairing) {
        double pairing = 0;
        for (size_t i = 0; i < r.eta.size(); ++i) pairing += r.eta[i] * r.psi[i];
        for (auto& v : r.psi) v /= pairing;
    }

    std::vector<double> ke = K.apply(r.eta);
    std::vector<double> pk = K.apply_transpose(r.psi);
    for (size_t i = 0; i < r.eta.size(); ++i) {
        r.residual_right = std::max(r.residual_right, std::abs(ke[i] - r.lambda * r.eta[i]));
        r.residual_left = std::max(r.residual_left, std::abs(pk[i] - r.lambda * r.psi[i]));
    }
    return r;
}

MarkovChain to_markov(const SparseMatrix& K, const PFResult& pf) {
    MarkovChain c;
    c.provenance = ChainKind::Hamc;
    c.lambda = pf.lambda;
    c.eta = pf.eta;
    c.psi = pf.psi;
    if (pf.mode != PFNorm::Pairing) {
        double pairing = 0;
        for (size_t i = 0; i < c.eta.size(); ++i) pairing += c.eta[i] * c.psi[i];
        for (auto& v : c.psi) v /= pairing;
    }
    c.P = SparseMatrix(K.n);
    for (int i = 0; i < K.n; ++i)
        for (const auto& [j, v] : K.rows[static_cast<size_t>(i)])
            c.P.add(i, j, v * c.eta[static_cast<size_t>(j)] / (pf.lambda * c.eta[static_cast<size_t>(i)]));
    return c;
}

MarkovChain to_random_walk(const SparseMatrix& K) {
    if (K.has_zero_row()) throw ZeroRowError("random walk needs positive out-degree everywhere");
    MarkovChain c;
    c.provenance = ChainKind::RandomWalk;
    c.P = SparseMatrix(K.n);
    for (int i = 0; i < K.n; ++i) {
        double deg = 0;
        for (const auto& [j, v] : K.rows[static_cast<size_t>(i)]) deg += v;
        for (const auto& [j, v] : K.rows[static_cast<size_t>(i)]) c.P.add(i, j, v / deg);
    }
    return c;
}

Distribution uniform_distribution(int n) {
    return Distribution(static_cast<size_t>(n), 1.0 / n);
}

Distribution stationary(const MarkovChain& chain, double tol, long max_iter) {
    Digraph g = chain.P.support();
    if (!is_strongly_connected(g)) throw ReducibleError("chain is reducible");
    if (period(g) != 1) throw PeriodicError("chain is periodic");

    std::vector<double> pi(static_cast<size_t>(chain.P.n), 1.0 / chain.P.n);
    for (long it = 0; it < max_iter; ++it) {
        std::vector<double> next = chain.P.apply_transpose(pi);
        double s = 0;
        for (double v : next) s += v;
        for (auto& v : next) v /= s;
        double diff = 0;
        for (size_t i = 0; i < pi.size(); ++i) diff = std::max(diff, std::abs(next[i] - pi[i]));
        pi.swap(next);
        if (diff <= tol) break;
    }

    if (chain.provenance == ChainKind::Hamc || chain.provenance == ChainKind::WeightedHamc) {
        Distribution closed(pi.size());
        double total = 0;
        for (size_t i = 0; i < pi.size(); ++i) {
            closed[i] = chain.psi[i] * chain.eta[i];
            total += closed[i];
        }
        for (auto& v : closed) v /= total;
        for (size_t i = 0; i < pi.size(); ++i)
            if (std::abs(closed[i] - pi[i]) > 1e-9)
                throw Error("closed-form stationary disagrees with iteration");
        return closed;
    }
    return pi;
}

double entropy_rate(const MarkovChain& chain, const Distribution& pi) {
    double h = 0;
    for (int i = 0; i < chain.P.n; ++i)
        for (const auto& [j, p] : chain.P.rows[static_cast<size_t>(i)])
            if (p > 0) h -= pi[static_cast<size_t>(i)] * p * std::log(p);
    return h;
}

PathTableReport path_probability_table(const MarkovChain& chain, int ell) {
    // endpoint-only path laws need the plain 0/1 adjacency; weighted chains
    // carry an energy factor along the path
    if (chain.provenance != ChainKind::Hamc)
        throw Error("path probability table needs the unweighted conjugated chain");
    if (ell < 1 || ell > 4) throw Error("path length out of the supported range");
    Distribution pi = stationary(chain);

    PathTableReport rep;
    // depth-first over all length-ell paths
    struct Item { int v; int depth; double prob; };
    for (int s = 0; s < chain.P.n; ++s) {
        std::vector<Item> stack{{s, 0, pi[static_cast<size_t>(s)]}};
        while (!stack.empty()) {
            Item cur = stack.back();
            stack.pop_back();
            if (cur.depth == ell) {
                double expect = chain.psi[static_cast<size_t>(s)] * chain.eta[static_cast<size_t>(cur.v)] /
                                std::pow(chain.lambda, ell);
                rep.paths++;
                rep.max_abs_deviation = std::max(rep.max_abs_deviation, std::abs(cur.prob - expect));
                continue;
            }
            for (const auto& [j, p] : chain.P.rows[static_cast<size_t>(cur.v)])
                stack.push_back({j, cur.depth + 1, cur.prob * p});
        }
    }
    return rep;
}

BoltzmannResult boltzmann_edges(const SparseMatrix& K, const EdgeWeightFn& omega, double beta) {
    SparseMatrix Kw(K.n);
    for (int i = 0; i < K.n; ++i)
        for (const auto& [j, v] : K.rows[static_cast<size_t>(i)])
            Kw.add(i, j, v * std::exp(-beta * omega(i, j)));
    BoltzmannResult res;
    res.pf = perron_frobenius(Kw, 1e-12, 1000000, PFNorm::Pairing);
    res.lambda = res.pf.lambda;
    double Z = 0;
    for (int i = 0; i < K.n; ++i)
        for (const auto& [j, v] : Kw.rows[static_cast<size_t>(i)])
            Z += res.pf.psi[static_cast<size_t>(i)] * res.pf.eta[static_cast<size_t>(j)] * v;
    res.Z = Z;
    for (int i = 0; i < K.n; ++i)
        for (const auto& [j, v] : Kw.rows[static_cast<size_t>(i)]) {
            BoltzmannEdge e;
            e.src = i;
            e.dst = j;
            e.energy = omega(i, j);
            e.probability = res.pf.psi[static_cast<size_t>(i)] * res.pf.eta[static_cast<size_t>(j)] * v / Z;
            res.edges.push_back(e);
        }
    return res;
}

FreeEnergyReport free_energy_report(const SparseMatrix& K, const EdgeWeightFn& omega, double beta,
                                    double dbeta, int max_path_length) {
    FreeEnergyReport rep;
    rep.beta = beta;

    BoltzmannResult b = boltzmann_edges(K, omega, beta);
    rep.lambda = b.lambda;
    rep.Z = b.Z;
    for (const auto& e : b.edges) {
        rep.mean_energy += e.probability * e.energy;
        if (e.probability > 0) rep.edge_entropy -= e.probability * std::log(e.probability);
    }
    Distribution pi(static_cast<size_t>(K.n));
    for (size_t i = 0; i < pi.size(); ++i) pi[i] = b.pf.psi[i] * b.pf.eta[i];
    for (double p : pi)
        if (p > 0) rep.stationary_entropy -= p * std::log(p);

    rep.free_energy = rep.mean_energy - rep.edge_entropy / beta;

    double logZ_plus = std::log(boltzmann_edges(K, omega, beta + dbeta).lambda);
    double logZ_minus = std::log(boltzmann_edges(K, omega, beta - dbeta).lambda);
    rep.dlogZ_dbeta = (logZ_plus - logZ_minus) / (2 * dbeta);
    rep.energy_identity_residual = std::abs(rep.mean_energy + rep.dlogZ_dbeta);

    rep.free_energy_identity_residual =
        std::abs(rep.free_energy + (rep.stationary_entropy + std::log(rep.Z)) / beta);

    // per-length free energy of the induced Boltzmann path distribution
    rep.per_length_limit = -std::log(b.lambda) / beta;
    SparseMatrix Kw(K.n);
    for (int i = 0; i < K.n; ++i)
        for (const auto& [j, v] : K.rows[static_cast<size_t>(i)])
            Kw.add(i, j, v * std::exp(-beta * omega(i, j)));
    MarkovChain chain = to_markov(Kw, b.pf);
    chain.provenance = ChainKind::WeightedHamc;
    for (int ell = 1; ell <= max_path_length; ++ell) {
        double energy = 0, entropy = 0;
        struct Item { int v; int depth; double prob; double e; };
        for (int s = 0; s < K.n; ++s) {
            std::vector<Item> stack{{s, 0, pi[static_cast<size_t>(s)], 0.0}};
            while (!stack.empty()) {
                Item cur = stack.back();
                stack.pop_back();
                if (cur.depth == ell) {
                    if (cur.prob > 0) {
                        energy += cur.prob * cur.e;
                        entropy -= cur.prob * std::log(cur.prob);
                    }
                    continue;
                }
                for (const auto& [j, p] : chain.P.rows[static_cast<size_t>(cur.v)])
                    stack.push_back({j, cur.depth + 1, cur.prob * p, cur.e + omega(cur.v, j)});
            }
        }
        rep.per_length_free_energy.push_back((energy - entropy / beta) / ell);
    }

    rep.pass = rep.energy_identity_residual <= 1e-4 && rep.free_energy_identity_residual <= 1e-8 &&
               std::abs(rep.Z - rep.lambda) <= 1e-9 * rep.lambda;
    return rep;
}

SparseMatrix random_stochastic_like(const SparseMatrix& P, unsigned long long seed) {
    auto mix = [](unsigned long long& s) {
        s += 0x9E3779B97F4A7C15ull;
        unsigned long long z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    };
    unsigned long long state = seed * 0x9E3779B97F4A7C15ull + 1;
    SparseMatrix out(P.n);
    for (int i = 0; i < P.n; ++i) {
        std::vector<double> w;
        double total = 0;
        for (size_t k = 0; k < P.rows[static_cast<size_t>(i)].size(); ++k) {
            double u = (mix(state) >> 11) * 0x1.0p-53 + 1e-3;
            w.push_back(u);
            total += u;
        }
        for (size_t k = 0; k < w.size(); ++k)
            out.add(i, P.rows[static_cast<size_t>(i)][k].first, w[k] / total);
    }
    return out;
}

} // namespace mergedyn
