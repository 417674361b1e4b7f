#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mergedyn/digraph.hpp"
#include "mergedyn/errors.hpp"
#include "mergedyn/merge_graph.hpp"

namespace mergedyn {

struct SparseMatrix {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> rows; // (col, value), value > 0

    explicit SparseMatrix(int size = 0) : n(size), rows(static_cast<size_t>(size)) {}
    void add(int i, int j, double v);
    double at(int i, int j) const;
    std::vector<double> apply(const std::vector<double>& x) const;           // (Kx)_i
    std::vector<double> apply_transpose(const std::vector<double>& x) const; // (x K)_j
    SparseMatrix scaled(double c) const;
    Digraph support() const;
    bool has_zero_row() const;
};

SparseMatrix adjacency_matrix(const MergeGraph& g, EdgeMode mode);
SparseMatrix adjacency_matrix(const MergeGraph& g);

enum class PFNorm { Unit, Pairing };

struct PFResult {
    double lambda = 0;
    std::vector<double> eta; // right
    std::vector<double> psi; // left
    PFNorm mode = PFNorm::Pairing;
    double residual_right = 0, residual_left = 0;
    long iterations = 0;
};

// power iteration on K and its transpose; requires irreducible + aperiodic support
PFResult perron_frobenius(const SparseMatrix& K, double tol = 1e-12, long max_iter = 1000000,
                          PFNorm mode = PFNorm::Pairing);

enum class ChainKind { Hamc, RandomWalk, WeightedHamc };

struct MarkovChain {
    SparseMatrix P;
    ChainKind provenance = ChainKind::Hamc;
    double lambda = 0;
    std::vector<double> eta, psi; // pairing-normalized PF data when provenance is a HAMC
};

MarkovChain to_markov(const SparseMatrix& K, const PFResult& pf);
MarkovChain to_random_walk(const SparseMatrix& K);

using Distribution = std::vector<double>;

Distribution stationary(const MarkovChain& chain, double tol = 1e-13, long max_iter = 2000000);
Distribution uniform_distribution(int n);
double entropy_rate(const MarkovChain& chain, const Distribution& pi);

struct PathTableReport {
    int paths = 0;
    double max_abs_deviation = 0;
};
// exhaustive check that length-ell path probabilities only depend on endpoints
PathTableReport path_probability_table(const MarkovChain& chain, int ell);

using EdgeWeightFn = std::function<double(int, int)>;

struct BoltzmannEdge {
    int src, dst;
    double probability;
    double energy;
};

struct BoltzmannResult {
    std::vector<BoltzmannEdge> edges;
    double Z = 0;
    double lambda = 0;
    PFResult pf; // of the weighted matrix, pairing normalization
};

// K is the 0/1 adjacency; the weighted matrix e^{-beta w} K is formed internally
BoltzmannResult boltzmann_edges(const SparseMatrix& K, const EdgeWeightFn& omega, double beta);

struct FreeEnergyReport {
    double beta = 0;
    double lambda = 0;
    double Z = 0;
    double mean_energy = 0;
    double edge_entropy = 0;        // Sh of the Boltzmann edge distribution
    double stationary_entropy = 0;  // Sh(pi)
    double free_energy = 0;         // Ebar - Sh/beta
    double dlogZ_dbeta = 0;         // central difference
    double energy_identity_residual = 0;   // |Ebar + dlogZ/dbeta|
    double free_energy_identity_residual = 0;
    std::vector<double> per_length_free_energy; // F_ell / ell for ell = 1..L
    double per_length_limit = 0;                // -log(lambda)/beta
    bool pass = true;
};

FreeEnergyReport free_energy_report(const SparseMatrix& K, const EdgeWeightFn& omega, double beta,
                                    double dbeta, int max_path_length = 3);

// row-respecting random stochastic matrix on the same support, for optimality probes
SparseMatrix random_stochastic_like(const SparseMatrix& P, unsigned long long seed);

} // namespace mergedyn
