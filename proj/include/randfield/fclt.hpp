#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "randfield/fields.hpp"
#include "randfield/lattice.hpp"

namespace randfield {

/// A quadrant [0,t] or rectangle [s,t] inside [0,1]^d, the two canonical
/// VC families; Lebesgue measure is a product in closed form.
struct IndexSet {
    enum class Kind { Quadrant, Rectangle };

    Kind kind = Kind::Quadrant;
    std::vector<double> lo, hi;

    static IndexSet quadrant(std::vector<double> t);
    static IndexSet rectangle(std::vector<double> s, std::vector<double> t);
    /// "quadrant:t=0.5,0.7" or "rect:s=0.1,0.2;t=0.5,0.9"
    static IndexSet parse(const std::string& text);

    std::size_t dim() const { return hi.size(); }
    double measure() const;
    std::string str() const;
};

/// A family of index sets of one kind with its declared VC index
/// (d+1 for quadrants, 2d+1 for rectangles).
struct SetCollection {
    IndexSet::Kind kind = IndexSet::Kind::Quadrant;
    std::size_t dim = 1;
    std::vector<IndexSet> sets;

    int declared_vc_index() const {
        return kind == IndexSet::Kind::Quadrant ? static_cast<int>(dim) + 1
                                                : 2 * static_cast<int>(dim) + 1;
    }
};

double intersection_measure(const IndexSet& a, const IndexSet& b);

/// rho(A,B) = sqrt(lambda(A delta B)).
double rho(const IndexSet& a, const IndexSet& b);

/// lambda(nA ∩ R_i) for the unit cell R_i = ]i-1, i] per coordinate;
/// i must lie in {1..n}^d.
double cell_measure(const IndexSet& a, long long n, const LatticePoint& i);

/// All cells with nonzero measure, lexicographic, bounding-box pruned.
struct CellWeights {
    long long n = 0;
    std::vector<std::pair<LatticePoint, double>> entries;
};
CellWeights cell_weights(const IndexSet& a, long long n);

struct SmoothedSum {
    long long n = 0;
    double value = 0.0;
};

/// S_n(A) = sum_i lambda(nA ∩ R_i) X_i over the n^d grid.
SmoothedSum smoothed_sum(const FieldModel& model, const NoiseField& noise, const IndexSet& a,
                         long long n);

/// Gamma_n(A) = nA ∩ {1..n}^d.
Domain lattice_points_in(const IndexSet& a, long long n);

/// |W_n|: cells of the grid meeting both nA and its complement.
std::size_t boundary_cell_count(const IndexSet& a, long long n);

struct CovariancePairResult {
    IndexSet a, b;
    double lambda_intersection = 0.0;
    double target = 0.0;  // sigma^2 lambda(A ∩ B)
    double empirical = 0.0;
    double se = 0.0;
    bool pass = false;  // |empirical - target| <= 3 se
};

struct CovarianceReport {
    long long n = 0;
    std::size_t replicates = 0;
    double sigma2 = 0.0;
    std::vector<CovariancePairResult> pairs;
    bool pass = false;
};

/// Empirical covariance of (n^{-d/2} S_n(A), n^{-d/2} S_n(B)) across
/// replicates against sigma^2 lambda(A ∩ B), jackknife standard errors.
CovarianceReport fd_covariance_check(const FieldModel& model, long long n,
                                     const std::vector<std::pair<IndexSet, IndexSet>>& pairs,
                                     std::size_t replicates, std::uint64_t seed);

struct GapReport {
    long long n = 0;
    std::size_t replicates = 0;
    std::size_t boundary_cells = 0;  // |W_n|
    std::size_t lattice_points = 0;  // |Gamma_n(A)|
    double lambda = 0.0;
    double gap = 0.0;  // n^{-d/2} ||S_n(A) - S_{Gamma_n(A)}||_2, Monte Carlo
    double se = 0.0;
    double bound = 0.0;  // 2 Delta_2 sqrt(|W_n|) / n^{d/2}
    bool within_bound = false;
    bool counting_ok = false;  // | |Gamma_n|/n^d - lambda | <= |W_n|/n^d
};

GapReport discrete_smoothed_gap(const FieldModel& model, const IndexSet& a, long long n,
                                std::size_t replicates, std::uint64_t seed);

struct VcProbeConfig {
    int grid_margin = 2;                     // grid has n + margin values per axis
    int random_restarts = 200;
    std::uint64_t budget = 4'000'000;        // probe-set evaluations
    std::uint64_t seed = 0;
    int max_index = 12;
};

struct VcResult {
    int index = 0;
    bool certified = false;  // exhaustive scan finished and a witness one below exists
    std::uint64_t probes = 0;
};

/// Smallest n such that no probed n-point set is shattered; shattering is
/// decided exactly by enumerating all subsets and testing box pick-out.
VcResult vc_index(IndexSet::Kind kind, int d, const VcProbeConfig& probe = {});

/// Exact pick-out test used by the shatter search (exposed for tests):
/// does some set of the family cut exactly the masked subset out of pts?
bool picks_out(IndexSet::Kind kind, const std::vector<std::vector<double>>& pts,
               std::uint64_t mask);

/// N(A, rho, eps) <= V (4e)^V (1/eps)^{2(V-1)} with the unspecified leading
/// constant taken as 1.
double covering_number_bound(int v, double eps);

/// integral_0^1 sqrt(H(eps)) d eps for H = log of the covering bound
/// (Gauss-Laguerre after eps = e^{-u}).
double entropy_sqrt_integral(int v);

/// integral_0^1 H(eps)^{1/q} d eps.
double entropy_integral_q(int v, double q);

}  // namespace randfield
