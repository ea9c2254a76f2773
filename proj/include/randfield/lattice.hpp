#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <vector>

namespace randfield {

using Coord = std::int64_t;

/// A point of the integer lattice Z^d. Dimension is capped at kMaxDim so
/// points are plain stack values; equality, hashing and the lexicographic
/// order are coordinate-wise.
struct LatticePoint {
    static constexpr std::size_t kMaxDim = 8;

    std::array<Coord, kMaxDim> c{};
    std::uint32_t d = 0;

    LatticePoint() = default;
    LatticePoint(std::initializer_list<Coord> coords);
    static LatticePoint zero(std::size_t dim);
    static LatticePoint unit(std::size_t dim, std::size_t axis, Coord sign = 1);

    std::size_t dim() const { return d; }
    Coord operator[](std::size_t m) const { return c[m]; }
    Coord& operator[](std::size_t m) { return c[m]; }

    LatticePoint operator+(const LatticePoint& o) const;
    LatticePoint operator-(const LatticePoint& o) const;
    LatticePoint operator-() const;

    Coord norm1() const;
    Coord norm_inf() const;

    bool operator==(const LatticePoint& o) const;
    bool operator!=(const LatticePoint& o) const { return !(*this == o); }
    bool operator<(const LatticePoint& o) const;  // lexicographic

    std::string str() const;  // "1,-2,0"
};

struct LatticePointHash {
    std::size_t operator()(const LatticePoint& p) const;
};

/// A finite subset of Z^d, deduplicated, iterated in lexicographic order.
/// Immutable after construction; shared concurrent reads are safe.
class Domain {
public:
    Domain() = default;
    Domain(std::size_t dim, std::vector<LatticePoint> points);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const std::vector<LatticePoint>& points() const { return points_; }
    bool contains(const LatticePoint& p) const;

    Domain translated(const LatticePoint& k) const;  // Γ + k

private:
    std::size_t dim_ = 0;
    std::vector<LatticePoint> points_;  // sorted lexicographic
    std::unordered_set<LatticePoint, LatticePointHash> index_;
};

/// Inner boundary under l1-adjacency: sites of Γ with a nearest neighbor
/// outside Γ.
Domain boundary(const Domain& g);

/// |Γ ∩ (Γ - k)|.
std::size_t shift_overlap(const Domain& g, const LatticePoint& k);

/// Ξ = { i ∈ Γ : i + k ∈ Γ }, the index set of the lag-k autocovariance
/// estimator. |Ξ| = |Γ ∩ (Γ - (-k))| by construction.
Domain lag_set(const Domain& g, const LatticePoint& k);

/// Generator for test domains. Shapes:
///   box:n=<n>,d=<d>                 the cube {1..n}^d
///   line:n=<n>,d=<d>                {(1,1,..),(2,1,..),...,(n,1,..)}
///   diagonal:n=<n>,d=<d>            {(i,i,..) : i = 1..n}
///   lshape:arm=<a>,thick=<t>        two overlapping a x t arms (d = 2)
///   random:n=<n>,d=<d>,keep=<q>,seed=<s>   iid thinning of box(n,d)
///   union2:n=<n>,gap=<g>,d=<d>      two n-boxes separated along axis 0
struct DomainShape {
    std::string descriptor;
    static DomainShape parse(const std::string& text);
};

Domain make_domain(const DomainShape& shape);
Domain make_domain(const std::string& descriptor);

/// File format: header "dim=<d>", then one point per line as
/// comma-separated integers.
Domain read_domain(std::istream& in);
void write_domain(std::ostream& out, const Domain& g);
Domain load_domain_file(const std::string& path);

}  // namespace randfield
