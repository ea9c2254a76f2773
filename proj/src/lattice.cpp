#include "randfield/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "randfield/rng.hpp"

namespace randfield {

LatticePoint::LatticePoint(std::initializer_list<Coord> coords) {
    if (coords.size() == 0 || coords.size() > kMaxDim)
        throw std::invalid_argument("lattice point dimension must be in [1, 8]");
    d = static_cast<std::uint32_t>(coords.size());
    std::size_t m = 0;
    for (Coord v : coords) c[m++] = v;
}

LatticePoint LatticePoint::zero(std::size_t dim) {
    if (dim == 0 || dim > kMaxDim)
        throw std::invalid_argument("lattice point dimension must be in [1, 8]");
    LatticePoint p;
    p.d = static_cast<std::uint32_t>(dim);
    return p;
}

LatticePoint LatticePoint::unit(std::size_t dim, std::size_t axis, Coord sign) {
    LatticePoint p = zero(dim);
    p.c[axis] = sign;
    return p;
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
    LatticePoint r = *this;
    for (std::size_t m = 0; m < d; ++m) r.c[m] += o.c[m];
    return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const {
    LatticePoint r = *this;
    for (std::size_t m = 0; m < d; ++m) r.c[m] -= o.c[m];
    return r;
}

LatticePoint LatticePoint::operator-() const {
    LatticePoint r = *this;
    for (std::size_t m = 0; m < d; ++m) r.c[m] = -r.c[m];
    return r;
}

Coord LatticePoint::norm1() const {
    Coord s = 0;
    for (std::size_t m = 0; m < d; ++m) s += std::abs(c[m]);
    return s;
}

Coord LatticePoint::norm_inf() const {
    Coord s = 0;
    for (std::size_t m = 0; m < d; ++m) s = std::max(s, std::abs(c[m]));
    return s;
}

bool LatticePoint::operator==(const LatticePoint& o) const {
    if (d != o.d) return false;
    for (std::size_t m = 0; m < d; ++m)
        if (c[m] != o.c[m]) return false;
    return true;
}

bool LatticePoint::operator<(const LatticePoint& o) const {
    for (std::size_t m = 0; m < d && m < o.d; ++m) {
        if (c[m] != o.c[m]) return c[m] < o.c[m];
    }
    return d < o.d;
}

std::string LatticePoint::str() const {
    std::string s;
    for (std::size_t m = 0; m < d; ++m) {
        if (m) s += ',';
        s += std::to_string(c[m]);
    }
    return s;
}

std::size_t LatticePointHash::operator()(const LatticePoint& p) const {
    std::uint64_t h = 0x243f6a8885a308d3ull ^ p.d;
    for (std::size_t m = 0; m < p.d; ++m)
        h = detail::mix64(h + 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(p.c[m]));
    return static_cast<std::size_t>(h);
}

Domain::Domain(std::size_t dim, std::vector<LatticePoint> points) : dim_(dim) {
    if (dim == 0 || dim > LatticePoint::kMaxDim)
        throw std::invalid_argument("domain dimension must be in [1, 8]");
    for (const auto& p : points)
        if (p.dim() != dim) throw std::invalid_argument("domain point dimension mismatch");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    points_ = std::move(points);
    index_.reserve(points_.size() * 2);
    for (const auto& p : points_) index_.insert(p);
}

bool Domain::contains(const LatticePoint& p) const {
    return index_.find(p) != index_.end();
}

Domain Domain::translated(const LatticePoint& k) const {
    std::vector<LatticePoint> pts;
    pts.reserve(size());
    for (const auto& p : points_) pts.push_back(p + k);
    return Domain(dim_, std::move(pts));
}

Domain boundary(const Domain& g) {
    std::vector<LatticePoint> out;
    for (const auto& p : g.points()) {
        bool edge = false;
        for (std::size_t m = 0; m < g.dim() && !edge; ++m) {
            for (Coord sgn : {Coord{1}, Coord{-1}}) {
                LatticePoint q = p;
                q[m] += sgn;
                if (!g.contains(q)) {
                    edge = true;
                    break;
                }
            }
        }
        if (edge) out.push_back(p);
    }
    return Domain(g.dim(), std::move(out));
}

std::size_t shift_overlap(const Domain& g, const LatticePoint& k) {
    if (k.dim() != g.dim()) throw std::invalid_argument("shift_overlap: dimension mismatch");
    std::size_t n = 0;
    for (const auto& p : g.points())
        if (g.contains(p + k)) ++n;  // p ∈ Γ-k  ⟺  p+k ∈ Γ
    return n;
}

Domain lag_set(const Domain& g, const LatticePoint& k) {
    if (k.dim() != g.dim()) throw std::invalid_argument("lag_set: dimension mismatch");
    std::vector<LatticePoint> out;
    for (const auto& p : g.points())
        if (g.contains(p + k)) out.push_back(p);
    return Domain(g.dim(), std::move(out));
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& args) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(args);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad shape parameter: " + tok);
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

long long get_int(const std::map<std::string, std::string>& kv, const std::string& key,
                  long long fallback = -1) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        if (fallback >= 0) return fallback;
        throw std::invalid_argument("missing shape parameter: " + key);
    }
    return std::stoll(it->second);
}

Domain box_domain(long long n, long long d) {
    if (n <= 0 || d <= 0) throw std::invalid_argument("box: n and d must be positive");
    std::vector<LatticePoint> pts;
    pts.reserve(static_cast<std::size_t>(std::pow(double(n), double(d))));
    LatticePoint p = LatticePoint::zero(static_cast<std::size_t>(d));
    for (std::size_t m = 0; m < p.dim(); ++m) p[m] = 1;
    while (true) {
        pts.push_back(p);
        std::size_t m = p.dim();
        while (m > 0) {
            --m;
            if (p[m] < n) {
                ++p[m];
                break;
            }
            p[m] = 1;
            if (m == 0) return Domain(static_cast<std::size_t>(d), std::move(pts));
        }
    }
}

}  // namespace

DomainShape DomainShape::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty shape descriptor");
    return DomainShape{text};
}

Domain make_domain(const std::string& descriptor) {
    return make_domain(DomainShape::parse(descriptor));
}

Domain make_domain(const DomainShape& shape) {
    const std::string& s = shape.descriptor;
    auto colon = s.find(':');
    std::string kind = s.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
    auto kv = parse_kv(args);

    if (kind == "box") {
        return box_domain(get_int(kv, "n"), get_int(kv, "d"));
    }
    if (kind == "line") {
        long long n = get_int(kv, "n");
        long long d = get_int(kv, "d");
        if (n <= 0) throw std::invalid_argument("line: n must be positive");
        std::vector<LatticePoint> pts;
        for (long long i = 1; i <= n; ++i) {
            LatticePoint p = LatticePoint::zero(static_cast<std::size_t>(d));
            p[0] = i;
            for (std::size_t m = 1; m < p.dim(); ++m) p[m] = 1;
            pts.push_back(p);
        }
        return Domain(static_cast<std::size_t>(d), std::move(pts));
    }
    if (kind == "diagonal") {
        long long n = get_int(kv, "n");
        long long d = get_int(kv, "d");
        if (n <= 0) throw std::invalid_argument("diagonal: n must be positive");
        std::vector<LatticePoint> pts;
        for (long long i = 1; i <= n; ++i) {
            LatticePoint p = LatticePoint::zero(static_cast<std::size_t>(d));
            for (std::size_t m = 0; m < p.dim(); ++m) p[m] = i;
            pts.push_back(p);
        }
        return Domain(static_cast<std::size_t>(d), std::move(pts));
    }
    if (kind == "lshape") {
        long long a = get_int(kv, "arm");
        long long t = get_int(kv, "thick");
        if (a <= 0 || t <= 0 || t > a) throw std::invalid_argument("lshape: need 0 < thick <= arm");
        std::vector<LatticePoint> pts;
        for (long long x = 1; x <= a; ++x)
            for (long long y = 1; y <= t; ++y) pts.push_back(LatticePoint{x, y});
        for (long long x = 1; x <= t; ++x)
            for (long long y = t + 1; y <= a; ++y) pts.push_back(LatticePoint{x, y});
        return Domain(2, std::move(pts));
    }
    if (kind == "random") {
        long long n = get_int(kv, "n");
        long long d = get_int(kv, "d");
        double keep = std::stod(kv.count("keep") ? kv.at("keep") : "0.5");
        std::uint64_t seed = static_cast<std::uint64_t>(get_int(kv, "seed", 0));
        if (keep <= 0.0 || keep > 1.0) throw std::invalid_argument("random: keep must be in (0,1]");
        Domain full = box_domain(n, d);
        std::vector<LatticePoint> pts;
        for (const auto& p : full.points()) {
            if (detail::site_uniform(seed, detail::kStreamSubset, 0, p) < keep) pts.push_back(p);
        }
        if (pts.empty()) pts.push_back(full.points().front());
        return Domain(static_cast<std::size_t>(d), std::move(pts));
    }
    if (kind == "union2") {
        long long n = get_int(kv, "n");
        long long d = get_int(kv, "d");
        long long gap = get_int(kv, "gap");
        if (gap <= 0) throw std::invalid_argument("union2: gap must be positive");
        Domain first = box_domain(n, d);
        std::vector<LatticePoint> pts = first.points();
        LatticePoint shift = LatticePoint::zero(static_cast<std::size_t>(d));
        shift[0] = n + gap;
        for (const auto& p : first.points()) pts.push_back(p + shift);
        return Domain(static_cast<std::size_t>(d), std::move(pts));
    }
    throw std::invalid_argument("unknown shape kind: " + kind);
}

Domain read_domain(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("dim=", 0) != 0)
        throw std::invalid_argument("domain file must start with 'dim=<d>'");
    std::size_t d = std::stoul(line.substr(4));
    std::vector<LatticePoint> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        LatticePoint p = LatticePoint::zero(d);
        std::stringstream ss(line);
        std::string tok;
        std::size_t m = 0;
        while (std::getline(ss, tok, ',')) {
            if (m >= d) throw std::invalid_argument("domain file: too many coordinates");
            p[m++] = std::stoll(tok);
        }
        if (m != d) throw std::invalid_argument("domain file: wrong coordinate count");
        pts.push_back(p);
    }
    return Domain(d, std::move(pts));
}

void write_domain(std::ostream& out, const Domain& g) {
    out << "dim=" << g.dim() << '\n';
    for (const auto& p : g.points()) out << p.str() << '\n';
}

Domain load_domain_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open domain file: " + path);
    return read_domain(in);
}

}  // namespace randfield
