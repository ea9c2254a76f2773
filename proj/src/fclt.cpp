#include "randfield/fclt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "randfield/dependence.hpp"
#include "randfield/estimation.hpp"
#include "randfield/parallel.hpp"
#include "randfield/quadrature.hpp"
#include "randfield/rng.hpp"

namespace randfield {

namespace {

std::vector<double> parse_corner(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

void check_corner(const std::vector<double>& t) {
    if (t.empty()) throw std::invalid_argument("index set: empty corner");
    for (double x : t)
        if (x < 0.0 || x > 1.0)
            throw std::invalid_argument("index set: corners must lie in [0,1]^d");
}

}  // namespace

IndexSet IndexSet::quadrant(std::vector<double> t) {
    check_corner(t);
    IndexSet a;
    a.kind = Kind::Quadrant;
    a.lo.assign(t.size(), 0.0);
    a.hi = std::move(t);
    return a;
}

IndexSet IndexSet::rectangle(std::vector<double> s, std::vector<double> t) {
    check_corner(s);
    check_corner(t);
    if (s.size() != t.size()) throw std::invalid_argument("index set: corner dimension mismatch");
    for (std::size_t m = 0; m < s.size(); ++m)
        if (s[m] > t[m]) throw std::invalid_argument("index set: need s <= t coordinate-wise");
    IndexSet a;
    a.kind = Kind::Rectangle;
    a.lo = std::move(s);
    a.hi = std::move(t);
    return a;
}

IndexSet IndexSet::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad index set: " + text);
    std::string kind = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);
    if (kind == "quadrant") {
        if (rest.rfind("t=", 0) != 0) throw std::invalid_argument("quadrant needs 't=...'");
        return quadrant(parse_corner(rest.substr(2)));
    }
    if (kind == "rect") {
        auto semi = rest.find(';');
        if (semi == std::string::npos || rest.rfind("s=", 0) != 0 ||
            rest.compare(semi + 1, 2, "t=") != 0)
            throw std::invalid_argument("rect needs 's=...;t=...'");
        return rectangle(parse_corner(rest.substr(2, semi - 2)),
                         parse_corner(rest.substr(semi + 3)));
    }
    throw std::invalid_argument("unknown index set kind: " + kind);
}

double IndexSet::measure() const {
    double m = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) m *= hi[i] - lo[i];
    return m;
}

std::string IndexSet::str() const {
    std::ostringstream os;
    if (kind == Kind::Quadrant) {
        os << "quadrant:t=";
        for (std::size_t i = 0; i < dim(); ++i) os << (i ? "," : "") << hi[i];
    } else {
        os << "rect:s=";
        for (std::size_t i = 0; i < dim(); ++i) os << (i ? "," : "") << lo[i];
        os << ";t=";
        for (std::size_t i = 0; i < dim(); ++i) os << (i ? "," : "") << hi[i];
    }
    return os.str();
}

double intersection_measure(const IndexSet& a, const IndexSet& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("index sets: dimension mismatch");
    double m = 1.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double len = std::min(a.hi[i], b.hi[i]) - std::max(a.lo[i], b.lo[i]);
        if (len <= 0.0) return 0.0;
        m *= len;
    }
    return m;
}

double rho(const IndexSet& a, const IndexSet& b) {
    double sym = a.measure() + b.measure() - 2.0 * intersection_measure(a, b);
    return std::sqrt(std::max(0.0, sym));
}

double cell_measure(const IndexSet& a, long long n, const LatticePoint& i) {
    if (i.dim() != a.dim()) throw std::invalid_argument("cell_measure: dimension mismatch");
    double m = 1.0;
    for (std::size_t mi = 0; mi < a.dim(); ++mi) {
        const double coord = static_cast<double>(i[mi]);
        if (i[mi] < 1 || i[mi] > n) throw std::out_of_range("cell_measure: i outside {1..n}^d");
        double len = std::min(n * a.hi[mi], coord) - std::max(n * a.lo[mi], coord - 1.0);
        if (len <= 0.0) return 0.0;
        m *= std::min(len, 1.0);
    }
    return m;
}

CellWeights cell_weights(const IndexSet& a, long long n) {
    if (n < 1) throw std::invalid_argument("cell_weights: n must be >= 1");
    const std::size_t d = a.dim();
    std::vector<long long> first(d), last(d);
    for (std::size_t m = 0; m < d; ++m) {
        first[m] = std::max(1ll, static_cast<long long>(std::floor(n * a.lo[m])) + 1);
        last[m] = std::min(n, static_cast<long long>(std::ceil(n * a.hi[m])));
        if (last[m] < first[m]) return {n, {}};
    }
    CellWeights w;
    w.n = n;
    LatticePoint i = LatticePoint::zero(d);
    for (std::size_t m = 0; m < d; ++m) i[m] = first[m];
    while (true) {
        double len = cell_measure(a, n, i);
        if (len > 0.0) w.entries.emplace_back(i, len);
        std::size_t m = d;
        while (m > 0) {
            --m;
            if (i[m] < last[m]) {
                ++i[m];
                break;
            }
            i[m] = first[m];
            if (m == 0) return w;
        }
    }
}

SmoothedSum smoothed_sum(const FieldModel& model, const NoiseField& noise, const IndexSet& a,
                         long long n) {
    if (a.dim() != model.dim()) throw std::invalid_argument("smoothed_sum: dimension mismatch");
    const CellWeights w = cell_weights(a, n);
    double value = par::block_sum(w.entries.size(), [&](std::size_t i) {
        return w.entries[i].second * model.eval(noise, w.entries[i].first);
    });
    return {n, value};
}

Domain lattice_points_in(const IndexSet& a, long long n) {
    const std::size_t d = a.dim();
    std::vector<LatticePoint> pts;
    std::vector<long long> first(d), last(d);
    for (std::size_t m = 0; m < d; ++m) {
        first[m] = std::max(1ll, static_cast<long long>(std::ceil(n * a.lo[m])));
        last[m] = std::min(n, static_cast<long long>(std::floor(n * a.hi[m])));
        if (last[m] < first[m]) return Domain(d, {});
    }
    LatticePoint i = LatticePoint::zero(d);
    for (std::size_t m = 0; m < d; ++m) i[m] = first[m];
    while (true) {
        pts.push_back(i);
        std::size_t m = d;
        bool done = false;
        while (m > 0) {
            --m;
            if (i[m] < last[m]) {
                ++i[m];
                break;
            }
            i[m] = first[m];
            if (m == 0) done = true;
        }
        if (done) break;
    }
    return Domain(d, std::move(pts));
}

std::size_t boundary_cell_count(const IndexSet& a, long long n) {
    const std::size_t d = a.dim();
    // ]i-1, i] meets [lo, hi] iff lo <= i and hi > i-1; contained iff
    // lo <= i-1 and i <= hi (coordinates scaled by n).
    std::vector<long long> first(d), last(d);
    for (std::size_t m = 0; m < d; ++m) {
        first[m] = std::max(1ll, static_cast<long long>(std::floor(n * a.lo[m])));
        last[m] = std::min(n, static_cast<long long>(std::ceil(n * a.hi[m])) + 1);
        if (last[m] < first[m]) return 0;
    }
    std::size_t count = 0;
    LatticePoint i = LatticePoint::zero(d);
    for (std::size_t m = 0; m < d; ++m) i[m] = first[m];
    while (true) {
        bool meets = true, contained = true;
        for (std::size_t m = 0; m < d; ++m) {
            const double lo = n * a.lo[m], hi = n * a.hi[m];
            const double coord = static_cast<double>(i[m]);
            if (!(lo <= coord && hi > coord - 1.0)) meets = false;
            if (!(lo <= coord - 1.0 && coord <= hi)) contained = false;
        }
        if (meets && !contained) ++count;
        std::size_t m = d;
        bool done = false;
        while (m > 0) {
            --m;
            if (i[m] < last[m]) {
                ++i[m];
                break;
            }
            i[m] = first[m];
            if (m == 0) done = true;
        }
        if (done) break;
    }
    return count;
}

CovarianceReport fd_covariance_check(const FieldModel& model, long long n,
                                     const std::vector<std::pair<IndexSet, IndexSet>>& pairs,
                                     std::size_t replicates, std::uint64_t seed) {
    if (replicates < 3) throw std::invalid_argument("fd_covariance_check: need replicates");
    CovarianceReport report;
    report.n = n;
    report.replicates = replicates;
    report.sigma2 = model.longrun_variance_exact();
    if (report.sigma2 <= 0.0)
        throw std::invalid_argument("fd_covariance_check: degenerate long-run variance");

    const double scale = std::pow(static_cast<double>(n), -0.5 * static_cast<double>(model.dim()));
    report.pass = true;
    std::size_t pair_index = 0;
    for (const auto& [a, b] : pairs) {
        // per-pair replicate stream derived from the one experiment seed
        const std::uint64_t pair_seed = detail::mix64(seed + 0x9e3779b97f4a7c15ull * ++pair_index);
        const CellWeights wa = cell_weights(a, n);
        const CellWeights wb = cell_weights(b, n);
        std::vector<double> u(replicates), v(replicates);
        par::parallel_index(replicates, [&](std::size_t r) {
            NoiseField noise{model.noise(), pair_seed, r};
            u[r] = scale * par::block_sum_serial(wa.entries.size(), [&](std::size_t i) {
                       return wa.entries[i].second * model.eval(noise, wa.entries[i].first);
                   });
            v[r] = scale * par::block_sum_serial(wb.entries.size(), [&](std::size_t i) {
                       return wb.entries[i].second * model.eval(noise, wb.entries[i].first);
                   });
        });
        const double nn = static_cast<double>(replicates);
        double su = 0.0, sv = 0.0;
        for (std::size_t r = 0; r < replicates; ++r) {
            su += u[r];
            sv += v[r];
        }
        const double mu = su / nn, mv = sv / nn;
        double c = 0.0;
        for (std::size_t r = 0; r < replicates; ++r) c += (u[r] - mu) * (v[r] - mv);
        c /= nn - 1.0;

        // delete-one jackknife of the covariance
        std::vector<double> loo(replicates);
        double loo_mean = 0.0;
        double sxy = 0.0;
        for (std::size_t r = 0; r < replicates; ++r) sxy += u[r] * v[r];
        for (std::size_t r = 0; r < replicates; ++r) {
            const double mu_r = (su - u[r]) / (nn - 1.0);
            const double mv_r = (sv - v[r]) / (nn - 1.0);
            const double sxy_r = sxy - u[r] * v[r];
            loo[r] = (sxy_r - (nn - 1.0) * mu_r * mv_r) / (nn - 2.0);
            loo_mean += loo[r];
        }
        loo_mean /= nn;
        double ss = 0.0;
        for (double x : loo) ss += (x - loo_mean) * (x - loo_mean);

        CovariancePairResult pr;
        pr.a = a;
        pr.b = b;
        pr.lambda_intersection = intersection_measure(a, b);
        pr.target = report.sigma2 * pr.lambda_intersection;
        pr.empirical = c;
        pr.se = std::sqrt(ss * (nn - 1.0) / nn);
        pr.pass = std::abs(pr.empirical - pr.target) <= 3.0 * pr.se;
        report.pass = report.pass && pr.pass;
        report.pairs.push_back(pr);
    }
    return report;
}

GapReport discrete_smoothed_gap(const FieldModel& model, const IndexSet& a, long long n,
                                std::size_t replicates, std::uint64_t seed) {
    GapReport report;
    report.n = n;
    report.replicates = replicates;
    report.boundary_cells = boundary_cell_count(a, n);
    report.lambda = a.measure();

    const Domain gamma_n = lattice_points_in(a, n);
    report.lattice_points = gamma_n.size();

    const CellWeights w = cell_weights(a, n);
    const double nd = std::pow(static_cast<double>(n), static_cast<double>(model.dim()));
    const double scale = 1.0 / std::sqrt(nd);

    std::vector<double> sq(replicates);
    par::parallel_index(replicates, [&](std::size_t r) {
        NoiseField noise{model.noise(), seed, r};
        double smoothed = par::block_sum_serial(w.entries.size(), [&](std::size_t i) {
            return w.entries[i].second * model.eval(noise, w.entries[i].first);
        });
        double discrete =
            gamma_n.empty() ? 0.0 : partial_sum_serial(model, noise, gamma_n);
        const double gap = scale * (smoothed - discrete);
        sq[r] = gap * gap;
    });
    double total = 0.0;
    for (double x : sq) total += x;
    const double nn = static_cast<double>(replicates);
    const double msq = total / nn;
    report.gap = std::sqrt(msq);
    double var = 0.0;
    for (double x : sq) var += (x - msq) * (x - msq);
    var /= nn * (nn - 1.0);
    report.se = msq > 0.0 ? std::sqrt(var) / (2.0 * std::sqrt(msq)) : 0.0;

    const double delta2 = stability_sum(model, 2.0, 4000, detail::mix64(seed ^ 0xd317ull)).value;
    report.bound = 2.0 * delta2 * std::sqrt(static_cast<double>(report.boundary_cells)) /
                   std::sqrt(nd);
    report.within_bound = report.gap <= report.bound + 3.0 * report.se;
    report.counting_ok =
        std::abs(static_cast<double>(report.lattice_points) / nd - report.lambda) <=
        static_cast<double>(report.boundary_cells) / nd + 1e-12;
    return report;
}

bool picks_out(IndexSet::Kind kind, const std::vector<std::vector<double>>& pts,
               std::uint64_t mask) {
    const std::size_t n = pts.size();
    const std::size_t d = pts.empty() ? 0 : pts[0].size();
    if (mask == 0) {
        if (kind == IndexSet::Kind::Rectangle) return true;  // a degenerate box misses all points
        // each point needs one strictly positive coordinate to push t below;
        // only the origin is in every quadrant
        for (const auto& x : pts) {
            bool positive = false;
            for (std::size_t m = 0; m < d; ++m)
                if (x[m] > 0.0) positive = true;
            if (!positive) return false;
        }
        return true;
    }
    // tightest box around the selected subset
    std::vector<double> lo(d, 1.0), hi(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(mask >> i & 1)) continue;
        for (std::size_t m = 0; m < d; ++m) {
            lo[m] = std::min(lo[m], pts[i][m]);
            hi[m] = std::max(hi[m], pts[i][m]);
        }
    }
    if (kind == IndexSet::Kind::Quadrant) lo.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) continue;
        bool inside = true;
        for (std::size_t m = 0; m < d; ++m)
            if (pts[i][m] < lo[m] || pts[i][m] > hi[m]) {
                inside = false;
                break;
            }
        if (inside) return false;
    }
    return true;
}

namespace {

bool shattered(IndexSet::Kind kind, const std::vector<std::vector<double>>& pts) {
    const std::uint64_t combos = std::uint64_t{1} << pts.size();
    for (std::uint64_t mask = 0; mask < combos; ++mask)
        if (!picks_out(kind, pts, mask)) return false;
    return true;
}

}  // namespace

VcResult vc_index(IndexSet::Kind kind, int d, const VcProbeConfig& probe) {
    if (d < 1 || d > 2) throw std::invalid_argument("vc_index: d must be 1 or 2");
    VcResult result;
    for (int n = 1; n <= probe.max_index; ++n) {
        // probe grid: (n + margin)^d midpoints, all n-subsets
        const int g = n + probe.grid_margin;
        std::vector<std::vector<double>> grid_pts;
        if (d == 1) {
            for (int j = 0; j < g; ++j) grid_pts.push_back({(2.0 * j + 1.0) / (2.0 * g)});
        } else {
            for (int j = 0; j < g; ++j)
                for (int l = 0; l < g; ++l)
                    grid_pts.push_back({(2.0 * j + 1.0) / (2.0 * g), (2.0 * l + 1.0) / (2.0 * g)});
        }

        bool found = false;
        bool exhausted = false;
        std::vector<std::size_t> idx(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(n));
        if (grid_pts.size() >= idx.size()) {
            const std::size_t k = idx.size();
            while (true) {
                for (std::size_t i = 0; i < k; ++i) pts[i] = grid_pts[idx[i]];
                ++result.probes;
                if (result.probes > probe.budget) {
                    exhausted = true;
                    break;
                }
                if (shattered(kind, pts)) {
                    found = true;
                    break;
                }
                // advance to the next k-combination of the grid
                std::size_t pos = k;
                while (pos > 0 && idx[pos - 1] == grid_pts.size() - (k - (pos - 1))) --pos;
                if (pos == 0) break;
                ++idx[pos - 1];
                for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
            }
        }
        // randomized restarts from the unit cube
        for (int r = 0; !found && !exhausted && r < probe.random_restarts; ++r) {
            for (int i = 0; i < n; ++i) {
                pts[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(d));
                for (int m = 0; m < d; ++m)
                    pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] =
                        detail::to_unit(detail::counter_bits(
                            probe.seed, detail::kStreamSubset,
                            (static_cast<std::uint64_t>(n) << 40) +
                                (static_cast<std::uint64_t>(r) << 16) +
                                static_cast<std::uint64_t>(i * d + m)));
            }
            ++result.probes;
            if (result.probes > probe.budget) {
                exhausted = true;
                break;
            }
            if (shattered(kind, pts)) found = true;
        }

        // reaching level n means every level below had a shattered witness
        if (!found) {
            result.index = n;
            result.certified = !exhausted;
            return result;
        }
    }
    result.index = probe.max_index;
    result.certified = false;
    return result;
}

double covering_number_bound(int v, double eps) {
    if (v < 2) throw std::invalid_argument("covering_number_bound: V must be >= 2");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("covering_number_bound: eps must be in (0,1)");
    return static_cast<double>(v) * std::pow(4.0 * M_E, static_cast<double>(v)) *
           std::pow(1.0 / eps, 2.0 * (v - 1));
}

namespace {

// After eps = e^{-u}: integral_0^1 f(H(eps)) d eps = E f(c + b U), U ~ Exp(1),
// with c = log V + V log(4e), b = 2(V-1).
double entropy_integral(int v, const std::function<double(double)>& f) {
    if (v < 2) throw std::invalid_argument("entropy integral: V must be >= 2");
    const double c = std::log(static_cast<double>(v)) + v * std::log(4.0 * M_E);
    const double b = 2.0 * (v - 1);
    const QuadratureRule rule = gauss_laguerre(64);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        s += rule.weights[i] * f(c + b * rule.nodes[i]);
    return s;
}

}  // namespace

double entropy_sqrt_integral(int v) {
    return entropy_integral(v, [](double h) { return std::sqrt(h); });
}

double entropy_integral_q(int v, double q) {
    if (q <= 0.0) throw std::invalid_argument("entropy_integral_q: q must be positive");
    return entropy_integral(v, [q](double h) { return std::pow(h, 1.0 / q); });
}

}  // namespace randfield
