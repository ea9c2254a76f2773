#include "randfield/fields.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace randfield {

namespace {

LatticePoint parse_point(const std::string& text, std::size_t dim) {
    LatticePoint p = LatticePoint::zero(dim);
    std::stringstream ss(text);
    std::string tok;
    std::size_t m = 0;
    while (std::getline(ss, tok, ',')) {
        if (m >= dim) throw std::invalid_argument("kernel file: too many coordinates in " + text);
        p[m++] = std::stoll(tok);
    }
    if (m != dim) throw std::invalid_argument("kernel file: expected " + std::to_string(dim) +
                                              " coordinates in " + text);
    return p;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

LinearKernel::LinearKernel(std::size_t d, std::vector<std::pair<LatticePoint, double>> entries)
    : dim(d) {
    std::map<LatticePoint, double> merged;
    for (auto& [site, a] : entries) {
        if (site.dim() != d) throw std::invalid_argument("linear kernel: site dimension mismatch");
        merged[site] += a;
    }
    for (auto& [site, a] : merged)
        if (a != 0.0) taps.emplace_back(site, a);
}

Coord LinearKernel::radius() const {
    Coord r = 0;
    for (const auto& [site, a] : taps) r = std::max(r, site.norm_inf());
    return r;
}

double LinearKernel::coeff_sum() const {
    double s = 0.0;
    for (const auto& [site, a] : taps) s += a;
    return s;
}

double LinearKernel::coeff_abs_sum() const {
    double s = 0.0;
    for (const auto& [site, a] : taps) s += std::abs(a);
    return s;
}

double LinearKernel::coeff_sq_sum() const {
    double s = 0.0;
    for (const auto& [site, a] : taps) s += a * a;
    return s;
}

double LinearKernel::coeff_at(const LatticePoint& s) const {
    for (const auto& [site, a] : taps)
        if (site == s) return a;
    return 0.0;
}

LinearKernel LinearKernel::named(const std::string& name, std::size_t dim) {
    if (name == "iid") return LinearKernel(dim, {{LatticePoint::zero(dim), 1.0}});
    if (name == "2tap")
        return LinearKernel(
            dim, {{LatticePoint::zero(dim), 1.0}, {LatticePoint::unit(dim, 0), 1.0}});
    throw std::invalid_argument("unknown built-in linear kernel: " + name);
}

LinearKernel LinearKernel::parse(std::istream& in, std::size_t dim) {
    std::vector<std::pair<LatticePoint, double>> entries;
    std::optional<double> tail;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("tail=", 0) == 0) {
            tail = std::stod(line.substr(5));
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("linear kernel line needs 's : a' format: " + line);
        entries.emplace_back(parse_point(trim(line.substr(0, colon)), dim),
                             std::stod(trim(line.substr(colon + 1))));
    }
    LinearKernel k(dim, std::move(entries));
    k.declared_tail_bound = tail;
    return k;
}

LinearKernel LinearKernel::load(const std::string& path, std::size_t dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open kernel file: " + path);
    return parse(in, dim);
}

VolterraKernel::VolterraKernel(std::size_t d, std::vector<Pair> entries) : dim(d) {
    std::map<std::pair<LatticePoint, LatticePoint>, double> merged;
    for (auto& pr : entries) {
        if (pr.s1.dim() != d || pr.s2.dim() != d)
            throw std::invalid_argument("volterra kernel: site dimension mismatch");
        if (pr.s1 == pr.s2)
            throw std::invalid_argument("volterra kernel: diagonal entries are not allowed");
        merged[{pr.s1, pr.s2}] += pr.a;
    }
    for (auto& [key, a] : merged)
        if (a != 0.0) pairs.push_back({key.first, key.second, a});
}

Coord VolterraKernel::radius() const {
    Coord r = 0;
    for (const auto& pr : pairs) r = std::max({r, pr.s1.norm_inf(), pr.s2.norm_inf()});
    return r;
}

double VolterraKernel::coeff_at(const LatticePoint& s1, const LatticePoint& s2) const {
    for (const auto& pr : pairs)
        if (pr.s1 == s1 && pr.s2 == s2) return pr.a;
    return 0.0;
}

VolterraKernel VolterraKernel::named(const std::string& name, std::size_t dim) {
    if (name == "lag1")
        return VolterraKernel(dim,
                              {{LatticePoint::zero(dim), LatticePoint::unit(dim, 0), 1.0}});
    throw std::invalid_argument("unknown built-in volterra kernel: " + name);
}

VolterraKernel VolterraKernel::parse(std::istream& in, std::size_t dim) {
    std::vector<Pair> entries;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto colon = line.find(':');
        auto bar = line.find('|');
        if (colon == std::string::npos || bar == std::string::npos || bar > colon)
            throw std::invalid_argument("volterra kernel line needs 's1|s2 : a' format: " + line);
        entries.push_back({parse_point(trim(line.substr(0, bar)), dim),
                           parse_point(trim(line.substr(bar + 1, colon - bar - 1)), dim),
                           std::stod(trim(line.substr(colon + 1)))});
    }
    return VolterraKernel(dim, std::move(entries));
}

VolterraKernel VolterraKernel::load(const std::string& path, std::size_t dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open kernel file: " + path);
    return parse(in, dim);
}

double lipschitz_apply(LipschitzMap map, double x) {
    switch (map) {
        case LipschitzMap::Abs:
            return std::abs(x);
        case LipschitzMap::Tanh:
            return std::tanh(x);
    }
    return x;
}

namespace {

// E K(sum_s a_s eps_s) for the subordinated centering constant. The linear
// combination is exactly normal under normal noise, so a 1-D Hermite rule
// suffices there; Rademacher supports enumerate exactly; small supports use
// a tensor rule; everything else falls back to a fixed-stream Monte Carlo.
double subordinated_centering(const LinearKernel& base, LipschitzMap map, const NoiseSpec& noise) {
    const double sigma_l = std::sqrt(base.coeff_sq_sum());
    if (noise.dist == NoiseDistribution::Normal) {
        if (map == LipschitzMap::Abs) return sigma_l * std::sqrt(2.0 / M_PI);
        const QuadratureRule rule = gauss_hermite(128);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * lipschitz_apply(map, sigma_l * rule.nodes[i]);
        return s;
    }
    const std::size_t taps = base.taps.size();
    if (noise.dist == NoiseDistribution::Rademacher && taps <= 20) {
        double s = 0.0;
        const std::size_t combos = std::size_t{1} << taps;
        for (std::size_t mask = 0; mask < combos; ++mask) {
            double lin = 0.0;
            for (std::size_t t = 0; t < taps; ++t)
                lin += (mask >> t & 1) ? base.taps[t].second : -base.taps[t].second;
            s += lipschitz_apply(map, lin);
        }
        return s / static_cast<double>(combos);
    }
    if (taps <= 3) {
        const QuadratureRule rule = noise_quadrature(noise, 64);
        const std::size_t nn = rule.nodes.size();
        double s = 0.0;
        std::vector<std::size_t> idx(taps, 0);
        while (true) {
            double lin = 0.0, w = 1.0;
            for (std::size_t t = 0; t < taps; ++t) {
                lin += base.taps[t].second * rule.nodes[idx[t]];
                w *= rule.weights[idx[t]];
            }
            s += w * lipschitz_apply(map, lin);
            std::size_t t = 0;
            while (t < taps && ++idx[t] == nn) idx[t++] = 0;
            if (t == taps) break;
        }
        return s;
    }
    // Monte Carlo, 2^20 draws from a fixed internal stream.
    const std::size_t n = std::size_t{1} << 20;
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double lin = 0.0;
        for (std::size_t t = 0; t < taps; ++t) {
            double u = detail::to_unit(detail::counter_bits(0x63656e74ull, detail::kStreamCentering,
                                                            r * taps + t));
            lin += base.taps[t].second * noise.transform(u);
        }
        s += lipschitz_apply(map, lin);
    }
    return s / static_cast<double>(n);
}

}  // namespace

FieldModel FieldModel::linear(LinearKernel kernel, NoiseSpec noise) {
    FieldModel m;
    m.kind_ = Kind::Linear;
    m.dim_ = kernel.dim;
    m.noise_ = noise;
    m.radius_ = kernel.radius();
    m.linear_ = std::move(kernel);
    m.descriptor_ = "linear";
    return m;
}

FieldModel FieldModel::volterra(VolterraKernel kernel, NoiseSpec noise) {
    FieldModel m;
    m.kind_ = Kind::Volterra;
    m.dim_ = kernel.dim;
    m.noise_ = noise;
    m.radius_ = kernel.radius();
    m.volterra_ = std::move(kernel);
    m.descriptor_ = "volterra";
    return m;
}

FieldModel FieldModel::subordinated(LinearKernel base, LipschitzMap map, NoiseSpec noise) {
    FieldModel m;
    m.kind_ = Kind::Subordinated;
    m.dim_ = base.dim;
    m.noise_ = noise;
    m.radius_ = base.radius();
    m.map_ = map;
    m.centering_ = subordinated_centering(base, map, noise);
    m.linear_ = std::move(base);
    m.descriptor_ = "subordinated";
    return m;
}

double FieldModel::autocovariance_exact(const LatticePoint& k) const {
    const double var = noise_.variance();
    switch (kind_) {
        case Kind::Linear: {
            double s = 0.0;
            for (const auto& [site, a] : linear_.taps) s += a * linear_.coeff_at(site + k);
            return var * s;
        }
        case Kind::Volterra: {
            // Zero diagonal means only pair-to-pair index matchings survive:
            // E(X_0 X_k) = sigma^4 sum a_{s1,s2} (a_{s1+k,s2+k} + a_{s2+k,s1+k}).
            double s = 0.0;
            for (const auto& pr : volterra_.pairs)
                s += pr.a * (volterra_.coeff_at(pr.s1 + k, pr.s2 + k) +
                             volterra_.coeff_at(pr.s2 + k, pr.s1 + k));
            return var * var * s;
        }
        case Kind::Subordinated:
            throw std::invalid_argument(
                "autocovariance_exact: no closed form for subordinated models");
    }
    throw std::logic_error("unreachable");
}

std::vector<LatticePoint> FieldModel::covariance_support() const {
    std::set<LatticePoint> sites;
    switch (kind_) {
        case Kind::Linear:
            for (const auto& [site, a] : linear_.taps) sites.insert(site);
            break;
        case Kind::Volterra:
            for (const auto& pr : volterra_.pairs) {
                sites.insert(pr.s1);
                sites.insert(pr.s2);
            }
            break;
        case Kind::Subordinated:
            throw std::invalid_argument(
                "covariance_support: no closed form for subordinated models");
    }
    std::set<LatticePoint> lags;
    for (const auto& u : sites)
        for (const auto& v : sites) lags.insert(u - v);
    std::vector<LatticePoint> out;
    for (const auto& k : lags)
        if (autocovariance_exact(k) != 0.0) out.push_back(k);
    return out;
}

double FieldModel::longrun_variance_exact() const {
    double s = 0.0;
    for (const auto& k : covariance_support()) s += autocovariance_exact(k);
    return s;
}

FieldModel FieldModel::parse(const std::string& descriptor, std::size_t dim, NoiseSpec noise) {
    auto colon = descriptor.find(':');
    std::string kind = descriptor.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);

    auto load_linear = [&](const std::string& spec) {
        try {
            return LinearKernel::named(spec, dim);
        } catch (const std::invalid_argument&) {
            return LinearKernel::load(spec, dim);
        }
    };

    FieldModel m;
    if (kind == "linear") {
        if (rest.empty()) throw std::invalid_argument("linear model needs a kernel spec");
        m = FieldModel::linear(load_linear(rest), noise);
    } else if (kind == "volterra") {
        if (rest.empty()) throw std::invalid_argument("volterra model needs a kernel spec");
        VolterraKernel k;
        try {
            k = VolterraKernel::named(rest, dim);
        } catch (const std::invalid_argument&) {
            k = VolterraKernel::load(rest, dim);
        }
        m = FieldModel::volterra(std::move(k), noise);
    } else if (kind == "subordinated") {
        auto sep = rest.rfind(":K=");
        if (sep == std::string::npos)
            throw std::invalid_argument("subordinated model needs ':K=abs' or ':K=tanh'");
        std::string map_name = rest.substr(sep + 3);
        LipschitzMap map;
        if (map_name == "abs")
            map = LipschitzMap::Abs;
        else if (map_name == "tanh")
            map = LipschitzMap::Tanh;
        else
            throw std::invalid_argument("unknown Lipschitz map: " + map_name);
        m = FieldModel::subordinated(load_linear(rest.substr(0, sep)), map, noise);
    } else {
        throw std::invalid_argument("unknown model kind: " + kind);
    }
    m.descriptor_ = descriptor;
    return m;
}

TruncatedField::TruncatedField(const FieldModel& base, Coord m) : base_(&base), m_(m) {
    if (m < 0) throw std::invalid_argument("truncation radius must be nonnegative");
    switch (base.kind()) {
        case FieldModel::Kind::Linear:
        case FieldModel::Kind::Subordinated:
            for (const auto& tap : base.linear_kernel().taps)
                (tap.first.norm_inf() <= m ? in_taps_ : out_taps_).push_back(tap);
            break;
        case FieldModel::Kind::Volterra:
            for (const auto& pr : base.volterra_kernel().pairs)
                if (pr.s1.norm_inf() <= m && pr.s2.norm_inf() <= m) in_pairs_.push_back(pr);
            break;
    }
    if (base.kind() == FieldModel::Kind::Subordinated && !out_taps_.empty() &&
        out_taps_.size() <= 2)
        out_rule_ = noise_quadrature(base.noise(), 32);
}

ValueWithError TruncatedField::subordinated_conditional_mean(double in_sum) const {
    const LipschitzMap map = base_->lipschitz_map();
    const double c = base_->centering();
    if (out_taps_.empty()) return {lipschitz_apply(map, in_sum) - c, 0.0};

    if (out_taps_.size() == 1) {
        double s = 0.0;
        for (std::size_t i = 0; i < out_rule_.nodes.size(); ++i)
            s += out_rule_.weights[i] *
                 lipschitz_apply(map, in_sum + out_taps_[0].second * out_rule_.nodes[i]);
        return {s - c, 0.0};
    }
    if (out_taps_.size() == 2) {
        double s = 0.0;
        for (std::size_t i = 0; i < out_rule_.nodes.size(); ++i)
            for (std::size_t j = 0; j < out_rule_.nodes.size(); ++j)
                s += out_rule_.weights[i] * out_rule_.weights[j] *
                     lipschitz_apply(map, in_sum + out_taps_[0].second * out_rule_.nodes[i] +
                                              out_taps_[1].second * out_rule_.nodes[j]);
        return {s - c, 0.0};
    }

    // More than two integrated-out coordinates: Monte Carlo with 10^4 draws
    // from a fixed internal stream, standard error reported.
    const std::size_t n = 10000;
    const std::size_t taps = out_taps_.size();
    double s = 0.0, s2 = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double lin = in_sum;
        for (std::size_t t = 0; t < taps; ++t) {
            double u = detail::to_unit(detail::counter_bits(
                0x7472756eull, detail::kStreamTruncation, r * taps + t));
            lin += out_taps_[t].second * base_->noise().transform(u);
        }
        double v = lipschitz_apply(map, lin);
        s += v;
        s2 += v * v;
    }
    double mean = s / static_cast<double>(n);
    double var = std::max(0.0, s2 / static_cast<double>(n) - mean * mean);
    return {mean - c, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace randfield
