#include "core/group.hpp"

#include <cmath>

namespace ncqft {

void GroupParams::validate() const {
    if (d < 1) throw ConfigError("group.d", "base dimension must be positive");
    if (epsilon < 0) throw ConfigError("group.eps", "deformation parameter must be >= 0");
    if (n < 2) throw ConfigError("group.n", "need at least two points per axis");
    if (model == Model::FiniteCyclic) {
        if (n % 2 == 0)
            throw ConfigError("group.n", "finite-cyclic modulus must be odd so 2 is invertible");
        double r = std::round(epsilon);
        if (std::abs(epsilon - r) > 1e-12)
            throw ConfigError("group.eps", "finite-cyclic model needs an integer deformation parameter");
    }
}

long long GroupParams::eps_int() const {
    return mod_n(static_cast<long long>(std::llround(epsilon)), n);
}

// --- real model -------------------------------------------------------------

std::vector<double> wedge(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ShapeError("wedge: dimension mismatch");
    const int d = static_cast<int>(x.size());
    std::vector<double> w;
    w.reserve(static_cast<size_t>(d) * (d - 1) / 2);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            w.push_back(x[i] * y[j] - x[j] * y[i]);
    return w;
}

RElement identity_r(const GroupParams& p) {
    return RElement{std::vector<double>(p.d, 0.0), std::vector<double>(p.m(), 0.0)};
}

RElement compose(const RElement& g1, const RElement& g2, const GroupParams& p) {
    p.validate();
    if (static_cast<int>(g1.x.size()) != p.d || static_cast<int>(g2.x.size()) != p.d)
        throw ShapeError("compose: element does not match group dimension");
    RElement out;
    out.x.resize(p.d);
    for (int i = 0; i < p.d; ++i) out.x[i] = g1.x[i] + g2.x[i];
    auto w = wedge(g1.x, g2.x);
    out.a.resize(p.m());
    for (int i = 0; i < p.m(); ++i)
        out.a[i] = g1.a[i] + g2.a[i] + 0.5 * p.epsilon * w[i];
    return out;
}

RElement inverse(const RElement& g) {
    RElement out = g;
    for (auto& v : out.x) v = -v;
    for (auto& v : out.a) v = -v;
    return out;
}

RElement group_commutator(const RElement& g1, const RElement& g2, const GroupParams& p) {
    return compose(compose(g1, g2, p), compose(inverse(g1), inverse(g2), p), p);
}

std::vector<RElement> telescope(const std::vector<RElement>& chain, const GroupParams& p) {
    std::vector<RElement> out;
    out.reserve(chain.size());
    RElement acc = identity_r(p);
    for (const auto& g : chain) {
        acc = compose(acc, g, p);
        out.push_back(acc);
    }
    return out;
}

std::vector<RElement> untelescope(const std::vector<RElement>& partials, const GroupParams& p) {
    std::vector<RElement> out;
    out.reserve(partials.size());
    RElement prev = identity_r(p);
    for (const auto& y : partials) {
        out.push_back(compose(inverse(prev), y, p));
        prev = y;
    }
    return out;
}

// --- finite model -----------------------------------------------------------

std::vector<long long> wedge(const std::vector<long long>& x,
                             const std::vector<long long>& y) {
    if (x.size() != y.size()) throw ShapeError("wedge: dimension mismatch");
    const int d = static_cast<int>(x.size());
    std::vector<long long> w;
    w.reserve(static_cast<size_t>(d) * (d - 1) / 2);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            w.push_back(x[i] * y[j] - x[j] * y[i]);
    return w;
}

ZElement identity_z(const GroupParams& p) {
    return ZElement{std::vector<long long>(p.d, 0), std::vector<long long>(p.m(), 0)};
}

ZElement reduce(ZElement g, const GroupParams& p) {
    for (auto& v : g.x) v = mod_n(v, p.n);
    for (auto& v : g.a) v = mod_n(v, p.n);
    return g;
}

ZElement compose(const ZElement& g1, const ZElement& g2, const GroupParams& p) {
    p.validate();
    if (static_cast<int>(g1.x.size()) != p.d || static_cast<int>(g2.x.size()) != p.d)
        throw ShapeError("compose: element does not match group dimension");
    const long long half_eps = mod_n(p.eps_int() * p.inv2(), p.n);
    ZElement out;
    out.x.resize(p.d);
    for (int i = 0; i < p.d; ++i) out.x[i] = mod_n(g1.x[i] + g2.x[i], p.n);
    auto w = wedge(g1.x, g2.x);
    out.a.resize(p.m());
    for (int i = 0; i < p.m(); ++i)
        out.a[i] = mod_n(g1.a[i] + g2.a[i] + half_eps * w[i], p.n);
    return out;
}

ZElement inverse(const ZElement& g, const GroupParams& p) {
    ZElement out = g;
    for (auto& v : out.x) v = mod_n(-v, p.n);
    for (auto& v : out.a) v = mod_n(-v, p.n);
    return out;
}

ZElement group_commutator(const ZElement& g1, const ZElement& g2, const GroupParams& p) {
    return compose(compose(g1, g2, p), compose(inverse(g1, p), inverse(g2, p), p), p);
}

std::vector<ZElement> telescope(const std::vector<ZElement>& chain, const GroupParams& p) {
    std::vector<ZElement> out;
    out.reserve(chain.size());
    ZElement acc = identity_z(p);
    for (const auto& g : chain) {
        acc = compose(acc, g, p);
        out.push_back(acc);
    }
    return out;
}

std::vector<ZElement> untelescope(const std::vector<ZElement>& partials, const GroupParams& p) {
    std::vector<ZElement> out;
    out.reserve(partials.size());
    ZElement prev = identity_z(p);
    for (const auto& y : partials) {
        out.push_back(compose(inverse(prev, p), y, p));
        prev = y;
    }
    return out;
}

std::uint64_t z_element_count(const GroupParams& p) {
    std::uint64_t c = 1;
    for (int i = 0; i < p.dim(); ++i) c *= static_cast<std::uint64_t>(p.n);
    return c;
}

ZElement z_element_at(std::uint64_t index, const GroupParams& p) {
    ZElement g = identity_z(p);
    for (int i = 0; i < p.d; ++i) {
        g.x[i] = static_cast<long long>(index % p.n);
        index /= p.n;
    }
    for (int i = 0; i < p.m(); ++i) {
        g.a[i] = static_cast<long long>(index % p.n);
        index /= p.n;
    }
    return g;
}

std::uint64_t z_element_index(const ZElement& g, const GroupParams& p) {
    std::uint64_t idx = 0;
    std::uint64_t stride = 1;
    for (int i = 0; i < p.d; ++i) {
        idx += static_cast<std::uint64_t>(mod_n(g.x[i], p.n)) * stride;
        stride *= p.n;
    }
    for (int i = 0; i < p.m(); ++i) {
        idx += static_cast<std::uint64_t>(mod_n(g.a[i], p.n)) * stride;
        stride *= p.n;
    }
    return idx;
}

} // namespace ncqft
