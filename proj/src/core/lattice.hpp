#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/group.hpp"

// Discretization of the group manifold: a periodic grid with n points per
// axis over the d + m coordinates, carrying the Haar weight h^(d+m) per site.
// The dual grid is the conjugate lattice (spacing 2*pi/(n h) per axis).

namespace ncqft {

using cplx = std::complex<double>;

struct LatticeSpec {
    int n = 3;
    double h = 1.0;
    int axes = 3; // d + m

    void validate() const {
        if (n < 2) throw ConfigError("lattice.n", "need at least two points per axis");
        if (h <= 0) throw ConfigError("lattice.h", "spacing must be positive");
    }
    double extent() const { return n * h; }
    double haar_weight() const { return std::pow(h, axes); }
    std::uint64_t sites() const {
        std::uint64_t s = 1;
        for (int i = 0; i < axes; ++i) s *= static_cast<std::uint64_t>(n);
        return s;
    }
    MeasureConvention convention() const { return MeasureConvention{n, h}; }
};

inline LatticeSpec lattice_for(const GroupParams& p, double h = 1.0) {
    return LatticeSpec{p.n, p.model == Model::FiniteCyclic ? 1.0 : h, p.dim()};
}

// Mixed-radix index over `axes` coordinates of size n each, first axis fastest.
struct MultiIndex {
    int n;
    int axes;

    std::uint64_t flatten(const std::vector<long long>& c) const {
        std::uint64_t idx = 0, stride = 1;
        for (int i = 0; i < axes; ++i) {
            idx += static_cast<std::uint64_t>(mod_n(c[i], n)) * stride;
            stride *= static_cast<std::uint64_t>(n);
        }
        return idx;
    }
    std::vector<long long> unflatten(std::uint64_t idx) const {
        std::vector<long long> c(axes);
        for (int i = 0; i < axes; ++i) {
            c[i] = static_cast<long long>(idx % n);
            idx /= n;
        }
        return c;
    }
};

// Signed representative of a periodic index, in [-n/2, n/2).
inline long long signed_rep(long long k, int n) {
    long long r = mod_n(k, n);
    return r <= (n - 1) / 2 ? r : r - n;
}

// A complex function sampled on the full group lattice.
struct LatticeField {
    LatticeSpec spec;
    std::vector<cplx> values;

    explicit LatticeField(const LatticeSpec& s) : spec(s), values(s.sites(), cplx(0)) {}

    MultiIndex indexer() const { return MultiIndex{spec.n, spec.axes}; }
    cplx& at(const std::vector<long long>& c) { return values[indexer().flatten(c)]; }
    const cplx& at(const std::vector<long long>& c) const {
        return values[indexer().flatten(c)];
    }

    double norm2_haar() const {
        double s = 0;
        for (const auto& v : values) s += std::norm(v);
        return s * spec.haar_weight();
    }
};

// Dual-grid function on (phi, Phi); same shape as the group lattice, cell
// weight from the dual convention (1/(n h) per axis).
struct DualField {
    LatticeSpec spec; // spec of the underlying group lattice
    std::vector<cplx> values;

    explicit DualField(const LatticeSpec& s) : spec(s), values(s.sites(), cplx(0)) {}

    MultiIndex indexer() const { return MultiIndex{spec.n, spec.axes}; }
    double cell() const { return spec.convention().dual_cell(spec.axes); }
    double norm2_dual() const {
        double s = 0;
        for (const auto& v : values) s += std::norm(v);
        return s * cell();
    }
};

inline void check_same_grid(const LatticeSpec& a, const LatticeSpec& b) {
    if (a.n != b.n || a.axes != b.axes || std::abs(a.h - b.h) > 1e-15)
        throw ShapeError("lattice specs do not match");
}

// Real-space coordinates of a site (continuum model): signed representatives
// times the spacing, so fields can be centered at the origin.
std::vector<double> site_coords(const LatticeSpec& spec, std::uint64_t site);

// Site of an integer coordinate tuple taken mod n.
ZElement site_element(const GroupParams& p, const LatticeSpec& spec, std::uint64_t site);

} // namespace ncqft
