#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/errors.hpp"

// The two-step nilpotent group family G_eps on R^d + Wedge^2 R^d, together
// with its commutative degeneration at eps = 0 and an exact finite-cyclic
// analogue over Z_n (odd n). Group law:
//
//   (X, A) . (Y, B) = (X + Y, A + B + (eps/2) X ^ Y)
//
// where X ^ Y collects the d(d-1)/2 antisymmetric components X_i Y_j - X_j Y_i
// for i < j in lexicographic order. In the finite model eps/2 means
// eps * inv2 mod n with inv2 the inverse of 2 in Z_n.

namespace ncqft {

enum class Model { ContinuumLattice, FiniteCyclic };

inline std::string model_name(Model m) {
    return m == Model::ContinuumLattice ? "continuum_lattice" : "finite_cyclic";
}

struct GroupParams {
    int d = 2;
    double epsilon = 1.0;
    Model model = Model::FiniteCyclic;
    int n = 3; // modulus (finite) or points per lattice axis (continuum)

    int m() const { return d * (d - 1) / 2; }
    int dim() const { return d + m(); }

    void validate() const;
    // eps as an integer mod n; only meaningful in the finite model
    long long eps_int() const;
    long long inv2() const { return (static_cast<long long>(n) + 1) / 2; }
};

// --- real-coordinate elements (continuum model) ----------------------------

struct RElement {
    std::vector<double> x; // d base coordinates
    std::vector<double> a; // m wedge coordinates

    bool operator==(const RElement&) const = default;
};

std::vector<double> wedge(const std::vector<double>& x, const std::vector<double>& y);

RElement identity_r(const GroupParams& p);
RElement compose(const RElement& g1, const RElement& g2, const GroupParams& p);
RElement inverse(const RElement& g);
RElement group_commutator(const RElement& g1, const RElement& g2, const GroupParams& p);

std::vector<RElement> telescope(const std::vector<RElement>& chain, const GroupParams& p);
std::vector<RElement> untelescope(const std::vector<RElement>& partials, const GroupParams& p);

// --- exact mod-n elements (finite-cyclic model) -----------------------------

struct ZElement {
    std::vector<long long> x;
    std::vector<long long> a;

    bool operator==(const ZElement&) const = default;
};

std::vector<long long> wedge(const std::vector<long long>& x,
                             const std::vector<long long>& y);

ZElement identity_z(const GroupParams& p);
ZElement reduce(ZElement g, const GroupParams& p);
ZElement compose(const ZElement& g1, const ZElement& g2, const GroupParams& p);
ZElement inverse(const ZElement& g, const GroupParams& p);
ZElement group_commutator(const ZElement& g1, const ZElement& g2, const GroupParams& p);

std::vector<ZElement> telescope(const std::vector<ZElement>& chain, const GroupParams& p);
std::vector<ZElement> untelescope(const std::vector<ZElement>& partials, const GroupParams& p);

inline long long mod_n(long long v, long long n) {
    long long r = v % n;
    return r < 0 ? r + n : r;
}

// Enumeration helpers for exhaustive finite checks: site index <-> element.
std::uint64_t z_element_count(const GroupParams& p);
ZElement z_element_at(std::uint64_t index, const GroupParams& p);
std::uint64_t z_element_index(const ZElement& g, const GroupParams& p);

} // namespace ncqft
