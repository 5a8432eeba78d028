#include "core/lattice.hpp"

namespace ncqft {

std::vector<double> site_coords(const LatticeSpec& spec, std::uint64_t site) {
    MultiIndex mi{spec.n, spec.axes};
    auto c = mi.unflatten(site);
    std::vector<double> out(spec.axes);
    for (int i = 0; i < spec.axes; ++i)
        out[i] = spec.h * static_cast<double>(signed_rep(c[i], spec.n));
    return out;
}

ZElement site_element(const GroupParams& p, const LatticeSpec& spec, std::uint64_t site) {
    MultiIndex mi{spec.n, spec.axes};
    auto c = mi.unflatten(site);
    ZElement g;
    g.x.assign(c.begin(), c.begin() + p.d);
    g.a.assign(c.begin() + p.d, c.end());
    return g;
}

} // namespace ncqft
