#pragma once

#include <cmath>

// Measure conventions used across the transforms. All 2*pi bookkeeping lives
// here; nothing else in the codebase is allowed to introduce its own powers.
//
// Conventions, per axis of an n-point lattice with spacing h (h = 1 and
// arithmetic mod n in the finite-cyclic model):
//   group side      dH        -> cell h per axis
//   dual side       dP0       -> cell 1/(n h) per axis   [= h_phi/(2*pi)]
//   auxiliary Y sums (chain formulas) -> plain cell h per axis, paired with
//   the dual convention so that sum_Y e^{i dphi . Y} * h^d equals the
//   Kronecker delta divided by the dual phi-cell.
//
// With these choices the discrete Fourier pair is unitary, delta at the
// identity maps to the constant 1 on the dual, and the weighted-integral and
// chain-collapse identities hold exactly on conjugate grids.

namespace ncqft {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct MeasureConvention {
    int n = 0;     // points per axis
    double h = 1.0; // group-side spacing (1 in the finite model)

    double dual_spacing() const { return kTwoPi / (n * h); }

    // cell of dH per axis^k
    double haar_cell(int axes) const { return std::pow(h, axes); }
    // cell of dP0 (includes the 1/2pi per axis) per axes
    double dual_cell(int axes) const { return std::pow(1.0 / (n * h), axes); }
    // plain Riemann cell for auxiliary chain variables
    double chain_cell(int axes) const { return std::pow(h, axes); }
};

} // namespace ncqft
