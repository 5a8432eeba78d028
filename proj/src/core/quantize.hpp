#pragma once

#include "core/fourier.hpp"

// The quantization map Q = fourierE . fourier0_inv, its inverse (the symbol
// map), weight functions on the Phi grid and their quantizations, and the
// weighted-integral / trace pairings they satisfy.

namespace ncqft {

// A classical scalar field: complex values on the phi grid (the first d dual
// axes), constant in Phi once lifted.
struct ScalarField {
    int n = 0;
    double h = 1.0; // group-side spacing of the underlying lattice
    int d = 0;
    std::vector<cplx> values;

    ScalarField() = default;
    ScalarField(const LatticeSpec& spec, int base_dim)
        : n(spec.n), h(spec.h), d(base_dim) {
        std::uint64_t s = 1;
        for (int i = 0; i < d; ++i) s *= static_cast<std::uint64_t>(n);
        values.assign(s, cplx(0));
    }

    double dual_spacing() const { return kTwoPi / (n * h); }
    // phi coordinates of a flat index (signed representatives)
    std::vector<double> phi_at(std::uint64_t idx) const {
        MultiIndex mi{n, d};
        auto c = mi.unflatten(idx);
        std::vector<double> out(d);
        for (int i = 0; i < d; ++i)
            out[i] = dual_spacing() * static_cast<double>(signed_rep(c[i], n));
        return out;
    }
    double phi_cell() const { return std::pow(1.0 / (n * h), d); } // dP0 marginal
};

// Weight function on the Phi grid, normalized against the dP0 Phi-marginal
// cell (1/(n h) per axis): sum W * cell = 1.
struct WeightFunction {
    int n = 0;
    double h = 1.0;
    int m = 0;
    std::vector<double> values;

    double cell() const { return std::pow(1.0 / (n * h), m); }
    double total() const {
        double s = 0;
        for (double v : values) s += v;
        return s * cell();
    }
    void check_normalized() const {
        for (double v : values)
            if (v < 0) throw ConfigError("weight", "weight function must be nonnegative");
        if (std::abs(total() - 1.0) > 1e-10)
            throw ConfigError("weight", "weight function must have unit mass");
    }
    std::vector<double> Phi_at(std::uint64_t idx) const {
        MultiIndex mi{n, m};
        auto c = mi.unflatten(idx);
        std::vector<double> out(m);
        const double sp = kTwoPi / (n * h);
        for (int i = 0; i < m; ++i)
            out[i] = sp * static_cast<double>(signed_rep(c[i], n));
        return out;
    }
};

WeightFunction gaussian_weight(const LatticeSpec& spec, int m, double sigma);
WeightFunction single_cell_weight(const LatticeSpec& spec, int m, std::uint64_t cell_index);
WeightFunction table_weight(const LatticeSpec& spec, int m, std::vector<double> table);

// lift f(phi) to the full dual grid, constant in Phi
DualField lift(const ScalarField& f, const LatticeSpec& spec);
DualField lift_weight(const WeightFunction& W, const LatticeSpec& spec);

OperatorField quantize(const DualField& u, const LabelSetPtr& L);
DualField dequantize(const OperatorField& F);

// Quantize a Phi-only function; the fibers are asserted scalar, real, and
// self-adjoint, and the scalar values are returned per label.
std::vector<double> quantize_weight(const WeightFunction& W, const LabelSetPtr& L);
// Same check applied to an arbitrary dual function; throws CalculusError when
// a fiber fails to be scalar (a phi-dependence leak).
std::vector<double> scalar_fiber_values(const OperatorField& F, double offdiag_tol = 1e-8,
                                        double reality_tol = 1e-10);

struct WeightedIntegral {
    cplx weighted; // sum f(phi) W(Phi) dP0
    cplx plain;    // sum f(phi) d^d phi/(2pi)^d
};
WeightedIntegral weighted_integral(const ScalarField& f, const WeightFunction& W);

// sum over labels of tr(F) * QW * plancherel weight
cplx trace_pairing(const OperatorField& F, const std::vector<double>& qw);

// w(A) = sum_Phi W(Phi) exp(i Phi(A)) cell; w(0) = 1 by normalization
cplx weight_symbol_eval(const WeightFunction& W, const std::vector<double>& a);

} // namespace ncqft
