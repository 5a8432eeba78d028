#include "core/quantize.hpp"

#include <cmath>

namespace ncqft {

namespace {
std::uint64_t pow_u64(int b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<std::uint64_t>(b);
    return r;
}
} // namespace

WeightFunction gaussian_weight(const LatticeSpec& spec, int m, double sigma) {
    if (sigma <= 0) throw ConfigError("weight.sigma", "gaussian width must be positive");
    WeightFunction W;
    W.n = spec.n;
    W.h = spec.h;
    W.m = m;
    W.values.resize(pow_u64(spec.n, m));
    for (std::uint64_t i = 0; i < W.values.size(); ++i) {
        auto Phi = W.Phi_at(i);
        double q = 0;
        for (double v : Phi) q += v * v;
        W.values[i] = std::exp(-0.5 * q / (sigma * sigma));
    }
    double t = W.total();
    for (auto& v : W.values) v /= t;
    return W;
}

WeightFunction single_cell_weight(const LatticeSpec& spec, int m, std::uint64_t cell_index) {
    WeightFunction W;
    W.n = spec.n;
    W.h = spec.h;
    W.m = m;
    W.values.assign(pow_u64(spec.n, m), 0.0);
    if (cell_index >= W.values.size())
        throw ConfigError("weight.cell_index", "cell index outside the Phi grid");
    W.values[cell_index] = 1.0 / W.cell();
    return W;
}

WeightFunction table_weight(const LatticeSpec& spec, int m, std::vector<double> table) {
    WeightFunction W;
    W.n = spec.n;
    W.h = spec.h;
    W.m = m;
    if (table.size() != pow_u64(spec.n, m))
        throw ConfigError("weight.table", "table size does not match the Phi grid");
    W.values = std::move(table);
    double t = W.total();
    if (t <= 0) throw ConfigError("weight.table", "table must have positive mass");
    for (auto& v : W.values) v /= t;
    return W;
}

DualField lift(const ScalarField& f, const LatticeSpec& spec) {
    if (f.n != spec.n || std::abs(f.h - spec.h) > 1e-15)
        throw ShapeError("lift: scalar field grid does not match the lattice");
    DualField u(spec);
    const std::uint64_t base = pow_u64(spec.n, f.d);
    const std::uint64_t wedge = spec.sites() / base;
    for (std::uint64_t sa = 0; sa < wedge; ++sa)
        for (std::uint64_t sx = 0; sx < base; ++sx)
            u.values[sx + sa * base] = f.values[sx];
    return u;
}

DualField lift_weight(const WeightFunction& W, const LatticeSpec& spec) {
    DualField u(spec);
    const std::uint64_t wedge = W.values.size();
    const std::uint64_t base = spec.sites() / wedge;
    for (std::uint64_t sa = 0; sa < wedge; ++sa)
        for (std::uint64_t sx = 0; sx < base; ++sx)
            u.values[sx + sa * base] = W.values[sa];
    return u;
}

OperatorField quantize(const DualField& u, const LabelSetPtr& L) {
    return fourierE(fourier0_inv(u), L);
}

DualField dequantize(const OperatorField& F) {
    return fourier0(fourierE_inv(F));
}

std::vector<double> scalar_fiber_values(const OperatorField& F, double offdiag_tol,
                                        double reality_tol) {
    std::vector<double> out;
    out.reserve(F.fibers.size());
    for (const auto& fib : F.fibers) {
        const int M = static_cast<int>(fib.rows());
        double offdiag = 0, spread = 0, imag = 0;
        const cplx mean = fib.trace() / static_cast<double>(M);
        for (int r = 0; r < M; ++r)
            for (int c = 0; c < M; ++c) {
                if (r == c) {
                    spread = std::max(spread, std::abs(fib(r, c) - mean));
                } else {
                    offdiag = std::max(offdiag, std::abs(fib(r, c)));
                }
            }
        if (offdiag > offdiag_tol || spread > offdiag_tol)
            throw CalculusError("quantized weight fiber is not scalar (phi dependence leaked)");
        imag = std::abs(mean.imag());
        double selfadj = (fib - fib.adjoint()).cwiseAbs().maxCoeff();
        if (imag > reality_tol || selfadj > reality_tol)
            throw CalculusError("quantized weight fiber is not real self-adjoint");
        out.push_back(mean.real());
    }
    return out;
}

std::vector<double> quantize_weight(const WeightFunction& W, const LabelSetPtr& L) {
    W.check_normalized();
    if (W.n != L->spec.n || W.m != L->params.m())
        throw ShapeError("quantize_weight: weight grid does not match the label set");
    return scalar_fiber_values(quantize(lift_weight(W, L->spec), L));
}

WeightedIntegral weighted_integral(const ScalarField& f, const WeightFunction& W) {
    W.check_normalized();
    if (W.n != f.n || std::abs(W.h - f.h) > 1e-15)
        throw ShapeError("weighted_integral: grids do not match");
    WeightedIntegral out{cplx(0), cplx(0)};
    const double phi_cell = f.phi_cell();
    const double Phi_cell = W.cell();
    for (std::uint64_t sa = 0; sa < W.values.size(); ++sa)
        for (std::uint64_t sx = 0; sx < f.values.size(); ++sx)
            out.weighted += f.values[sx] * W.values[sa] * phi_cell * Phi_cell;
    for (std::uint64_t sx = 0; sx < f.values.size(); ++sx)
        out.plain += f.values[sx] * phi_cell;
    return out;
}

cplx trace_pairing(const OperatorField& F, const std::vector<double>& qw) {
    if (qw.size() != F.fibers.size())
        throw ShapeError("trace_pairing: label mismatch");
    cplx acc(0);
    for (size_t i = 0; i < F.fibers.size(); ++i)
        acc += F.fibers[i].trace() * qw[i] * F.labels->weight(i);
    return acc;
}

cplx weight_symbol_eval(const WeightFunction& W, const std::vector<double>& a) {
    W.check_normalized();
    if (static_cast<int>(a.size()) != W.m)
        throw ShapeError("weight_symbol_eval: wedge vector size mismatch");
    cplx acc(0);
    for (std::uint64_t i = 0; i < W.values.size(); ++i) {
        auto Phi = W.Phi_at(i);
        double phase = 0;
        for (int k = 0; k < W.m; ++k) phase += Phi[k] * a[k];
        acc += W.values[i] * std::polar(1.0, phase);
    }
    return acc * W.cell();
}

} // namespace ncqft
