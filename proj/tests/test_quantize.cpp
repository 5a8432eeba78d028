#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/quantize.hpp"
#include "core/rng.hpp"

using namespace ncqft;

namespace {

GroupParams finite_params(int n, double eps = 1.0) {
    GroupParams p;
    p.d = 2;
    p.n = n;
    p.epsilon = eps;
    p.model = Model::FiniteCyclic;
    return p;
}

ScalarField random_scalar(const LatticeSpec& spec, int d, std::uint64_t seed,
                          bool real = false) {
    ScalarField f(spec, d);
    CounterRng rng(seed);
    for (auto& v : f.values) v = real ? cplx(rng.normal(), 0) : cplx(rng.normal(), rng.normal());
    return f;
}

DualField random_dual(const LatticeSpec& spec, std::uint64_t seed) {
    DualField u(spec);
    CounterRng rng(seed);
    for (auto& v : u.values) v = cplx(rng.normal(), rng.normal());
    return u;
}

cplx dual_inner(const DualField& a, const DualField& b) {
    cplx acc(0);
    for (size_t i = 0; i < a.values.size(); ++i)
        acc += a.values[i] * std::conj(b.values[i]);
    return acc * a.cell();
}

} // namespace

TEST_CASE("Q(1_0) = 1_eps, Q(0) = 0") {
    auto p = finite_params(5);
    auto spec = lattice_for(p);
    auto L = make_label_set(p, spec, RepSpec{});
    DualField ones(spec);
    for (auto& v : ones.values) v = 1.0;
    auto F = quantize(ones, L);
    for (const auto& fib : F.fibers) {
        auto id = Eigen::MatrixXcd::Identity(fib.rows(), fib.cols());
        CHECK((fib - id).cwiseAbs().maxCoeff() < 1e-12);
    }

    auto Z = quantize(DualField(spec), L);
    for (const auto& fib : Z.fibers) CHECK(fib.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dequantize inverts quantize; 1_eps maps back to 1_0") {
    auto p = finite_params(3);
    auto spec = lattice_for(p);
    auto L = make_label_set(p, spec, RepSpec{});

    auto back = dequantize(OperatorField::identity(L));
    for (const auto& v : back.values) CHECK(std::abs(v - cplx(1.0)) < 1e-12);

    for (std::uint64_t seed = 3; seed < 8; ++seed) {
        auto u = random_dual(spec, seed);
        auto round = dequantize(quantize(u, L));
        double worst = 0;
        for (size_t i = 0; i < u.values.size(); ++i)
            worst = std::max(worst, std::abs(round.values[i] - u.values[i]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("quantization preserves inner products") {
    auto p = finite_params(3);
    auto spec = lattice_for(p);
    auto L = make_label_set(p, spec, RepSpec{});
    for (std::uint64_t seed = 40; seed < 50; ++seed) {
        auto u = random_dual(spec, seed);
        auto v = random_dual(spec, seed + 1000);
        cplx lhs = hs_inner(quantize(u, L), quantize(v, L));
        cplx rhs = dual_inner(u, v);
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(rhs) + 1e-12);
    }
}

TEST_CASE("central scalar fiber dequantizes to the matching character function") {
    auto p = finite_params(3);
    auto spec = lattice_for(p);
    auto L = make_label_set(p, spec, RepSpec{});
    // delta at a central element: fourierE gives scalar fibers exp(i Phi(A0)) I
    LatticeField g(spec);
    MultiIndex mi{3, 3};
    g.values[mi.flatten({0, 0, 1})] = 1.0;
    auto F = fourierE(g, L);
    auto symbol = dequantize(F);
    auto expected = fourier0(g);
    double worst = 0;
    for (size_t i = 0; i < symbol.values.size(); ++i)
        worst = std::max(worst, std::abs(symbol.values[i] - expected.values[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("weight families are normalized against the dP0 Phi-marginal") {
    LatticeSpec spec{9, 0.5, 3};
    auto W = gaussian_weight(spec, 1, 2.0);
    CHECK(std::abs(W.total() - 1.0) < 1e-12);
    W.check_normalized();

    auto Wc = single_cell_weight(spec, 1, 4);
    CHECK(std::abs(Wc.total() - 1.0) < 1e-12);

    std::vector<double> tbl(9, 0.0);
    tbl[2] = 1.0;
    tbl[3] = 3.0;
    auto Wt = table_weight(spec, 1, tbl);
    CHECK(std::abs(Wt.total() - 1.0) < 1e-12);

    CHECK_THROWS_AS(table_weight(spec, 1, std::vector<double>(4, 1.0)), ConfigError);
    CHECK_THROWS_AS(gaussian_weight(spec, 1, -1.0), ConfigError);
}

TEST_CASE("quantized weight: scalar, real, self-adjoint fibers; finite oracle W(Phi)") {
    auto p = finite_params(5);
    auto spec = lattice_for(p);
    auto L = make_label_set(p, spec, RepSpec{});
    auto W = gaussian_weight(spec, 1, 1.3);
    auto qw = quantize_weight(W, L);
    REQUIRE(qw.size() == L->size());
    // finite-model oracle: the scalar equals W at the label's Phi cell
    for (size_t i = 0; i < L->size(); ++i) {
        std::uint64_t cell =
            L->labels[i].character ? 0 : static_cast<std::uint64_t>(L->labels[i].zPhi[0]);
        CHECK(std::abs(qw[i] - W.values[cell]) < 1e-10 * (1.0 + std::abs(W.values[cell])));
    }

    // single-cell weight quantizes to the indicator of that label's Phi
    auto Wc = single_cell_weight(spec, 1, 2);
    auto qwc = quantize_weight(Wc, L);
    for (size_t i = 0; i < L->size(); ++i) {
        double expect = L->labels[i].character ? 0.0
                        : (L->labels[i].zPhi[0] == 2 ? 1.0 / Wc.cell() : 0.0);
        CHECK(std::abs(qwc[i] - expect) < 1e-9);
    }
}

TEST_CASE("phi-dependent dual function fails the scalar-fiber check") {
    auto p = finite_params(3);
    auto spec = lattice_for(p);
    auto L = make_label_set(p, spec, RepSpec{});
    auto u = random_dual(spec, 77);
    CHECK_THROWS_AS(scalar_fiber_values(quantize(u, L)), CalculusError);
}

TEST_CASE("weighted integral: two routes agree; box volume; odd symmetry") {
    LatticeSpec spec{5, 1.0, 3};
    auto W = gaussian_weight(spec, 1, 1.0);

    // f = 1: both routes give the dual phi-grid volume
    ScalarField one(spec, 2);
    for (auto& v : one.values) v = 1.0;
    auto r = weighted_integral(one, W);
    CHECK(std::abs(r.weighted - r.plain) < 1e-12);
    CHECK(r.plain.real() == doctest::Approx(1.0)); // n^d * (1/(n h))^d = h^-d

    // random fields: identity between the sums
    for (std::uint64_t seed = 5; seed < 15; ++seed) {
        ScalarField f = random_scalar(spec, 2, seed);
        auto rr = weighted_integral(f, W);
        CHECK(std::abs(rr.weighted - rr.plain) < 1e-10 * (1.0 + std::abs(rr.plain)));
    }

    // odd field on the symmetric grid integrates to zero
    ScalarField odd(spec, 2);
    for (std::uint64_t i = 0; i < odd.values.size(); ++i)
        odd.values[i] = odd.phi_at(i)[0];
    auto ro = weighted_integral(odd, W);
    CHECK(std::abs(ro.plain) < 1e-14);
    CHECK(std::abs(ro.weighted) < 1e-14);
}

TEST_CASE("trace pairing reproduces the weighted integral (finite, exact)") {
    auto p = finite_params(5);
    auto spec = lattice_for(p);
    auto L = make_label_set(p, spec, RepSpec{});
    auto W = gaussian_weight(spec, 1, 1.1);
    auto qw = quantize_weight(W, L);

    for (std::uint64_t seed = 60; seed < 66; ++seed) {
        ScalarField f = random_scalar(spec, 2, seed);
        auto F = quantize(lift(f, spec), L);
        cplx lhs = trace_pairing(F, qw);
        auto r = weighted_integral(f, W);
        CHECK(std::abs(lhs - r.weighted) < 1e-10 * (1.0 + std::abs(r.weighted)));

        // QW = 1: trace pairing equals the dP0 integral of the lift
        std::vector<double> ones(L->size(), 1.0);
        cplx tr1 = trace_pairing(F, ones);
        cplx dp0(0);
        auto u = lift(f, spec);
        for (const auto& v : u.values) dp0 += v;
        dp0 *= u.cell();
        CHECK(std::abs(tr1 - dp0) < 1e-10 * (1.0 + std::abs(dp0)));
    }

    cplx zero = trace_pairing(OperatorField::zeros(L), qw);
    CHECK(std::abs(zero) == 0.0);
}

TEST_CASE("weight symbol: w(0) = 1, modulus bound, conjugate symmetry") {
    LatticeSpec spec{9, 0.8, 3};
    auto W = gaussian_weight(spec, 1, 1.7);
    CHECK(std::abs(weight_symbol_eval(W, {0.0}) - cplx(1.0)) < 1e-12);
    CounterRng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        double a = rng.uniform(-3.0, 3.0);
        auto wa = weight_symbol_eval(W, {a});
        CHECK(std::abs(wa) <= 1.0 + 1e-12);
        auto wm = weight_symbol_eval(W, {-a});
        CHECK(std::abs(wm - std::conj(wa)) < 1e-12);
    }
}
