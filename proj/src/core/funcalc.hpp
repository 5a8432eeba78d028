#pragma once

#include "core/quantize.hpp"
#include "core/zomega.hpp"

// Functions of operator fields, the convolution-power formula for the symbol
// of exp(itF), the N-step chain kernel and its closed form, the action
// functional S_W in both routes, and the small-eps classical limit.

namespace ncqft {

// k: R -> C in one of the admissible representations: closed-form (identity,
// polynomial, exp(it s)) or khat samples with k(s) = sum_j e^{i t_j s}
// khat_j dt.
struct ScalarFunctionSpec {
    enum class Kind { Identity, Polynomial, ExpIt, KhatTable };
    Kind kind = Kind::Identity;
    double t = 0.0;                // ExpIt parameter
    std::vector<cplx> poly;       // ascending coefficients
    std::vector<double> tgrid;    // KhatTable sample points
    std::vector<cplx> khat;       // KhatTable values (uniform grid)

    static ScalarFunctionSpec identity() { return {}; }
    static ScalarFunctionSpec exp_it(double t) {
        ScalarFunctionSpec k;
        k.kind = Kind::ExpIt;
        k.t = t;
        return k;
    }
    static ScalarFunctionSpec polynomial(std::vector<cplx> coeffs) {
        ScalarFunctionSpec k;
        k.kind = Kind::Polynomial;
        k.poly = std::move(coeffs);
        return k;
    }
    static ScalarFunctionSpec khat_table(std::vector<double> tgrid, std::vector<cplx> khat);

    bool entire() const { return kind != Kind::KhatTable; }
    cplx eval(double s) const;
    // max reconstruction error of a KhatTable against a reference closure
    double reconstruction_error(const ScalarFunctionSpec& reference, double s_max,
                                int samples = 101) const;
};

// fiberwise spectral calculus; Hermitian fibers (within hermitian_tol) use the
// eigenvalue route, entire k falls back to series on general fibers
OperatorField apply_function_fiberwise(const ScalarFunctionSpec& k, const OperatorField& F,
                                       double hermitian_tol = 1e-8);

// symbol of exp(it Q f); eps = 0 degenerates to the pointwise exponential
DualField symbol_exp_direct(const ScalarField& f, double t, const GroupParams& p,
                            const LatticeSpec& spec, const LabelSetPtr& L);

// fourier0 of the N-fold twisted-convolution power of (delta + (it/N) f-check)
DualField symbol_exp_convpower(const ScalarField& f, double t, int N,
                               const GroupParams& p, const LatticeSpec& spec);

// --- N-step chain kernel (finite model) ---------------------------------------

struct DualPointZ {
    std::vector<long long> phi;
    std::vector<long long> Phi;
};

// defining chain sum over G^N (budget-guarded)
cplx kernel_psiN_direct(const DualPointZ& target, const std::vector<DualPointZ>& chain,
                        const GroupParams& p, std::uint64_t budget = 20'000'000);
// closed form: product of deltas in Phi times the Y-chain phase sum
cplx kernel_psiN_simplified(const DualPointZ& target, const std::vector<DualPointZ>& chain,
                            const GroupParams& p, std::uint64_t budget = 20'000'000);

struct PsiCompareReport {
    std::uint64_t tuples = 0;
    std::uint64_t mismatches = 0;
    std::uint64_t nonzero = 0;
    bool exact() const { return mismatches == 0; }
};
// evaluates the defining sum for every argument tuple at once (exact
// root-of-unity counts) and compares against the closed form, exhaustively
PsiCompareReport kernel_psiN_exhaustive_compare(const GroupParams& p, int N,
                                                std::uint64_t budget = 200'000'000);

// --- action functional ----------------------------------------------------------

// trace route: sum_labels tr(kF) * QW * plancherel weight
cplx action_SW(const OperatorField& kF, const std::vector<double>& qw);

enum class ChainMode { Auto, Exhaustive, Transfer, MonteCarlo };

struct ChainResult {
    cplx value{0, 0};
    double std_error = 0; // Monte Carlo only
    ChainMode mode = ChainMode::Transfer;
};

// the reduced N-step formula: phi-chain factors (1 + it f/N) coupled to the
// (N-1)-fold Y-chain with the w((eps/2) sum Y_j ^ Y_{j-1}) weight; evaluated
// exactly by transfer-matrix contraction, exhaustively for tiny chains, or by
// Monte Carlo with a reported standard error
ChainResult action_SW_discretized(const ScalarField& f, double t, int N,
                                  const WeightFunction& W, const GroupParams& p,
                                  const LatticeSpec& spec,
                                  ChainMode mode = ChainMode::Auto,
                                  std::uint64_t budget = 20'000'000,
                                  std::uint64_t mc_samples = 20000,
                                  std::uint64_t seed = 1);

// sum_phi exp(it f(phi)) d^d phi/(2 pi)^d
cplx classical_limit_reference(const ScalarField& f, double t);

// --- multivariate (Weyl) calculus -------------------------------------------------

struct MultiFunctionSpec {
    enum class Kind { Coordinate, ExpIt, Product, KhatTable };
    Kind kind = Kind::Coordinate;
    int coord = 0;                             // Coordinate: k(x) = x_coord
    std::vector<double> tvec;                  // ExpIt: exp(i sum t_i x_i)
    std::vector<std::vector<double>> tpoints;  // KhatTable sample points
    std::vector<cplx> tweights;                // KhatTable weights (include cells)

    cplx eval(const std::vector<double>& x) const;
};

// symmetric (Weyl) function of several operator fields; exponentials need no
// ordering choice, tables integrate over them, and commuting fibers reduce to
// joint spectral calculus
OperatorField vector_weyl_apply(const MultiFunctionSpec& k,
                                const std::vector<OperatorField>& fields,
                                double hermitian_tol = 1e-8);

} // namespace ncqft
