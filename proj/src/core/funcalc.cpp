#include "core/funcalc.hpp"

#include <cmath>

#include "core/rng.hpp"

namespace ncqft {

namespace {

std::uint64_t pow_u64(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

std::vector<cplx> root_table(int n) {
    std::vector<cplx> w(n);
    for (int k = 0; k < n; ++k) {
        double t = kTwoPi * k / n;
        w[k] = cplx(std::cos(t), std::sin(t));
    }
    return w;
}

// exp(A) by scaling and squaring with a plain series; adequate for the small
// fibers used here
Eigen::MatrixXcd exp_series(const Eigen::MatrixXcd& A) {
    const double nrm = A.cwiseAbs().maxCoeff() * A.rows();
    int squarings = 0;
    double scale = 1.0;
    while (nrm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    Eigen::MatrixXcd B = A * scale;
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(A.rows(), A.cols());
    Eigen::MatrixXcd acc = term;
    for (int k = 1; k < 40; ++k) {
        term = term * B / static_cast<double>(k);
        acc += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) acc = acc * acc;
    return acc;
}

Eigen::MatrixXcd poly_eval(const std::vector<cplx>& coeffs, const Eigen::MatrixXcd& A) {
    Eigen::MatrixXcd acc =
        Eigen::MatrixXcd::Zero(A.rows(), A.cols());
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * A + *it * Eigen::MatrixXcd::Identity(A.rows(), A.cols());
    return acc;
}

bool nearly_hermitian(const Eigen::MatrixXcd& A, double tol) {
    return (A - A.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

} // namespace

ScalarFunctionSpec ScalarFunctionSpec::khat_table(std::vector<double> tgrid,
                                                  std::vector<cplx> khat) {
    if (tgrid.size() != khat.size() || tgrid.size() < 2)
        throw CalculusError("khat table needs matching grids of at least two samples");
    ScalarFunctionSpec k;
    k.kind = Kind::KhatTable;
    k.tgrid = std::move(tgrid);
    k.khat = std::move(khat);
    return k;
}

cplx ScalarFunctionSpec::eval(double s) const {
    switch (kind) {
        case Kind::Identity:
            return s;
        case Kind::Polynomial: {
            cplx acc(0);
            for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * s + *it;
            return acc;
        }
        case Kind::ExpIt:
            return std::polar(1.0, t * s);
        case Kind::KhatTable: {
            const double dt = tgrid[1] - tgrid[0];
            cplx acc(0);
            for (size_t j = 0; j < tgrid.size(); ++j)
                acc += std::polar(1.0, tgrid[j] * s) * khat[j];
            return acc * dt;
        }
    }
    return cplx(0);
}

double ScalarFunctionSpec::reconstruction_error(const ScalarFunctionSpec& reference,
                                                double s_max, int samples) const {
    double worst = 0;
    for (int i = 0; i < samples; ++i) {
        double s = -s_max + 2.0 * s_max * i / (samples - 1);
        worst = std::max(worst, std::abs(eval(s) - reference.eval(s)));
    }
    return worst;
}

OperatorField apply_function_fiberwise(const ScalarFunctionSpec& k, const OperatorField& F,
                                       double hermitian_tol) {
    OperatorField out = OperatorField::zeros(F.labels);
    for (size_t i = 0; i < F.fibers.size(); ++i) {
        const auto& fib = F.fibers[i];
        if (nearly_hermitian(fib, hermitian_tol)) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fib);
            Eigen::VectorXcd vals(fib.rows());
            for (int j = 0; j < fib.rows(); ++j) vals[j] = k.eval(es.eigenvalues()[j]);
            out.fibers[i] =
                es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
        } else if (k.kind == ScalarFunctionSpec::Kind::ExpIt) {
            out.fibers[i] = exp_series(cplx(0, k.t) * fib);
        } else if (k.kind == ScalarFunctionSpec::Kind::Polynomial) {
            out.fibers[i] = poly_eval(k.poly, fib);
        } else if (k.kind == ScalarFunctionSpec::Kind::Identity) {
            out.fibers[i] = fib;
        } else {
            throw CalculusError("non-Hermitian fiber with a non-entire function");
        }
    }
    return out;
}

DualField symbol_exp_direct(const ScalarField& f, double t, const GroupParams& p,
                            const LatticeSpec& spec, const LabelSetPtr& L) {
    if (p.epsilon == 0.0) {
        // commutative calculus: pointwise exponential, lifted
        ScalarField e = f;
        for (auto& v : e.values) {
            if (std::abs(v.imag()) > 1e-10)
                throw CalculusError("exp(it f) route needs a real scalar field");
            v = std::polar(1.0, t * v.real());
        }
        return lift(e, spec);
    }
    if (!L) throw ShapeError("symbol_exp_direct: missing label set");
    OperatorField F = quantize(lift(f, spec), L);
    return dequantize(apply_function_fiberwise(ScalarFunctionSpec::exp_it(t), F));
}

DualField symbol_exp_convpower(const ScalarField& f, double t, int N,
                               const GroupParams& p, const LatticeSpec& spec) {
    if (N < 1) throw ConfigError("funcalc.N", "convolution power needs N >= 1");
    LatticeField fcheck = fourier0_inv(lift(f, spec));
    LatticeField g = delta_identity(spec);
    const cplx s(0.0, t / N);
    for (size_t i = 0; i < g.values.size(); ++i) g.values[i] += s * fcheck.values[i];
    LatticeField acc = g;
    for (int k = 1; k < N; ++k) acc = twisted_convolve(acc, g, p);
    return fourier0(acc);
}

// --- chain kernel -----------------------------------------------------------------

namespace {
void require_finite(const GroupParams& p, const char* who) {
    if (p.model != Model::FiniteCyclic)
        throw ConfigError("group.model", std::string(who) + " is defined on the finite model");
}
} // namespace

cplx kernel_psiN_direct(const DualPointZ& target, const std::vector<DualPointZ>& chain,
                        const GroupParams& p, std::uint64_t budget) {
    require_finite(p, "kernel_psiN_direct");
    const int N = static_cast<int>(chain.size());
    if (N < 1) throw ShapeError("kernel_psiN_direct: empty chain");
    const std::uint64_t sites = z_element_count(p);
    std::uint64_t total = 1;
    for (int j = 0; j < N; ++j) {
        if (total > budget / sites + 1) throw BudgetError("chain sum exceeds budget");
        total *= sites;
    }
    if (total > budget) throw BudgetError("chain sum exceeds budget");
    const long long n = p.n;
    CycloInt acc(p.n);
    std::vector<std::uint64_t> idx(N, 0);
    std::vector<ZElement> els(N);
    for (int j = 0; j < N; ++j) els[j] = z_element_at(0, p);
    for (std::uint64_t code = 0; code < total; ++code) {
        // phase = phi(Y_N) + Phi(B_N) - sum_j [phi_j(X_j) + Phi_j(A_j)]
        ZElement prod = identity_z(p);
        long long phase = 0;
        for (int j = 0; j < N; ++j) {
            const ZElement& gj = els[j];
            prod = compose(prod, gj, p);
            for (int i = 0; i < p.d; ++i)
                phase = mod_n(phase - chain[j].phi[i] * gj.x[i], n);
            for (int i = 0; i < p.m(); ++i)
                phase = mod_n(phase - chain[j].Phi[i] * gj.a[i], n);
        }
        for (int i = 0; i < p.d; ++i) phase = mod_n(phase + target.phi[i] * prod.x[i], n);
        for (int i = 0; i < p.m(); ++i) phase = mod_n(phase + target.Phi[i] * prod.a[i], n);
        acc.add_unit(phase);
        // odometer
        int ax = 0;
        while (ax < N) {
            if (++idx[ax] == sites) {
                idx[ax] = 0;
                els[ax] = z_element_at(0, p);
                ++ax;
            } else {
                els[ax] = z_element_at(idx[ax], p);
                break;
            }
        }
    }
    return acc.to_complex();
}

cplx kernel_psiN_simplified(const DualPointZ& target, const std::vector<DualPointZ>& chain,
                            const GroupParams& p, std::uint64_t budget) {
    require_finite(p, "kernel_psiN_simplified");
    const int N = static_cast<int>(chain.size());
    if (N < 1) throw ShapeError("kernel_psiN_simplified: empty chain");
    const long long n = p.n;
    // delta factors: every Phi_j must match the target Phi mod n
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < p.m(); ++i)
            if (mod_n(chain[j].Phi[i] - target.Phi[i], n) != 0) return cplx(0);
    std::uint64_t ybase = 1;
    for (int i = 0; i < p.d; ++i) ybase *= static_cast<std::uint64_t>(n);
    std::uint64_t total = 1;
    for (int j = 0; j < N; ++j) {
        if (total > budget / ybase + 1) throw BudgetError("chain sum exceeds budget");
        total *= ybase;
    }
    if (total > budget) throw BudgetError("chain sum exceeds budget");
    const long long kappa = mod_n(p.eps_int() * p.inv2(), n);
    MultiIndex ymi{p.n, p.d};
    CycloInt acc(p.n);
    std::vector<std::vector<long long>> ys(N + 1, std::vector<long long>(p.d, 0));
    std::vector<std::uint64_t> idx(N, 0);
    for (std::uint64_t code = 0; code < total; ++code) {
        long long phase = 0;
        for (int j = 1; j <= N; ++j) {
            // (phi_{j+1} - phi_j)(Y_j), with phi_{N+1} the target
            const auto& cur = ys[j];
            const auto& nxt = (j == N) ? target.phi : chain[j].phi;
            const auto& now = chain[j - 1].phi;
            for (int i = 0; i < p.d; ++i)
                phase = mod_n(phase + (nxt[i] - now[i]) * cur[i], n);
            // kappa Phi(Y_{j-1} ^ Y_j): the forward-ordered chain product
            // left-inverts in the telescoping substitution
            auto w = wedge(ys[j - 1], ys[j]);
            phase = mod_n(phase + kappa * skew_pair_mod(target.Phi, w, n), n);
        }
        acc.add_unit(phase);
        int ax = 0;
        while (ax < N) {
            if (++idx[ax] == ybase) {
                idx[ax] = 0;
                std::fill(ys[ax + 1].begin(), ys[ax + 1].end(), 0);
                ++ax;
            } else {
                ys[ax + 1] = ymi.unflatten(idx[ax]);
                break;
            }
        }
    }
    // B-sums contribute n^m per step
    double scale = std::pow(static_cast<double>(n), p.m() * N);
    cplx v = acc.to_complex();
    return v * scale;
}

PsiCompareReport kernel_psiN_exhaustive_compare(const GroupParams& p, int N,
                                                std::uint64_t budget) {
    require_finite(p, "kernel_psiN_exhaustive_compare");
    const int n = p.n;
    const int D = p.dim();
    const int axes = D * (N + 1);
    const std::uint64_t entries = pow_u64(static_cast<std::uint64_t>(n), axes);
    if (entries * n > budget) throw BudgetError("exhaustive kernel table exceeds budget");
    // counts[tuple * n + k] = number of chains contributing omega^k
    std::vector<long long> counts(entries * static_cast<std::uint64_t>(n), 0);

    // graph of the chain -> (chain, product) map
    const std::uint64_t sites = z_element_count(p);
    const std::uint64_t chains = pow_u64(sites, N);
    {
        std::vector<std::uint64_t> idx(N, 0);
        std::vector<ZElement> els(N, z_element_at(0, p));
        for (std::uint64_t code = 0; code < chains; ++code) {
            ZElement prod = identity_z(p);
            std::uint64_t flat = 0, stride = 1;
            for (int j = 0; j < N; ++j) {
                prod = compose(prod, els[j], p);
                flat += idx[j] * stride;
                stride *= sites;
            }
            flat += z_element_index(prod, p) * stride;
            counts[flat * n] += 1;
            int ax = 0;
            while (ax < N) {
                if (++idx[ax] == sites) {
                    idx[ax] = 0;
                    els[ax] = z_element_at(0, p);
                    ++ax;
                } else {
                    els[ax] = z_element_at(idx[ax], p);
                    break;
                }
            }
        }
    }

    // exact DFT over Z_n per axis: chain axes carry the conjugate character,
    // the product axes the direct one
    {
        std::vector<long long> line(static_cast<size_t>(n) * n);
        std::uint64_t stride = 1;
        for (int ax = 0; ax < axes; ++ax) {
            const bool conj = ax < D * N;
            const std::uint64_t block = stride * static_cast<std::uint64_t>(n);
            for (std::uint64_t base = 0; base < entries; base += block) {
                for (std::uint64_t off = 0; off < stride; ++off) {
                    for (int j = 0; j < n; ++j) {
                        const std::uint64_t src = (base + off + j * stride) *
                                                  static_cast<std::uint64_t>(n);
                        for (int k = 0; k < n; ++k)
                            line[static_cast<size_t>(j) * n + k] = counts[src + k];
                    }
                    for (std::uint64_t cell = 0; cell < static_cast<std::uint64_t>(n);
                         ++cell) {
                        const std::uint64_t dst =
                            (base + off + cell * stride) * static_cast<std::uint64_t>(n);
                        for (int k = 0; k < n; ++k) counts[dst + k] = 0;
                        for (int j = 0; j < n; ++j) {
                            long long sh = (static_cast<long long>(j) * cell) % n;
                            if (conj && sh != 0) sh = n - sh;
                            for (int k = 0; k < n; ++k)
                                counts[dst + (k + sh) % n] +=
                                    line[static_cast<size_t>(j) * n + k];
                        }
                    }
                }
            }
            stride *= static_cast<std::uint64_t>(n);
        }
    }

    // closed form per tuple, exact comparison
    PsiCompareReport rep;
    rep.tuples = entries;
    const long long kappa = mod_n(p.eps_int() * p.inv2(), static_cast<long long>(n));
    MultiIndex dmi{n, D};
    MultiIndex ymi{n, p.d};
    std::uint64_t ybase = 1;
    for (int i = 0; i < p.d; ++i) ybase *= static_cast<std::uint64_t>(n);
    const std::uint64_t ytotal = pow_u64(ybase, N);
    const long long scale = static_cast<long long>(
        std::llround(std::pow(static_cast<double>(n), p.m() * N)));

    std::vector<std::vector<long long>> tup(N + 1);
    std::vector<std::uint64_t> tidx(N + 1, 0);
    for (int j = 0; j <= N; ++j) tup[j] = dmi.unflatten(0);
    for (std::uint64_t code = 0; code < entries; ++code) {
        // tuple = (dual_1 .. dual_N, target)
        CycloInt simp(n);
        bool deltas = true;
        for (int j = 0; j < N && deltas; ++j)
            for (int i = 0; i < p.m(); ++i)
                if (tup[j][p.d + i] != tup[N][p.d + i]) {
                    deltas = false;
                    break;
                }
        if (deltas) {
            std::vector<std::vector<long long>> ys(N + 1,
                                                   std::vector<long long>(p.d, 0));
            std::vector<std::uint64_t> yidx(N, 0);
            std::vector<long long> PhiT(tup[N].begin() + p.d, tup[N].end());
            for (std::uint64_t ycode = 0; ycode < ytotal; ++ycode) {
                long long phase = 0;
                for (int j = 1; j <= N; ++j) {
                    const auto& cur = ys[j];
                    const auto& nxt = tup[j]; // tup[N] is the target
                    const auto& now = tup[j - 1];
                    for (int i = 0; i < p.d; ++i)
                        phase = mod_n(phase + (nxt[i] - now[i]) * cur[i], n);
                    auto w = wedge(ys[j - 1], ys[j]);
                    phase = mod_n(phase + kappa * skew_pair_mod(PhiT, w, n), n);
                }
                simp.add_unit(phase);
                int ax = 0;
                while (ax < N) {
                    if (++yidx[ax] == ybase) {
                        yidx[ax] = 0;
                        std::fill(ys[ax + 1].begin(), ys[ax + 1].end(), 0);
                        ++ax;
                    } else {
                        ys[ax + 1] = ymi.unflatten(yidx[ax]);
                        break;
                    }
                }
            }
            simp *= scale;
            rep.nonzero += 1;
        }
        // compare against the direct table entry
        CycloInt direct(n);
        for (int k = 0; k < n; ++k)
            direct.c[k] = counts[code * static_cast<std::uint64_t>(n) + k];
        if (!direct.equals(simp)) rep.mismatches += 1;

        const std::uint64_t slot_max = pow_u64(static_cast<std::uint64_t>(n), D);
        int ax = 0;
        while (ax <= N) {
            if (++tidx[ax] == slot_max) {
                tidx[ax] = 0;
                tup[ax] = dmi.unflatten(0);
                ++ax;
            } else {
                tup[ax] = dmi.unflatten(tidx[ax]);
                break;
            }
        }
    }
    return rep;
}

// --- action functional ------------------------------------------------------------

cplx action_SW(const OperatorField& kF, const std::vector<double>& qw) {
    return trace_pairing(kF, qw);
}

namespace {

struct ChainSetup {
    int n, d, m;
    std::uint64_t P; // n^d Y/phi states
    std::vector<cplx> a;        // 1 + it f/N per phi index
    std::vector<cplx> mhat;     // sum_phi a(phi) omega^{dot(phi, delta)} * phi_cell
    double phi_cell, y_cell;
    std::vector<std::vector<long long>> coords;  // index -> integer coords
    std::vector<std::vector<long long>> scoords; // signed representatives
};

ChainSetup chain_setup(const ScalarField& f, double t, int N) {
    ChainSetup s;
    s.n = f.n;
    s.d = f.d;
    s.P = 1;
    for (int i = 0; i < f.d; ++i) s.P *= static_cast<std::uint64_t>(f.n);
    s.phi_cell = f.phi_cell();
    s.y_cell = std::pow(f.h, f.d);
    s.a.resize(s.P);
    for (std::uint64_t i = 0; i < s.P; ++i)
        s.a[i] = cplx(1.0, 0.0) + cplx(0.0, t / N) * f.values[i];
    MultiIndex mi{f.n, f.d};
    s.coords.resize(s.P);
    s.scoords.resize(s.P);
    for (std::uint64_t i = 0; i < s.P; ++i) {
        s.coords[i] = mi.unflatten(i);
        s.scoords[i] = s.coords[i];
        for (auto& c : s.scoords[i]) c = signed_rep(c, f.n);
    }
    const auto w = root_table(f.n);
    s.mhat.assign(s.P, cplx(0));
    for (std::uint64_t delta = 0; delta < s.P; ++delta) {
        cplx acc(0);
        for (std::uint64_t phi = 0; phi < s.P; ++phi) {
            long long dot = 0;
            for (int i = 0; i < f.d; ++i)
                dot = mod_n(dot + s.coords[phi][i] * s.coords[delta][i], f.n);
            acc += s.a[phi] * w[dot];
        }
        s.mhat[delta] = acc * s.phi_cell;
    }
    return s;
}

// index difference mod n, per axis
std::uint64_t index_diff(const ChainSetup& s, std::uint64_t a, std::uint64_t b) {
    std::uint64_t idx = 0, stride = 1;
    for (int i = 0; i < s.d; ++i) {
        idx += static_cast<std::uint64_t>(mod_n(s.coords[a][i] - s.coords[b][i], s.n)) *
               stride;
        stride *= static_cast<std::uint64_t>(s.n);
    }
    return idx;
}

} // namespace

cplx classical_limit_reference(const ScalarField& f, double t) {
    cplx acc(0);
    for (const auto& v : f.values) {
        if (std::abs(v.imag()) > 1e-10)
            throw CalculusError("classical limit reference needs a real field");
        acc += std::polar(1.0, t * v.real());
    }
    return acc * f.phi_cell();
}

ChainResult action_SW_discretized(const ScalarField& f, double t, int N,
                                  const WeightFunction& W, const GroupParams& p,
                                  const LatticeSpec& spec, ChainMode mode,
                                  std::uint64_t budget, std::uint64_t mc_samples,
                                  std::uint64_t seed) {
    W.check_normalized();
    if (N < 1) throw ConfigError("funcalc.N", "need N >= 1");
    if (f.n != spec.n) throw ShapeError("scalar field grid does not match the lattice");
    ChainResult out;
    ChainSetup s = chain_setup(f, t, N);

    if (N == 1) {
        // no Y variables; the weight integrates to one
        cplx acc(0);
        for (std::uint64_t i = 0; i < s.P; ++i) acc += s.a[i];
        out.value = acc * s.phi_cell;
        out.mode = mode == ChainMode::Auto ? ChainMode::Transfer : mode;
        return out;
    }

    if (mode == ChainMode::Auto) mode = ChainMode::Transfer;
    out.mode = mode;

    // twist phase exp(i kappa Phi(Y_cur ^ Y_prev)) per Phi grid point
    const bool finite = p.model == Model::FiniteCyclic;
    const long long kap_int = finite ? mod_n(p.eps_int() * p.inv2(), p.n) : 0;
    const double kap_real = 0.5 * p.epsilon;
    const auto wroot = root_table(f.n);
    const int m = W.m;
    auto twist_phase = [&](std::uint64_t Phi_idx, const std::vector<long long>& wdg) {
        if (finite) {
            MultiIndex wmi{W.n, m};
            auto q = wmi.unflatten(Phi_idx);
            long long ph = mod_n(kap_int * skew_pair_mod(q, wdg, f.n), f.n);
            return wroot[ph];
        }
        auto Phi = W.Phi_at(Phi_idx);
        double ph = 0;
        const double h2 = f.h * f.h;
        for (int i = 0; i < m; ++i) ph += Phi[i] * h2 * static_cast<double>(wdg[i]);
        return std::polar(1.0, kap_real * ph);
    };

    if (mode == ChainMode::Transfer) {
        cplx total(0);
        // wedge pairs from signed coordinates (finite phases only see them
        // mod n, continuum phases need the actual values)
        std::vector<long long> wdg_table(s.P * s.P * static_cast<std::uint64_t>(m));
        for (std::uint64_t prev = 0; prev < s.P; ++prev)
            for (std::uint64_t cur = 0; cur < s.P; ++cur) {
                auto wdg = wedge(s.scoords[cur], s.scoords[prev]);
                for (int i = 0; i < m; ++i)
                    wdg_table[(prev * s.P + cur) * m + i] = wdg[i];
            }
        std::vector<cplx> T(s.P * s.P);
        std::vector<cplx> v(s.P), u(s.P), wv(s.P), nwv(s.P);
        for (std::uint64_t i = 0; i < s.P; ++i) {
            v[i] = s.mhat[index_diff(s, 0, i)] * s.y_cell; // mhat(-Y)
            u[i] = s.mhat[i];                               // mhat(+Y)
        }
        std::vector<long long> wdg(m);
        for (std::uint64_t Pi = 0; Pi < W.values.size(); ++Pi) {
            if (W.values[Pi] == 0.0) continue;
            for (std::uint64_t prev = 0; prev < s.P; ++prev)
                for (std::uint64_t cur = 0; cur < s.P; ++cur) {
                    for (int i = 0; i < m; ++i)
                        wdg[i] = wdg_table[(prev * s.P + cur) * m + i];
                    T[prev * s.P + cur] = s.mhat[index_diff(s, prev, cur)] *
                                          twist_phase(Pi, wdg) * s.y_cell;
                }
            wv = v;
            for (int step = 2; step <= N - 1; ++step) {
                for (std::uint64_t cur = 0; cur < s.P; ++cur) {
                    cplx acc(0);
                    for (std::uint64_t prev = 0; prev < s.P; ++prev)
                        acc += wv[prev] * T[prev * s.P + cur];
                    nwv[cur] = acc;
                }
                wv.swap(nwv);
            }
            cplx SPhi(0);
            for (std::uint64_t i = 0; i < s.P; ++i) SPhi += wv[i] * u[i];
            total += W.values[Pi] * W.cell() * SPhi;
        }
        out.value = total;
        return out;
    }

    // literal chain enumeration (exhaustive or Monte Carlo)
    const auto w_of = [&](const std::vector<long long>& wdg_sum) {
        std::vector<double> arg(m);
        if (finite) {
            for (int i = 0; i < m; ++i)
                arg[i] = static_cast<double>(mod_n(kap_int * wdg_sum[i], f.n));
        } else {
            const double h2 = f.h * f.h;
            for (int i = 0; i < m; ++i)
                arg[i] = kap_real * h2 * static_cast<double>(wdg_sum[i]);
        }
        return weight_symbol_eval(W, arg);
    };
    const auto wr = root_table(f.n);
    auto integrand = [&](const std::vector<std::uint64_t>& phis,
                         const std::vector<std::uint64_t>& ys) {
        cplx val(1, 0);
        for (int j = 0; j < N; ++j) val *= s.a[phis[j]];
        long long phase = 0;
        std::vector<long long> wsum(m, 0);
        for (int j = 1; j <= N - 1; ++j) {
            // (phi_{j+1} - phi_j)(Y_j)
            for (int i = 0; i < s.d; ++i)
                phase = mod_n(phase + (s.coords[phis[j]][i] - s.coords[phis[j - 1]][i]) *
                                          s.coords[ys[j - 1]][i],
                              s.n);
            if (j >= 2) {
                auto wdg = wedge(s.scoords[ys[j - 1]], s.scoords[ys[j - 2]]);
                for (int i = 0; i < m; ++i) wsum[i] += wdg[i];
            }
        }
        return val * wr[phase] * w_of(wsum);
    };
    const double cells = std::pow(s.phi_cell, N) * std::pow(s.y_cell, N - 1);

    if (mode == ChainMode::Exhaustive) {
        const std::uint64_t total_tuples = pow_u64(s.P, 2 * N - 1);
        if (total_tuples > budget) throw BudgetError("exhaustive action sum exceeds budget");
        std::vector<std::uint64_t> phis(N, 0), ys(N - 1, 0);
        cplx acc(0);
        std::uint64_t code = 0;
        while (true) {
            acc += integrand(phis, ys);
            ++code;
            if (code == total_tuples) break;
            int ax = 0;
            bool carry = true;
            while (carry && ax < N) {
                carry = (++phis[ax] == s.P);
                if (carry) phis[ax] = 0;
                ++ax;
            }
            ax = 0;
            while (carry && ax < N - 1) {
                carry = (++ys[ax] == s.P);
                if (carry) ys[ax] = 0;
                ++ax;
            }
        }
        out.value = acc * cells;
        return out;
    }

    // Monte Carlo over uniform chains, counter-based seeding
    if (mc_samples == 0) throw ConfigError("sampler.samples", "need at least one sample");
    const double volume =
        std::pow(static_cast<double>(s.P), static_cast<double>(2 * N - 1));
    cplx sum(0);
    double sum_sq = 0;
    std::vector<std::uint64_t> phis(N), ys(N - 1);
    for (std::uint64_t k = 0; k < mc_samples; ++k) {
        CounterRng rng(seed, k);
        for (int j = 0; j < N; ++j) phis[j] = rng.uniform_index(s.P);
        for (int j = 0; j < N - 1; ++j) ys[j] = rng.uniform_index(s.P);
        cplx g = integrand(phis, ys);
        sum += g;
        sum_sq += std::norm(g);
    }
    const double M = static_cast<double>(mc_samples);
    cplx mean = sum / M;
    double var = std::max(0.0, sum_sq / M - std::norm(mean));
    out.value = mean * volume * cells;
    out.std_error = std::sqrt(var / M) * volume * cells;
    return out;
}

// --- multivariate calculus -----------------------------------------------------------

cplx MultiFunctionSpec::eval(const std::vector<double>& x) const {
    switch (kind) {
        case Kind::Coordinate:
            return x[coord];
        case Kind::ExpIt: {
            double ph = 0;
            for (size_t i = 0; i < tvec.size(); ++i) ph += tvec[i] * x[i];
            return std::polar(1.0, ph);
        }
        case Kind::Product: {
            cplx acc(1, 0);
            for (double v : x) acc *= v;
            return acc;
        }
        case Kind::KhatTable: {
            cplx acc(0);
            for (size_t s = 0; s < tpoints.size(); ++s) {
                double ph = 0;
                for (size_t i = 0; i < x.size(); ++i) ph += tpoints[s][i] * x[i];
                acc += tweights[s] * std::polar(1.0, ph);
            }
            return acc;
        }
    }
    return cplx(0);
}

OperatorField vector_weyl_apply(const MultiFunctionSpec& k,
                                const std::vector<OperatorField>& fields,
                                double hermitian_tol) {
    if (fields.empty()) throw ShapeError("vector_weyl_apply: no fields");
    for (size_t i = 1; i < fields.size(); ++i)
        if (fields[i].labels != fields[0].labels)
            throw ShapeError("vector_weyl_apply: fields carry different label sets");
    for (const auto& F : fields)
        for (const auto& fib : F.fibers)
            if (!nearly_hermitian(fib, hermitian_tol))
                throw CalculusError("vector_weyl_apply needs Hermitian fibers");

    if (k.kind == MultiFunctionSpec::Kind::Coordinate) return fields.at(k.coord);

    OperatorField out = OperatorField::zeros(fields[0].labels);
    const size_t nf = fields.size();
    for (size_t li = 0; li < out.fibers.size(); ++li) {
        const auto dim = fields[0].fibers[li].rows();
        if (k.kind == MultiFunctionSpec::Kind::ExpIt ||
            k.kind == MultiFunctionSpec::Kind::KhatTable) {
            auto weyl_exp = [&](const std::vector<double>& tv) {
                Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
                for (size_t i = 0; i < nf; ++i) H += tv[i] * fields[i].fibers[li];
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
                Eigen::VectorXcd ph(dim);
                for (int j = 0; j < dim; ++j) ph[j] = std::polar(1.0, es.eigenvalues()[j]);
                return Eigen::MatrixXcd(es.eigenvectors() * ph.asDiagonal() *
                                        es.eigenvectors().adjoint());
            };
            if (k.kind == MultiFunctionSpec::Kind::ExpIt) {
                out.fibers[li] = weyl_exp(k.tvec);
            } else {
                Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
                for (size_t s = 0; s < k.tpoints.size(); ++s)
                    acc += k.tweights[s] * weyl_exp(k.tpoints[s]);
                out.fibers[li] = acc;
            }
        } else {
            // commuting fibers: joint spectral calculus through a generic
            // combination
            for (size_t i = 0; i < nf; ++i)
                for (size_t j = i + 1; j < nf; ++j) {
                    Eigen::MatrixXcd comm = fields[i].fibers[li] * fields[j].fibers[li] -
                                            fields[j].fibers[li] * fields[i].fibers[li];
                    if (comm.cwiseAbs().maxCoeff() > 1e-8)
                        throw CalculusError(
                            "joint spectral calculus needs commuting fibers");
                }
            CounterRng rng(0xC0FFEE, li);
            Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(dim, dim);
            for (size_t i = 0; i < nf; ++i) R += rng.uniform(0.5, 1.5) * fields[i].fibers[li];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(R);
            const auto& U = es.eigenvectors();
            Eigen::VectorXcd vals(dim);
            for (int j = 0; j < dim; ++j) {
                std::vector<double> x(nf);
                for (size_t i = 0; i < nf; ++i) {
                    cplx lam = (U.col(j).adjoint() * fields[i].fibers[li] * U.col(j))(0);
                    x[i] = lam.real();
                }
                vals[j] = k.eval(x);
            }
            out.fibers[li] = U * vals.asDiagonal() * U.adjoint();
        }
    }
    return out;
}

} // namespace ncqft
