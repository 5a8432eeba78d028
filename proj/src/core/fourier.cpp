#include "core/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ncqft {

namespace {

// nth roots of unity, omega^k for k in [0, n)
std::vector<cplx> root_table(int n) {
    std::vector<cplx> w(n);
    for (int k = 0; k < n; ++k) {
        double t = kTwoPi * k / n;
        w[k] = cplx(std::cos(t), std::sin(t));
    }
    return w;
}

// one separable DFT pass over every axis; sign = +1 forward characters
void dft_all_axes(std::vector<cplx>& v, int n, int axes, int sign) {
    const auto w = root_table(n);
    std::vector<cplx> line(n), out(n);
    std::uint64_t stride = 1;
    for (int ax = 0; ax < axes; ++ax) {
        const std::uint64_t block = stride * n;
        const std::uint64_t total = v.size();
        for (std::uint64_t base = 0; base < total; base += block) {
            for (std::uint64_t off = 0; off < stride; ++off) {
                for (int j = 0; j < n; ++j) line[j] = v[base + off + j * stride];
                for (int k = 0; k < n; ++k) {
                    cplx acc(0);
                    for (int j = 0; j < n; ++j) {
                        int ph = static_cast<int>((static_cast<long long>(j) * k) % n);
                        if (sign < 0 && ph != 0) ph = n - ph;
                        acc += line[j] * w[ph];
                    }
                    out[k] = acc;
                }
                for (int k = 0; k < n; ++k) v[base + off + k * stride] = out[k];
            }
        }
        stride *= n;
    }
}

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

long long mod_pow(long long b, long long e, long long p) {
    long long r = 1;
    b = mod_n(b, p);
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

long long mod_inv(long long a, long long p) { return mod_pow(a, p - 2, p); }

int dim_from_wedge(size_t m) {
    int d = static_cast<int>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(m))) / 2.0 + 0.5);
    if (static_cast<size_t>(d) * (d - 1) / 2 != m)
        throw ShapeError("wedge component count is not d(d-1)/2 for any d");
    return d;
}

// index of pair (i, j), i < j, in lexicographic order
int pair_index(int i, int j, int d) {
    int idx = 0;
    for (int a = 0; a < i; ++a) idx += d - 1 - a;
    return idx + (j - i - 1);
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// truncated Hermite-basis position and momentum operators, [Q, P] = i
void hermite_qp(int modes, Eigen::MatrixXcd& Q, Eigen::MatrixXcd& P) {
    Q = Eigen::MatrixXcd::Zero(modes, modes);
    P = Eigen::MatrixXcd::Zero(modes, modes);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j + 1 < modes; ++j) {
        double c = std::sqrt(static_cast<double>(j + 1)) * inv_sqrt2;
        Q(j, j + 1) = c;
        Q(j + 1, j) = c;
        P(j, j + 1) = cplx(0, -c);
        P(j + 1, j) = cplx(0, c);
    }
}

struct DarbouxReal {
    Eigen::MatrixXd basis;  // columns u_1..u_k, v_1..v_k
    std::vector<double> mu; // Phi(u_i, v_i) > 0
};

// Pivoted skew factorization: repeatedly take the largest remaining entry as
// the (u, v) pair and clear its row/column from the rest of the basis.
DarbouxReal darboux_real(const Eigen::MatrixXd& M) {
    const int d = static_cast<int>(M.rows());
    if (d % 2 != 0) throw RepresentationError("symplectic label needs even dimension");
    std::vector<Eigen::VectorXd> work;
    for (int i = 0; i < d; ++i) work.push_back(Eigen::VectorXd::Unit(d, i));
    auto form = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return a.dot(M * b);
    };
    DarbouxReal out;
    std::vector<Eigen::VectorXd> us, vs;
    while (!work.empty()) {
        size_t bi = 0, bj = 1;
        double best = 0;
        for (size_t i = 0; i < work.size(); ++i)
            for (size_t j = i + 1; j < work.size(); ++j) {
                double v = std::abs(form(work[i], work[j]));
                if (v > best) { best = v; bi = i; bj = j; }
            }
        if (best < 1e-12) throw RepresentationError("degenerate skew form in Darboux step");
        Eigen::VectorXd u = work[bi], v = work[bj];
        double muv = form(u, v);
        if (muv < 0) { std::swap(u, v); muv = -muv; }
        std::vector<Eigen::VectorXd> rest;
        for (size_t i = 0; i < work.size(); ++i) {
            if (i == bi || i == bj) continue;
            Eigen::VectorXd w = work[i];
            w -= (form(w, v) / muv) * u;
            w += (form(w, u) / muv) * v;
            rest.push_back(w);
        }
        us.push_back(u);
        vs.push_back(v);
        out.mu.push_back(muv);
        work = std::move(rest);
    }
    const int k = static_cast<int>(us.size());
    out.basis.resize(d, d);
    for (int i = 0; i < k; ++i) {
        out.basis.col(i) = us[i];
        out.basis.col(k + i) = vs[i];
    }
    return out;
}

struct DarbouxMod {
    // inverse coordinate matrix: coords = Cinv * X mod p, first k entries s,
    // last k entries r (with every Phi(u_i, v_i) normalized to 1)
    std::vector<std::vector<long long>> cinv;
    int k = 0;
};

DarbouxMod darboux_mod(const std::vector<long long>& comps, int d, long long p) {
    if (d % 2 != 0) throw RepresentationError("symplectic label needs even dimension");
    // skew matrix entries mod p
    std::vector<std::vector<long long>> M(d, std::vector<long long>(d, 0));
    {
        int idx = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j, ++idx) {
                M[i][j] = mod_n(comps[idx], p);
                M[j][i] = mod_n(-comps[idx], p);
            }
    }
    std::vector<std::vector<long long>> work;
    for (int i = 0; i < d; ++i) {
        std::vector<long long> e(d, 0);
        e[i] = 1;
        work.push_back(e);
    }
    auto form = [&](const std::vector<long long>& a, const std::vector<long long>& b) {
        long long s = 0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                s = mod_n(s + mod_n(a[i] * M[i][j] % p * b[j], p), p);
        return s;
    };
    std::vector<std::vector<long long>> us, vs;
    while (!work.empty()) {
        long long muv = 0;
        size_t bi = 0, bj = 0;
        for (size_t i = 0; i < work.size() && muv == 0; ++i)
            for (size_t j = i + 1; j < work.size() && muv == 0; ++j) {
                long long v = form(work[i], work[j]);
                if (v != 0) { muv = v; bi = i; bj = j; }
            }
        if (muv == 0) throw RepresentationError("degenerate skew form mod p");
        std::vector<long long> u = work[bi], v = work[bj];
        // normalize Phi(u, v) = 1
        long long inv = mod_inv(muv, p);
        for (auto& c : v) c = mod_n(c * inv, p);
        std::vector<std::vector<long long>> rest;
        for (size_t i = 0; i < work.size(); ++i) {
            if (i == bi || i == bj) continue;
            auto w = work[i];
            long long cu = form(w, v);
            long long cv = form(w, u);
            for (int t = 0; t < d; ++t)
                w[t] = mod_n(w[t] - cu * u[t] + cv * v[t], p);
            rest.push_back(w);
        }
        us.push_back(u);
        vs.push_back(v);
        work = std::move(rest);
    }
    const int k = static_cast<int>(us.size());
    // C columns u_1..u_k v_1..v_k; invert mod p by Gaussian elimination
    std::vector<std::vector<long long>> aug(d, std::vector<long long>(2 * d, 0));
    for (int i = 0; i < d; ++i) {
        for (int c = 0; c < k; ++c) aug[i][c] = mod_n(us[c][i], p);
        for (int c = 0; c < k; ++c) aug[i][k + c] = mod_n(vs[c][i], p);
        aug[i][d + i] = 1;
    }
    for (int col = 0; col < d; ++col) {
        int piv = -1;
        for (int r = col; r < d; ++r)
            if (aug[r][col] != 0) { piv = r; break; }
        if (piv < 0) throw RepresentationError("Darboux basis not invertible mod p");
        std::swap(aug[col], aug[piv]);
        long long inv = mod_inv(aug[col][col], p);
        for (int c = 0; c < 2 * d; ++c) aug[col][c] = mod_n(aug[col][c] * inv, p);
        for (int r = 0; r < d; ++r) {
            if (r == col || aug[r][col] == 0) continue;
            long long f = aug[r][col];
            for (int c = 0; c < 2 * d; ++c)
                aug[r][c] = mod_n(aug[r][c] - f * aug[col][c], p);
        }
    }
    DarbouxMod out;
    out.k = k;
    out.cinv.assign(d, std::vector<long long>(d, 0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out.cinv[i][j] = aug[i][d + j];
    return out;
}

} // namespace

// --- SkewForm ----------------------------------------------------------------

int SkewForm::dim() const { return dim_from_wedge(comps.size()); }

Eigen::MatrixXd SkewForm::matrix() const {
    const int d = dim();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, d);
    int idx = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j, ++idx) {
            M(i, j) = comps[idx];
            M(j, i) = -comps[idx];
        }
    return M;
}

namespace {
double pf_recursive(const Eigen::MatrixXd& M) {
    const int d = static_cast<int>(M.rows());
    if (d == 0) return 1.0;
    if (d % 2 != 0) return 0.0;
    if (d == 2) return M(0, 1);
    double acc = 0;
    double sign = 1;
    for (int j = 1; j < d; ++j) {
        Eigen::MatrixXd sub(d - 2, d - 2);
        int ri = 0;
        for (int r = 1; r < d; ++r) {
            if (r == j) continue;
            int ci = 0;
            for (int c = 1; c < d; ++c) {
                if (c == j) continue;
                sub(ri, ci++) = M(r, c);
            }
            ++ri;
        }
        acc += sign * M(0, j) * pf_recursive(sub);
        sign = -sign;
    }
    return acc;
}

long long pf_recursive_mod(const std::vector<std::vector<long long>>& M, long long p) {
    const int d = static_cast<int>(M.size());
    if (d == 0) return 1;
    if (d % 2 != 0) return 0;
    if (d == 2) return mod_n(M[0][1], p);
    long long acc = 0;
    long long sign = 1;
    for (int j = 1; j < d; ++j) {
        std::vector<std::vector<long long>> sub;
        for (int r = 1; r < d; ++r) {
            if (r == j) continue;
            std::vector<long long> row;
            for (int c = 1; c < d; ++c) {
                if (c == j) continue;
                row.push_back(M[r][c]);
            }
            sub.push_back(row);
        }
        acc = mod_n(acc + sign * mod_n(M[0][j] * pf_recursive_mod(sub, p), p), p);
        sign = -sign;
    }
    return acc;
}
} // namespace

double SkewForm::pfaffian() const { return pf_recursive(matrix()); }

double SkewForm::pair(const std::vector<double>& a) const {
    if (a.size() != comps.size()) throw ShapeError("skew pairing: wedge size mismatch");
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += comps[i] * a[i];
    return s;
}

long long pfaffian_mod(const std::vector<long long>& comps, int d, long long p) {
    std::vector<std::vector<long long>> M(d, std::vector<long long>(d, 0));
    int idx = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j, ++idx) {
            M[i][j] = mod_n(comps[idx], p);
            M[j][i] = mod_n(-comps[idx], p);
        }
    return pf_recursive_mod(M, p);
}

long long skew_pair_mod(const std::vector<long long>& comps,
                        const std::vector<long long>& a, long long n) {
    if (a.size() != comps.size()) throw ShapeError("skew pairing: wedge size mismatch");
    long long s = 0;
    for (size_t i = 0; i < a.size(); ++i) s = mod_n(s + comps[i] * a[i], n);
    return s;
}

// --- characters ----------------------------------------------------------------

cplx character_eval(const DualPoint& pt, const RElement& g) {
    if (pt.phi.size() != g.x.size() || pt.Phi.size() != g.a.size())
        throw ShapeError("character_eval: dimension mismatch");
    double phase = 0;
    for (size_t i = 0; i < pt.phi.size(); ++i) phase += pt.phi[i] * g.x[i];
    for (size_t i = 0; i < pt.Phi.size(); ++i) phase += pt.Phi[i] * g.a[i];
    return cplx(std::cos(phase), std::sin(phase));
}

cplx character_eval_finite(const std::vector<long long>& phi,
                           const std::vector<long long>& Phi, const ZElement& g, int n) {
    long long ph = 0;
    for (size_t i = 0; i < phi.size(); ++i) ph = mod_n(ph + phi[i] * g.x[i], n);
    for (size_t i = 0; i < Phi.size(); ++i) ph = mod_n(ph + Phi[i] * g.a[i], n);
    double t = kTwoPi * ph / n;
    return cplx(std::cos(t), std::sin(t));
}

// --- commutative transform -------------------------------------------------------

DualField fourier0(const LatticeField& f) {
    DualField out(f.spec);
    out.values = f.values;
    dft_all_axes(out.values, f.spec.n, f.spec.axes, +1);
    const double scale = f.spec.haar_weight();
    for (auto& v : out.values) v *= scale;
    return out;
}

LatticeField fourier0_inv(const DualField& u) {
    LatticeField out(u.spec);
    out.values = u.values;
    dft_all_axes(out.values, u.spec.n, u.spec.axes, -1);
    const double scale = u.cell();
    for (auto& v : out.values) v *= scale;
    return out;
}

// --- label sets ---------------------------------------------------------------------

double plancherel_base_weight(const GroupParams& p, const LatticeSpec& spec,
                              const RepSpec& rep, const IrrepLabel& label) {
    if (p.model == Model::FiniteCyclic) {
        const double sites = static_cast<double>(spec.sites());
        return label.fiber_dim / sites;
    }
    if (label.character) return 0.0;
    const double cell = std::pow(2.0 * rep.phi_box / rep.phi_quad,
                                 static_cast<int>(label.Phi.comps.size()));
    return std::abs(label.Phi.pfaffian()) * cell;
}

LabelSetPtr make_label_set(const GroupParams& p, const LatticeSpec& spec, const RepSpec& rep) {
    p.validate();
    spec.validate();
    rep.validate();
    if (p.d % 2 != 0)
        throw ConfigError("group.d", "noncommutative dual sampling needs even d");
    auto L = std::make_shared<LabelSet>();
    L->params = p;
    L->spec = spec;
    L->rep = rep;
    if (p.model == Model::FiniteCyclic) {
        if (p.d != 2)
            throw ConfigError("group.d", "finite-cyclic dual enumeration is implemented for d = 2");
        if (!is_prime(p.n))
            throw ConfigError("group.n", "finite-cyclic dual enumeration needs prime n");
        if (std::gcd(p.eps_int(), static_cast<long long>(p.n)) != 1)
            throw ConfigError("group.eps", "finite-cyclic dual needs eps invertible mod n");
        // characters: phi over (Z_n)^d, trivial central part
        for (long long p1 = 0; p1 < p.n; ++p1)
            for (long long p0 = 0; p0 < p.n; ++p0) {
                IrrepLabel lab;
                lab.character = true;
                lab.zphi = {p0, p1};
                lab.zPhi = {0};
                lab.fiber_dim = 1;
                L->labels.push_back(std::move(lab));
            }
        // one clock-and-shift representation per invertible Phi
        for (long long q = 1; q < p.n; ++q) {
            IrrepLabel lab;
            lab.character = false;
            lab.zPhi = {q};
            lab.fiber_dim = p.n;
            L->labels.push_back(std::move(lab));
        }
    } else {
        if (p.epsilon <= 0)
            throw ConfigError("group.eps", "continuum dual sampling needs eps > 0");
        const int m = p.m();
        const double step = 2.0 * rep.phi_box / rep.phi_quad;
        std::vector<int> idx(m, 0);
        const double excl = std::pow(rep.phi_excl, p.d / 2);
        while (true) {
            SkewForm Phi;
            Phi.comps.resize(m);
            for (int i = 0; i < m; ++i)
                Phi.comps[i] = -rep.phi_box + (idx[i] + 0.5) * step;
            if (std::abs(Phi.pfaffian()) > excl) {
                IrrepLabel lab;
                lab.character = false;
                lab.Phi = Phi;
                lab.fiber_dim = static_cast<int>(std::pow(rep.fiber_modes, p.d / 2) + 0.5);
                L->labels.push_back(std::move(lab));
            }
            int ax = 0;
            while (ax < m && ++idx[ax] == rep.phi_quad) idx[ax++] = 0;
            if (ax == m) break;
        }
        if (L->labels.empty())
            throw ConfigError("rep.phi_quad", "Phi quadrature excluded every label");
    }
    L->base_weight.reserve(L->labels.size());
    for (const auto& lab : L->labels)
        L->base_weight.push_back(plancherel_base_weight(p, spec, rep, lab));
    return L;
}

// --- representation matrices ----------------------------------------------------------

namespace {

// finite clock-and-shift fiber: rho0(X) for one base-lattice element
Eigen::MatrixXcd finite_rho0(const GroupParams& p, const IrrepLabel& lab,
                             const std::vector<long long>& x) {
    const long long n = p.n;
    const long long kappa = mod_n(p.eps_int() * p.inv2(), n);
    const long long theta = mod_n(-p.eps_int(), n);
    static thread_local std::vector<cplx> w;
    static thread_local long long wn = -1;
    if (wn != n) {
        w = root_table(static_cast<int>(n));
        wn = n;
    }
    const DarbouxMod dx = darboux_mod(lab.zPhi, p.d, n);
    const int k = dx.k;
    std::vector<long long> s(k), r(k);
    for (int i = 0; i < k; ++i) {
        long long acc_s = 0, acc_r = 0;
        for (int j = 0; j < p.d; ++j) {
            acc_s = mod_n(acc_s + dx.cinv[i][j] * x[j], n);
            acc_r = mod_n(acc_r + dx.cinv[k + i][j] * x[j], n);
        }
        s[i] = acc_s;
        r[i] = acc_r;
    }
    long long global = 0;
    for (int i = 0; i < k; ++i) global = mod_n(global - kappa * s[i] * r[i], n);
    std::uint64_t dim = 1;
    for (int i = 0; i < k; ++i) dim *= static_cast<std::uint64_t>(n);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<long long> q(k, 0);
    for (std::uint64_t col = 0; col < dim; ++col) {
        long long ph = global;
        std::uint64_t row = 0, stride = 1;
        for (int i = 0; i < k; ++i) {
            ph = mod_n(ph + theta * q[i] * r[i], n);
            row += static_cast<std::uint64_t>(mod_n(q[i] + s[i], n)) * stride;
            stride *= static_cast<std::uint64_t>(n);
        }
        rho(row, col) = w[ph];
        int ax = 0;
        while (ax < k && ++q[ax] == n) q[ax++] = 0;
    }
    return rho;
}

// continuum Weyl fiber: rho0(X) = tensor of exp(i beta_j (r_j Q + s_j P))
Eigen::MatrixXcd continuum_rho0(const GroupParams& p, const RepSpec& rep,
                                const IrrepLabel& lab, const std::vector<double>& x) {
    const DarbouxReal dx = darboux_real(lab.Phi.matrix());
    const int k = static_cast<int>(dx.mu.size());
    Eigen::VectorXd X(p.d);
    for (int i = 0; i < p.d; ++i) X[i] = x[i];
    Eigen::VectorXd coords = dx.basis.partialPivLu().solve(X);
    Eigen::MatrixXcd Q, P;
    hermite_qp(rep.fiber_modes, Q, P);
    Eigen::MatrixXcd out;
    for (int j = 0; j < k; ++j) {
        const double beta = std::sqrt(p.epsilon * dx.mu[j]);
        const double s = coords[j], r = coords[k + j];
        Eigen::MatrixXcd H = beta * (r * Q + s * P);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        Eigen::VectorXcd ph(rep.fiber_modes);
        for (int t = 0; t < rep.fiber_modes; ++t)
            ph[t] = std::polar(1.0, es.eigenvalues()[t]);
        Eigen::MatrixXcd factor =
            es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
        out = (j == 0) ? factor : kron(out, factor);
    }
    return out;
}

} // namespace

const std::vector<Eigen::MatrixXcd>& LabelSet::rho0_table(size_t label_index) const {
    if (cache_.empty()) cache_.resize(labels.size());
    auto& slot = cache_[label_index];
    if (!slot.empty()) return slot;
    const auto& lab = labels[label_index];
    const int d = params.d;
    std::uint64_t base_sites = 1;
    for (int i = 0; i < d; ++i) base_sites *= static_cast<std::uint64_t>(spec.n);
    slot.reserve(base_sites);
    MultiIndex mi{spec.n, d};
    for (std::uint64_t sx = 0; sx < base_sites; ++sx) {
        auto c = mi.unflatten(sx);
        if (lab.character) {
            Eigen::MatrixXcd one(1, 1);
            if (params.model == Model::FiniteCyclic) {
                long long ph = 0;
                for (int i = 0; i < d; ++i) ph = mod_n(ph + lab.zphi[i] * c[i], spec.n);
                one(0, 0) = std::polar(1.0, kTwoPi * ph / spec.n);
            } else {
                double phase = 0;
                for (int i = 0; i < d; ++i)
                    phase += lab.rphi[i] * spec.h * signed_rep(c[i], spec.n);
                one(0, 0) = std::polar(1.0, phase);
            }
            slot.push_back(std::move(one));
        } else if (params.model == Model::FiniteCyclic) {
            slot.push_back(finite_rho0(params, lab, c));
        } else {
            std::vector<double> x(d);
            for (int i = 0; i < d; ++i) x[i] = spec.h * signed_rep(c[i], spec.n);
            slot.push_back(continuum_rho0(params, rep, lab, x));
        }
    }
    return slot;
}

Eigen::MatrixXcd rep_matrix(const LabelSet& L, size_t label_index, const ZElement& g) {
    if (L.params.model != Model::FiniteCyclic)
        throw RepresentationError("integer element passed to a continuum label set");
    const auto& lab = L.labels[label_index];
    ZElement gr = reduce(g, L.params);
    cplx central;
    if (lab.character) {
        long long ph = 0;
        for (size_t i = 0; i < gr.x.size(); ++i)
            ph = mod_n(ph + lab.zphi[i] * gr.x[i], L.params.n);
        Eigen::MatrixXcd one(1, 1);
        one(0, 0) = std::polar(1.0, kTwoPi * ph / L.params.n);
        return one;
    }
    long long cph = skew_pair_mod(lab.zPhi, gr.a, L.params.n);
    central = std::polar(1.0, kTwoPi * cph / L.params.n);
    return central * finite_rho0(L.params, lab, gr.x);
}

Eigen::MatrixXcd rep_matrix(const LabelSet& L, size_t label_index, const RElement& g) {
    if (L.params.model != Model::ContinuumLattice)
        throw RepresentationError("real element passed to a finite label set");
    const auto& lab = L.labels[label_index];
    if (lab.character) {
        double phase = 0;
        for (size_t i = 0; i < g.x.size(); ++i) phase += lab.rphi[i] * g.x[i];
        Eigen::MatrixXcd one(1, 1);
        one(0, 0) = std::polar(1.0, phase);
        return one;
    }
    if (!lab.Phi.is_symplectic())
        throw RepresentationError("rep_matrix: label is not symplectic");
    const cplx central = std::polar(1.0, lab.Phi.pair(g.a));
    return central * continuum_rho0(L.params, L.rep, lab, g.x);
}

// --- operator fields --------------------------------------------------------------------

OperatorField OperatorField::zeros(const LabelSetPtr& L) {
    OperatorField F;
    F.labels = L;
    F.fibers.reserve(L->size());
    for (const auto& lab : L->labels)
        F.fibers.push_back(Eigen::MatrixXcd::Zero(lab.fiber_dim, lab.fiber_dim));
    return F;
}

OperatorField OperatorField::identity(const LabelSetPtr& L) {
    OperatorField F;
    F.labels = L;
    F.fibers.reserve(L->size());
    for (const auto& lab : L->labels)
        F.fibers.push_back(Eigen::MatrixXcd::Identity(lab.fiber_dim, lab.fiber_dim));
    return F;
}

OperatorField& OperatorField::operator+=(const OperatorField& o) {
    if (o.labels != labels) throw ShapeError("operator fields carry different label sets");
    for (size_t i = 0; i < fibers.size(); ++i) fibers[i] += o.fibers[i];
    return *this;
}

OperatorField& OperatorField::operator*=(cplx s) {
    for (auto& f : fibers) f *= s;
    return *this;
}

double OperatorField::hs_norm() const {
    return std::sqrt(std::abs(hs_inner(*this, *this)));
}

OperatorField fourierE(const LatticeField& f, const LabelSetPtr& L) {
    if (!L || L->labels.empty()) throw ShapeError("fourierE: empty label set");
    check_same_grid(f.spec, L->spec);
    OperatorField F = OperatorField::zeros(L);
    const GroupParams& p = L->params;
    const int d = p.d, m = p.m();
    const int n = f.spec.n;
    MultiIndex base{n, d}, wedge_mi{n, m};
    std::uint64_t base_sites = 1, wedge_sites = 1;
    for (int i = 0; i < d; ++i) base_sites *= n;
    for (int i = 0; i < m; ++i) wedge_sites *= n;
    const double haar = f.spec.haar_weight();
    const auto w = root_table(n);
    for (size_t li = 0; li < L->size(); ++li) {
        const auto& lab = L->labels[li];
        const auto& rho0 = L->rho0_table(li);
        // central phases exp(i Phi(A)) per wedge site
        std::vector<cplx> central(wedge_sites);
        for (std::uint64_t sa = 0; sa < wedge_sites; ++sa) {
            if (lab.character) {
                central[sa] = 1.0;
            } else if (p.model == Model::FiniteCyclic) {
                auto a = wedge_mi.unflatten(sa);
                central[sa] = w[skew_pair_mod(lab.zPhi, a, n)];
            } else {
                auto a = wedge_mi.unflatten(sa);
                double phase = 0;
                for (int i = 0; i < m; ++i)
                    phase += lab.Phi.comps[i] * f.spec.h * signed_rep(a[i], n);
                central[sa] = std::polar(1.0, phase);
            }
        }
        Eigen::MatrixXcd acc =
            Eigen::MatrixXcd::Zero(lab.fiber_dim, lab.fiber_dim);
        for (std::uint64_t sx = 0; sx < base_sites; ++sx) {
            // central reduction: ftilde(X) = sum_A exp(i Phi(A)) f(X, A)
            cplx ftilde(0);
            for (std::uint64_t sa = 0; sa < wedge_sites; ++sa)
                ftilde += f.values[sx + sa * base_sites] * central[sa];
            if (ftilde != cplx(0)) acc += ftilde * rho0[sx];
        }
        F.fibers[li] = acc * haar;
    }
    return F;
}

LatticeField fourierE_inv(const OperatorField& F) {
    const auto& L = *F.labels;
    if (F.fibers.size() != L.size())
        throw ShapeError("fourierE_inv: fiber/label mismatch");
    const GroupParams& p = L.params;
    const int d = p.d, m = p.m();
    const int n = L.spec.n;
    LatticeField out(L.spec);
    MultiIndex wedge_mi{n, m};
    std::uint64_t base_sites = 1, wedge_sites = 1;
    for (int i = 0; i < d; ++i) base_sites *= n;
    for (int i = 0; i < m; ++i) wedge_sites *= n;
    const auto w = root_table(n);
    for (size_t li = 0; li < L.size(); ++li) {
        const double wt = L.weight(li);
        if (wt == 0) continue;
        const auto& lab = L.labels[li];
        const auto& rho0 = L.rho0_table(li);
        // t(X) = tr(F rho0(X)^*)
        std::vector<cplx> tx(base_sites);
        for (std::uint64_t sx = 0; sx < base_sites; ++sx)
            tx[sx] = (F.fibers[li] * rho0[sx].adjoint()).trace();
        for (std::uint64_t sa = 0; sa < wedge_sites; ++sa) {
            cplx central;
            if (p.model == Model::FiniteCyclic) {
                auto a = wedge_mi.unflatten(sa);
                long long ph = lab.character ? 0 : skew_pair_mod(lab.zPhi, a, n);
                central = std::conj(w[ph]);
            } else {
                auto a = wedge_mi.unflatten(sa);
                double phase = 0;
                if (!lab.character)
                    for (int i = 0; i < m; ++i)
                        phase += lab.Phi.comps[i] * L.spec.h * signed_rep(a[i], n);
                central = std::polar(1.0, -phase);
            }
            const cplx factor = wt * central;
            for (std::uint64_t sx = 0; sx < base_sites; ++sx)
                out.values[sx + sa * base_sites] += factor * tx[sx];
        }
    }
    return out;
}

OperatorField fiber_product(const OperatorField& a, const OperatorField& b) {
    if (a.labels != b.labels) throw ShapeError("fiber_product: label sets differ");
    OperatorField out = OperatorField::zeros(a.labels);
    for (size_t i = 0; i < out.fibers.size(); ++i) out.fibers[i] = a.fibers[i] * b.fibers[i];
    return out;
}

cplx hs_inner(const OperatorField& a, const OperatorField& b) {
    if (a.labels != b.labels) throw ShapeError("hs_inner: label sets differ");
    cplx acc(0);
    for (size_t i = 0; i < a.fibers.size(); ++i) {
        const double wt = a.labels->weight(i);
        if (wt == 0) continue;
        acc += wt * (a.fibers[i].cwiseProduct(b.fibers[i].conjugate())).sum();
    }
    return acc;
}

// --- twisted convolution --------------------------------------------------------------------

namespace {
// integer wedge coefficient in index units; throws when the lattice does not
// close under the twisted product
long long lattice_twist(const GroupParams& p, const LatticeSpec& spec) {
    if (p.model == Model::FiniteCyclic) return mod_n(p.eps_int() * p.inv2(), p.n);
    const double c = 0.5 * p.epsilon * spec.h;
    const double r = std::round(c);
    if (std::abs(c - r) > 1e-9)
        throw ConfigError("group.eps",
                          "lattice twisted convolution needs eps*h/2 to be an integer");
    return static_cast<long long>(r);
}
} // namespace

LatticeField twisted_convolve(const LatticeField& h1, const LatticeField& h2,
                              const GroupParams& p) {
    check_same_grid(h1.spec, h2.spec);
    const int n = h1.spec.n, d = p.d, m = p.m();
    const long long twist = lattice_twist(p, h1.spec);
    LatticeField out(h1.spec);
    MultiIndex mi{n, d + m};
    const std::uint64_t sites = h1.spec.sites();
    const double haar = h1.spec.haar_weight();
    std::vector<std::vector<long long>> coords(sites);
    for (std::uint64_t s = 0; s < sites; ++s) coords[s] = mi.unflatten(s);
    std::vector<long long> c(d + m);
    for (std::uint64_t s1 = 0; s1 < sites; ++s1) {
        const cplx v1 = h1.values[s1];
        if (v1 == cplx(0)) continue;
        const auto& c1 = coords[s1];
        for (std::uint64_t s2 = 0; s2 < sites; ++s2) {
            const cplx v2 = h2.values[s2];
            if (v2 == cplx(0)) continue;
            const auto& c2 = coords[s2];
            for (int i = 0; i < d; ++i) c[i] = c1[i] + c2[i];
            int idx = d;
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j, ++idx)
                    c[idx] = c1[idx] + c2[idx] + twist * (c1[i] * c2[j] - c1[j] * c2[i]);
            out.values[mi.flatten(c)] += v1 * v2 * haar;
        }
    }
    return out;
}

LatticeField twisted_convolve(const std::vector<LatticeField>& hs, const GroupParams& p) {
    if (hs.empty()) throw ShapeError("twisted_convolve: no operands");
    LatticeField acc = hs[0];
    for (size_t i = 1; i < hs.size(); ++i) acc = twisted_convolve(acc, hs[i], p);
    return acc;
}

LatticeField delta_identity(const LatticeSpec& spec) {
    LatticeField f(spec);
    f.values[0] = 1.0 / spec.haar_weight();
    return f;
}

double calibrate_plancherel(LabelSet& L, const LatticeField& reference) {
    auto holder = std::shared_ptr<LabelSet>(&L, [](LabelSet*) {});
    L.calibration = 1.0;
    OperatorField F = fourierE(reference, holder);
    double raw = 0;
    for (size_t i = 0; i < L.size(); ++i)
        raw += L.base_weight[i] * F.fibers[i].squaredNorm();
    if (raw <= 0) throw RepresentationError("calibration reference has zero spectral mass");
    L.calibration = reference.norm2_haar() / raw;
    return L.calibration;
}

} // namespace ncqft
