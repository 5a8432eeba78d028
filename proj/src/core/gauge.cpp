#include "core/gauge.hpp"

#include <cmath>

#include "core/rng.hpp"

namespace ncqft {

// --- PolyMatrix ------------------------------------------------------------------

PolyMatrix PolyMatrix::constant(int vars, const Eigen::MatrixXcd& c) {
    PolyMatrix p(vars, static_cast<int>(c.rows()), static_cast<int>(c.cols()));
    p.add_term(std::vector<int>(vars, 0), c);
    return p;
}

void PolyMatrix::add_term(const std::vector<int>& exps, const Eigen::MatrixXcd& c) {
    if (static_cast<int>(exps.size()) != vars_)
        throw ShapeError("poly-matrix term has wrong variable count");
    if (c.rows() != rows_ || c.cols() != cols_)
        throw ShapeError("poly-matrix term has wrong shape");
    auto it = terms_.find(Monomial{exps});
    if (it == terms_.end())
        terms_[Monomial{exps}] = c;
    else
        it->second += c;
}

Eigen::MatrixXcd PolyMatrix::eval(const Eigen::VectorXd& w) const {
    if (w.size() != vars_) throw ShapeError("poly-matrix evaluated at wrong arity");
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows_, cols_);
    for (const auto& [m, c] : terms_) {
        double scale = 1.0;
        for (int i = 0; i < vars_; ++i)
            for (int k = 0; k < m.exps[i]; ++k) scale *= w[i];
        acc += scale * c;
    }
    return acc;
}

PolyMatrix PolyMatrix::partial(int i) const {
    PolyMatrix out(vars_, rows_, cols_);
    for (const auto& [m, c] : terms_) {
        if (m.exps[i] == 0) continue;
        std::vector<int> d = m.exps;
        d[i] -= 1;
        out.add_term(d, static_cast<double>(m.exps[i]) * c);
    }
    return out;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& o) const {
    PolyMatrix out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m.exps, c);
    return out;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
    if (cols_ != o.rows_) throw ShapeError("poly-matrix product shape mismatch");
    PolyMatrix out(vars_, rows_, o.cols_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            std::vector<int> e = ma.exps;
            for (int i = 0; i < vars_; ++i) e[i] += mb.exps[i];
            out.add_term(e, ca * cb);
        }
    return out;
}

// --- gauge transformations ----------------------------------------------------------

namespace {
Eigen::MatrixXcd conj_diag(const Eigen::MatrixXcd& V, const Eigen::VectorXcd& d) {
    return V * d.asDiagonal() * V.adjoint();
}
} // namespace

Eigen::MatrixXcd GaugeTransformation::value(const Eigen::VectorXd& w) const {
    Eigen::VectorXcd d(mdim());
    for (int k = 0; k < mdim(); ++k) d[k] = std::polar(1.0, theta[k].eval(w).real());
    return conj_diag(frame, d);
}

Eigen::MatrixXcd GaugeTransformation::dvalue(int i, const Eigen::VectorXd& w) const {
    Eigen::VectorXcd d(mdim());
    for (int k = 0; k < mdim(); ++k) {
        double th = theta[k].eval(w).real();
        double dth = theta[k].partial(i).eval(w).real();
        d[k] = cplx(0, dth) * std::polar(1.0, th);
    }
    return conj_diag(frame, d);
}

Eigen::MatrixXcd GaugeTransformation::inv_value(const Eigen::VectorXd& w) const {
    Eigen::VectorXcd d(mdim());
    for (int k = 0; k < mdim(); ++k) d[k] = std::polar(1.0, -theta[k].eval(w).real());
    return conj_diag(frame, d);
}

Eigen::MatrixXcd GaugeTransformation::inv_dvalue(int i, const Eigen::VectorXd& w) const {
    Eigen::VectorXcd d(mdim());
    for (int k = 0; k < mdim(); ++k) {
        double th = theta[k].eval(w).real();
        double dth = theta[k].partial(i).eval(w).real();
        d[k] = cplx(0, -dth) * std::polar(1.0, -th);
    }
    return conj_diag(frame, d);
}

Eigen::MatrixXcd GaugeTransformation::inv_d2value(int i, int j,
                                                  const Eigen::VectorXd& w) const {
    Eigen::VectorXcd d(mdim());
    for (int k = 0; k < mdim(); ++k) {
        double th = theta[k].eval(w).real();
        double di = theta[k].partial(i).eval(w).real();
        double dj = theta[k].partial(j).eval(w).real();
        double dij = theta[k].partial(i).partial(j).eval(w).real();
        d[k] = (cplx(0, -dij) + cplx(0, -di) * cplx(0, -dj)) * std::polar(1.0, -th);
    }
    return conj_diag(frame, d);
}

double GaugeTransformation::unitarity_defect(const Eigen::VectorXd& w) const {
    Eigen::MatrixXcd g = value(w);
    return (g * g.adjoint() - Eigen::MatrixXcd::Identity(mdim(), mdim()))
        .cwiseAbs()
        .maxCoeff();
}

// --- connections -----------------------------------------------------------------------

double PolyConnection::algebra_defect(const Eigen::VectorXd& w) const {
    double worst = 0;
    for (int x = 0; x < points(); ++x) {
        Eigen::MatrixXcd a = A(x, w);
        worst = std::max(worst, (a + a.adjoint()).cwiseAbs().maxCoeff());
    }
    return worst;
}

namespace {

class TransformedConnection : public Connection {
public:
    TransformedConnection(ConnectionPtr base, GaugeTransformation g, bool broken)
        : base_(std::move(base)), g_(std::move(g)), broken_(broken) {}

    int points() const override { return base_->points(); }
    int mdim() const override { return base_->mdim(); }

    Eigen::MatrixXcd A(int x, const Eigen::VectorXd& w) const override {
        const double sign = broken_ ? -1.0 : 1.0;
        Eigen::MatrixXcd g = g_.value(w);
        return g * base_->A(x, w) * g_.inv_value(w) + sign * g * g_.inv_dvalue(x, w);
    }

    Eigen::MatrixXcd dA(int y, int x, const Eigen::VectorXd& w) const override {
        const double sign = broken_ ? -1.0 : 1.0;
        Eigen::MatrixXcd g = g_.value(w);
        Eigen::MatrixXcd gi = g_.inv_value(w);
        Eigen::MatrixXcd dg = g_.dvalue(y, w);
        Eigen::MatrixXcd dgi = g_.inv_dvalue(y, w);
        Eigen::MatrixXcd Ax = base_->A(x, w);
        Eigen::MatrixXcd dAx = base_->dA(y, x, w);
        return dg * Ax * gi + g * dAx * gi + g * Ax * dgi +
               sign * (dg * g_.inv_dvalue(x, w) + g * g_.inv_d2value(y, x, w));
    }

private:
    ConnectionPtr base_;
    GaugeTransformation g_;
    bool broken_;
};

} // namespace

ConnectionPtr gauge_transform_connection(const ConnectionPtr& base,
                                         const GaugeTransformation& g, bool broken_sign) {
    if (g.mdim() != base->mdim())
        throw ShapeError("gauge transformation dimension does not match the connection");
    return std::make_shared<TransformedConnection>(base, g, broken_sign);
}

Eigen::VectorXcd nabla_apply(const Connection& conn, int x, const VectorSection& f,
                             const Eigen::VectorXd& w) {
    if (f.cols() != 1 || f.rows() != conn.mdim())
        throw ShapeError("nabla_apply: section shape mismatch");
    return f.partial(x).eval(w) + conn.A(x, w) * f.eval(w);
}

Eigen::VectorXcd nabla_apply_values(const Connection& conn, int x,
                                    const Eigen::VectorXcd& f_value,
                                    const Eigen::VectorXcd& f_dx,
                                    const Eigen::VectorXd& w) {
    return f_dx + conn.A(x, w) * f_value;
}

Eigen::MatrixXcd curvature(const Connection& conn, int x, int y,
                           const Eigen::VectorXd& w) {
    Eigen::MatrixXcd Ax = conn.A(x, w);
    Eigen::MatrixXcd Ay = conn.A(y, w);
    return conn.dA(x, y, w) - conn.dA(y, x, w) + Ax * Ay - Ay * Ax;
}

double commutator_identity_check(const Connection& conn, int x, int y,
                                 const VectorSection& f, const Eigen::VectorXd& w) {
    // nabla_x nabla_y f = d_x d_y f + (d_x A_y) f + A_y d_x f + A_x (d_y f + A_y f)
    auto second = [&](int a, int b) {
        return Eigen::VectorXcd(f.partial(b).partial(a).eval(w) +
                                conn.dA(a, b, w) * f.eval(w) +
                                conn.A(b, w) * f.partial(a).eval(w) +
                                conn.A(a, w) * (f.partial(b).eval(w) +
                                                conn.A(b, w) * f.eval(w)));
    };
    Eigen::VectorXcd comm = second(x, y) - second(y, x);
    Eigen::VectorXcd mult = curvature(conn, x, y, w) * f.eval(w);
    return (comm - mult).cwiseAbs().maxCoeff();
}

// --- invariants -------------------------------------------------------------------------

double K1(const Connection& conn, const Eigen::VectorXd& w, const GaugeContext& ctx) {
    const int p = ctx.S.size();
    const int m = conn.mdim();
    std::vector<Eigen::MatrixXcd> F(static_cast<size_t>(p) * p,
                                    Eigen::MatrixXcd::Zero(m, m));
    for (int x = 0; x < p; ++x)
        for (int y = x + 1; y < p; ++y) {
            Eigen::MatrixXcd c = curvature(conn, x, y, w);
            F[x * p + y] = c;
            F[y * p + x] = -c;
        }
    // H_zw = sum_{x,y} B(x,z) B(y,w) F_xy, then K1 = sum killing(H_zw, F_zw)
    double acc = 0;
    for (int z = 0; z < p; ++z)
        for (int t = 0; t < p; ++t) {
            Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m, m);
            for (int x = 0; x < p; ++x) {
                const double bxz = ctx.B.eval(ctx.S.points[x], ctx.S.points[z]);
                if (bxz == 0) continue;
                for (int y = 0; y < p; ++y)
                    H += bxz * ctx.B.eval(ctx.S.points[y], ctx.S.points[t]) * F[x * p + y];
            }
            acc += GaugeGroupSpec::killing(H, F[z * p + t]);
        }
    return acc * std::pow(ctx.cell, 4);
}

cplx K2_from_derivatives(const std::vector<Eigen::VectorXcd>& nf, const GaugeContext& ctx) {
    const int p = ctx.S.size();
    cplx acc(0);
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y)
            acc += nf[x].dot(nf[y]) * ctx.B.eval(ctx.S.points[x], ctx.S.points[y]);
    return acc * ctx.cell * ctx.cell;
}

cplx K2(const Connection& conn, const VectorSection& f, const Eigen::VectorXd& w,
        const GaugeContext& ctx) {
    const int p = ctx.S.size();
    std::vector<Eigen::VectorXcd> nf(p);
    for (int x = 0; x < p; ++x) nf[x] = nabla_apply(conn, x, f, w);
    return K2_from_derivatives(nf, ctx);
}

cplx action_integrand(const Connection& conn, const VectorSection& f,
                      const SourceAndPotential& src, const Eigen::VectorXd& w,
                      const GaugeContext& ctx) {
    Eigen::VectorXcd fv = f.eval(w);
    cplx pairing = src.J.eval(w).col(0).dot(fv); // <J, f> Hermitian in the first slot
    return cplx(K1(conn, w, ctx), 0.0) + K2(conn, f, w, ctx) + src.V(fv) - pairing;
}

// --- sampler and partition estimator ------------------------------------------------------

FatSample sample_fatpoint_measure(const WeightFunction& W, const SamplerConfig& cfg,
                                  const SupportSet* S, int space_dim,
                                  std::uint64_t sample_index) {
    if (cfg.path_len < 1) throw ConfigError("sampler.path_len", "need at least one step");
    CounterRng rng(cfg.seed, sample_index);
    ParamPath path;
    for (int j = 0; j < cfg.path_len; ++j) {
        if (S) {
            path.samples.push_back(S->points[rng.uniform_index(S->size())]);
        } else {
            std::vector<double> x(space_dim);
            for (int i = 0; i < space_dim; ++i)
                x[i] = rng.uniform(cfg.box_lo.at(i), cfg.box_hi.at(i));
            path.samples.push_back(x);
        }
    }
    // auxiliary chain: Y_1..Y_{N-1} with Y_0 = 0
    const int m = W.m;
    std::vector<double> ws(m, 0.0);
    std::vector<double> prev(space_dim, 0.0);
    for (int j = 1; j <= cfg.path_len - 1; ++j) {
        std::vector<double> cur(space_dim);
        for (int i = 0; i < space_dim; ++i)
            cur[i] = rng.uniform(-cfg.y_half_width, cfg.y_half_width);
        int idx = 0;
        for (int a = 0; a < space_dim; ++a)
            for (int b = a + 1; b < space_dim; ++b, ++idx)
                ws[idx] += prev[a] * cur[b] - prev[b] * cur[a];
        prev = cur;
    }
    for (auto& v : ws) v *= 0.5 * cfg.eps;
    cplx wv = weight_symbol_eval(W, ws);
    FatSample out;
    out.measure = path_to_measure(path);
    out.log_weight = std::log(std::max(std::abs(wv), 1e-300));
    out.phase = std::arg(wv);
    return out;
}

PartitionEstimate partition_estimate(const std::vector<GaugeConfigPoint>& family,
                                     const SourceAndPotential& src,
                                     const GaugeContext& ctx, const WeightFunction& W,
                                     const SamplerConfig& sampler, std::uint64_t samples,
                                     int batches) {
    if (family.empty()) throw ConfigError("partition.family", "no parameter points");
    if (samples == 0) throw ConfigError("sampler.samples", "need at least one sample");
    const int G = static_cast<int>(family.size());
    batches = std::max(1, std::min<int>(batches, static_cast<int>(samples)));

    // per-sample action values for every family point
    std::vector<cplx> act(static_cast<size_t>(G) * samples);
    double phase_mass = 0;
    for (std::uint64_t k = 0; k < samples; ++k) {
        FatSample smp = sample_fatpoint_measure(W, sampler, &ctx.S, ctx.S.space_dim(), k);
        Eigen::VectorXd w = to_weights(ctx.S, smp.measure);
        cplx nu = std::exp(smp.log_weight) * std::polar(1.0, smp.phase);
        phase_mass += std::abs(nu);
        for (int g = 0; g < G; ++g)
            act[static_cast<size_t>(g) * samples + k] =
                action_integrand(*family[g].conn, family[g].f, src, w, ctx) * nu;
    }

    auto estimate = [&](std::uint64_t lo, std::uint64_t hi) {
        cplx acc(0);
        for (int g = 0; g < G; ++g) {
            cplx Shat(0);
            for (std::uint64_t k = lo; k < hi; ++k)
                Shat += act[static_cast<size_t>(g) * samples + k];
            Shat /= static_cast<double>(hi - lo);
            acc += std::exp(cplx(0, 1) * Shat);
        }
        return acc / static_cast<double>(G);
    };

    PartitionEstimate out;
    out.samples = samples;
    out.phase_mass = phase_mass / static_cast<double>(samples);
    out.value = estimate(0, samples);

    // batch-mean standard error
    if (batches > 1) {
        std::vector<cplx> bvals;
        const std::uint64_t bsz = samples / batches;
        for (int b = 0; b < batches; ++b) {
            std::uint64_t lo = b * bsz;
            std::uint64_t hi = (b + 1 == batches) ? samples : lo + bsz;
            if (hi > lo) bvals.push_back(estimate(lo, hi));
        }
        cplx mean(0);
        for (auto v : bvals) mean += v;
        mean /= static_cast<double>(bvals.size());
        double var = 0;
        for (auto v : bvals) var += std::norm(v - mean);
        var /= static_cast<double>(bvals.size());
        out.std_error = std::sqrt(var / static_cast<double>(bvals.size()));
    }
    return out;
}

} // namespace ncqft
