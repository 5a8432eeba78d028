#include "core/fatpoint.hpp"

#include <algorithm>
#include <cmath>

#include "core/rng.hpp"

namespace ncqft {

void SupportSet::validate() const {
    if (points.empty()) throw ConfigError("support.points", "support set is empty");
    const size_t dim = points[0].size();
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != dim)
            throw ConfigError("support.points", "points have mixed dimensions");
        for (size_t j = i + 1; j < points.size(); ++j) {
            double dist = 0;
            for (size_t k = 0; k < dim; ++k)
                dist += std::abs(points[i][k] - points[j][k]);
            if (dist < 1e-12)
                throw ConfigError("support.points", "support points must be distinct");
        }
    }
}

int SupportSet::find(const std::vector<double>& x, double tol) const {
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != x.size()) continue;
        double dist = 0;
        for (size_t k = 0; k < x.size(); ++k) dist += std::abs(points[i][k] - x[k]);
        if (dist <= tol) return static_cast<int>(i);
    }
    return -1;
}

void DiscreteMeasure::validate() const {
    for (const auto& a : atoms)
        if (a.weight < 0) throw ConfigError("measure", "weights must be nonnegative");
    if (total() > 1.0 + 1e-12)
        throw ConfigError("measure", "total mass must not exceed one");
}

cplx pair(const std::function<cplx(const std::vector<double>&)>& fld,
          const DiscreteMeasure& mu) {
    cplx acc(0);
    for (const auto& a : mu.atoms) acc += a.weight * fld(a.x);
    return acc;
}

cplx pair(const std::function<cplx(const std::vector<double>&)>& fld,
          const SignedMeasure& nu) {
    cplx acc(0);
    for (const auto& a : nu.atoms) acc += a.weight * fld(a.x);
    return acc;
}

DiscreteMeasure delta_embed(const std::vector<double>& psi) {
    return DiscreteMeasure{{Atom{psi, 1.0}}};
}

DiscreteMeasure path_to_measure(const ParamPath& path) {
    if (path.samples.empty()) throw ShapeError("path_to_measure: empty path");
    const double w = 1.0 / static_cast<double>(path.samples.size());
    std::map<std::vector<double>, double> merged;
    for (const auto& x : path.samples) merged[x] += w;
    DiscreteMeasure mu;
    for (auto& [x, wt] : merged) mu.atoms.push_back(Atom{x, wt});
    return mu;
}

namespace {
Eigen::VectorXd atoms_to_weights(const SupportSet& S, const std::vector<Atom>& atoms) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(S.size());
    for (const auto& a : atoms) {
        int idx = S.find(a.x);
        if (idx < 0) throw ShapeError("measure has an atom outside the support set");
        w[idx] += a.weight;
    }
    return w;
}
} // namespace

Eigen::VectorXd to_weights(const SupportSet& S, const DiscreteMeasure& mu) {
    return atoms_to_weights(S, mu.atoms);
}

Eigen::VectorXd to_weights(const SupportSet& S, const SignedMeasure& nu) {
    return atoms_to_weights(S, nu.atoms);
}

DiscreteMeasure measure_from_weights(const SupportSet& S, const Eigen::VectorXd& w) {
    DiscreteMeasure mu;
    for (int i = 0; i < S.size(); ++i)
        if (w[i] != 0.0) mu.atoms.push_back(Atom{S.points[i], w[i]});
    mu.validate();
    return mu;
}

// --- polynomials -----------------------------------------------------------------

Polynomial Polynomial::constant(int vars, cplx c) {
    Polynomial p(vars);
    if (c != cplx(0)) p.terms_[Monomial{std::vector<int>(vars, 0)}] = c;
    return p;
}

Polynomial Polynomial::coordinate(int vars, int i) {
    Polynomial p(vars);
    std::vector<int> e(vars, 0);
    e.at(i) = 1;
    p.terms_[Monomial{e}] = 1.0;
    return p;
}

int Polynomial::degree() const {
    int deg = 0;
    for (const auto& [m, c] : terms_) {
        int d = 0;
        for (int e : m.exps) d += e;
        deg = std::max(deg, d);
    }
    return deg;
}

bool Polynomial::is_zero(double tol) const {
    for (const auto& [m, c] : terms_)
        if (std::abs(c) > tol) return false;
    return true;
}

void Polynomial::set(const std::vector<int>& exps, cplx c) {
    if (static_cast<int>(exps.size()) != vars_)
        throw ShapeError("polynomial term has wrong variable count");
    if (c == cplx(0))
        terms_.erase(Monomial{exps});
    else
        terms_[Monomial{exps}] = c;
}

cplx Polynomial::coeff(const std::vector<int>& exps) const {
    auto it = terms_.find(Monomial{exps});
    return it == terms_.end() ? cplx(0) : it->second;
}

cplx Polynomial::eval(const Eigen::VectorXd& w) const {
    if (w.size() != vars_) throw ShapeError("polynomial evaluated at wrong arity");
    cplx acc(0);
    for (const auto& [m, c] : terms_) {
        cplx term = c;
        for (int i = 0; i < vars_; ++i)
            for (int k = 0; k < m.exps[i]; ++k) term *= w[i];
        acc += term;
    }
    return acc;
}

Polynomial Polynomial::partial(int i) const {
    Polynomial out(vars_);
    for (const auto& [m, c] : terms_) {
        if (m.exps[i] == 0) continue;
        Monomial d = m;
        d.exps[i] -= 1;
        out.terms_[d] += c * static_cast<double>(m.exps[i]);
    }
    return out;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial out = *this;
    for (const auto& [m, c] : o.terms_) {
        out.terms_[m] += c;
        if (out.terms_[m] == cplx(0)) out.terms_.erase(m);
    }
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + o * cplx(-1);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial out(vars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m = ma;
            for (int i = 0; i < vars_; ++i) m.exps[i] += mb.exps[i];
            out.terms_[m] += ca * cb;
        }
    for (auto it = out.terms_.begin(); it != out.terms_.end();)
        it = (it->second == cplx(0)) ? out.terms_.erase(it) : std::next(it);
    return out;
}

Polynomial Polynomial::operator*(cplx s) const {
    Polynomial out(vars_);
    if (s == cplx(0)) return out;
    out.terms_ = terms_;
    for (auto& [m, c] : out.terms_) c *= s;
    return out;
}

double Polynomial::coeff_distance(const Polynomial& o) const {
    double worst = 0;
    for (const auto& [m, c] : terms_) worst = std::max(worst, std::abs(c - o.coeff(m.exps)));
    for (const auto& [m, c] : o.terms_) worst = std::max(worst, std::abs(c - coeff(m.exps)));
    return worst;
}

// --- derivatives -----------------------------------------------------------------

cplx directional_derivative(const Functional& F, const Eigen::VectorXd& mu,
                            const Eigen::VectorXd& nu) {
    if (mu.size() != F.vars() || nu.size() != F.vars())
        throw ShapeError("directional derivative: arity mismatch");
    cplx acc(0);
    for (int i = 0; i < F.vars(); ++i) {
        if (nu[i] == 0.0) continue;
        acc += nu[i] * F.partial(i).eval(mu);
    }
    return acc;
}

CotangentField weak_frechet_derivative(const Functional& F, const Eigen::VectorXd& mu) {
    CotangentField df;
    df.values.resize(F.vars());
    for (int i = 0; i < F.vars(); ++i) df.values[i] = F.partial(i).eval(mu);
    return df;
}

cplx partial_x(const Functional& F, const Eigen::VectorXd& mu, int x) {
    if (x < 0 || x >= F.vars())
        throw ShapeError("partial_x: point is not in the support set");
    return F.partial(x).eval(mu);
}

Functional tangent_apply(const TangentField& Delta, const Functional& F) {
    if (static_cast<int>(Delta.size()) != F.vars())
        throw ShapeError("tangent_apply: field arity mismatch");
    Functional out(F.vars());
    for (int i = 0; i < F.vars(); ++i) out = out + Delta[i] * F.partial(i);
    return out;
}

const Polynomial& PiecewiseFunctional::active(const Eigen::VectorXd& w) const {
    double s = 0;
    for (int i = 0; i < w.size(); ++i) s += normal[i] * w[i];
    return s >= threshold ? above : below;
}

cplx tangent_apply_at(const TangentField& Delta, const PiecewiseFunctional& F,
                      const Eigen::VectorXd& w) {
    cplx acc(0);
    for (size_t i = 0; i < Delta.size(); ++i)
        acc += Delta[i].eval(w) * F.partial_at(static_cast<int>(i), w);
    return acc;
}

double bl_distance_estimate(const DiscreteMeasure& a, const DiscreteMeasure& b,
                            std::uint64_t seed, int dictionary) {
    // dictionary of 1-Lipschitz bumps t -> max(0, 1 - |x - c|/r) with r >= 1
    std::vector<const DiscreteMeasure*> ms{&a, &b};
    size_t dim = 0;
    for (auto* m : ms)
        for (const auto& at : m->atoms) dim = std::max(dim, at.x.size());
    if (dim == 0) return 0.0;
    double lo = 1e30, hi = -1e30;
    for (auto* m : ms)
        for (const auto& at : m->atoms)
            for (double c : at.x) {
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
    double best = 0;
    for (int k = 0; k < dictionary; ++k) {
        CounterRng rng(seed, k);
        std::vector<double> center(dim);
        for (auto& c : center) c = rng.uniform(lo - 1.0, hi + 1.0);
        const double r = rng.uniform(1.0, 2.0 + (hi - lo));
        auto bump = [&](const std::vector<double>& x) {
            double d2 = 0;
            for (size_t i = 0; i < x.size(); ++i) {
                double di = x[i] - center[i];
                d2 += di * di;
            }
            return cplx(std::max(0.0, 1.0 - std::sqrt(d2) / r), 0.0);
        };
        best = std::max(best, std::abs(pair(bump, a) - pair(bump, b)));
    }
    return best;
}

} // namespace ncqft
