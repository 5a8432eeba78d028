#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <vector>

#include "core/lattice.hpp"

// The noncommutative space-time as discrete measures ("fat points") on the
// classical momentum space, and the differential calculus of functionals on
// it. Calculus is restricted to measures supported on a fixed finite support
// set S, where it is a polynomial calculus in the p weight coordinates and
// every identity is exact.

namespace ncqft {

struct SupportSet {
    std::vector<std::vector<double>> points; // p distinct points of R*^d

    int size() const { return static_cast<int>(points.size()); }
    int space_dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
    void validate() const;
    // index of a point, by coordinates; -1 when absent
    int find(const std::vector<double>& x, double tol = 1e-12) const;
};

struct Atom {
    std::vector<double> x;
    double weight = 0;
};

struct DiscreteMeasure {
    std::vector<Atom> atoms;

    double total() const {
        double s = 0;
        for (const auto& a : atoms) s += a.weight;
        return s;
    }
    void validate() const;
};

struct SignedMeasure {
    std::vector<Atom> atoms; // weights may be negative

    double total_variation() const {
        double s = 0;
        for (const auto& a : atoms) s += std::abs(a.weight);
        return s;
    }
};

// <f, mu> = sum of weights times field values
cplx pair(const std::function<cplx(const std::vector<double>&)>& fld,
          const DiscreteMeasure& mu);
cplx pair(const std::function<cplx(const std::vector<double>&)>& fld,
          const SignedMeasure& nu);

DiscreteMeasure delta_embed(const std::vector<double>& psi);

struct ParamPath {
    std::vector<std::vector<double>> samples; // phi(j/N), j = 1..N
};

// atoms at the sampled locations, weight 1/N each, coincident samples merged
DiscreteMeasure path_to_measure(const ParamPath& path);

// weight-vector view of measures supported on S
Eigen::VectorXd to_weights(const SupportSet& S, const DiscreteMeasure& mu);
Eigen::VectorXd to_weights(const SupportSet& S, const SignedMeasure& nu);
DiscreteMeasure measure_from_weights(const SupportSet& S, const Eigen::VectorXd& w);

// --- sparse multivariate polynomials in the weight coordinates ------------------

struct Monomial {
    std::vector<int> exps;
    bool operator<(const Monomial& o) const { return exps < o.exps; }
    bool operator==(const Monomial& o) const { return exps == o.exps; }
};

class Polynomial {
public:
    explicit Polynomial(int vars = 0) : vars_(vars) {}
    static Polynomial constant(int vars, cplx c);
    static Polynomial coordinate(int vars, int i);

    int vars() const { return vars_; }
    int degree() const;
    bool is_zero(double tol = 0.0) const;
    void set(const std::vector<int>& exps, cplx c);
    cplx coeff(const std::vector<int>& exps) const;
    const std::map<Monomial, cplx>& terms() const { return terms_; }

    cplx eval(const Eigen::VectorXd& w) const;
    Polynomial partial(int i) const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(cplx s) const;

    // max |coefficient| of the difference
    double coeff_distance(const Polynomial& o) const;

private:
    int vars_;
    std::map<Monomial, cplx> terms_;
};

// Functional = polynomial in the weight coordinates over S
using Functional = Polynomial;

// cotangent field: values on the points of S
struct CotangentField {
    std::vector<cplx> values;
};

// exact directional derivative d/dt F(mu + t nu) at t = 0
cplx directional_derivative(const Functional& F, const Eigen::VectorXd& mu,
                            const Eigen::VectorXd& nu);

// df_mu with <df_mu, nu> = directional_derivative(F, mu, nu)
CotangentField weak_frechet_derivative(const Functional& F, const Eigen::VectorXd& mu);

// derivative along the delta measure at support point x
cplx partial_x(const Functional& F, const Eigen::VectorXd& mu, int x);

// tangent vector field: a signed measure over S, polynomially dependent on
// the weight coordinates
using TangentField = std::vector<Polynomial>;

// (Delta F)(w) = sum_x Delta_x(w) (d F/d w_x)(w), as a polynomial
Functional tangent_apply(const TangentField& Delta, const Functional& F);

// --- piecewise functionals (locality checks) -------------------------------------

// two polynomial pieces split by a hyperplane normal . w >= threshold
struct PiecewiseFunctional {
    std::vector<double> normal;
    double threshold = 0;
    Polynomial below;
    Polynomial above;

    const Polynomial& active(const Eigen::VectorXd& w) const;
    cplx eval(const Eigen::VectorXd& w) const { return active(w).eval(w); }
    cplx partial_at(int i, const Eigen::VectorXd& w) const {
        return active(w).partial(i).eval(w);
    }
};

cplx tangent_apply_at(const TangentField& Delta, const PiecewiseFunctional& F,
                      const Eigen::VectorXd& w);

// diagnostic bounded-Lipschitz distance estimate over a dictionary of
// Lipschitz test bumps (lower bound on the true metric)
double bl_distance_estimate(const DiscreteMeasure& a, const DiscreteMeasure& b,
                            std::uint64_t seed = 17, int dictionary = 64);

} // namespace ncqft
