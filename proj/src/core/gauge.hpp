#pragma once

#include <memory>

#include "core/fatpoint.hpp"
#include "core/quantize.hpp"

// Gauge geometry over the measure space: connections nabla_x = d_x + A_x(mu)
// with matrix-polynomial coefficient fields, curvature, the smeared
// invariants K1/K2, the action integrand, the extended gauge group action,
// and a surrogate sampler for the fat-point measure together with an
// exploratory partition estimator.

namespace ncqft {

struct GaugeGroupSpec {
    int m = 1;       // representation dimension
    bool su = false; // traceless algebra

    void validate() const {
        if (m < 1) throw ConfigError("gauge.m", "representation dimension must be positive");
    }
    // Ad-invariant bilinear form on the algebra: -tr(ab)
    static double killing(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        return -(a * b).trace().real();
    }
};

// two-point weight depending only on the Minkowski interval of x - y
struct LorentzKernel {
    double sigma = 1.0;

    double interval(const std::vector<double>& x, const std::vector<double>& y) const {
        double s = 0;
        for (size_t i = 0; i < x.size(); ++i) {
            double d = x[i] - y[i];
            s += (i == 0 ? 1.0 : -1.0) * d * d;
        }
        return s;
    }
    double eval(const std::vector<double>& x, const std::vector<double>& y) const {
        double s = interval(x, y);
        return std::exp(-s * s / (sigma * sigma * sigma * sigma));
    }
};

// --- matrix-valued polynomials ----------------------------------------------------

class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(int vars, int rows, int cols) : vars_(vars), rows_(rows), cols_(cols) {}
    static PolyMatrix constant(int vars, const Eigen::MatrixXcd& c);

    int vars() const { return vars_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const std::map<Monomial, Eigen::MatrixXcd>& terms() const { return terms_; }

    void add_term(const std::vector<int>& exps, const Eigen::MatrixXcd& c);
    Eigen::MatrixXcd eval(const Eigen::VectorXd& w) const;
    PolyMatrix partial(int i) const;
    PolyMatrix operator+(const PolyMatrix& o) const;
    PolyMatrix operator*(const PolyMatrix& o) const; // matrix product per term

private:
    int vars_ = 0, rows_ = 0, cols_ = 0;
    std::map<Monomial, Eigen::MatrixXcd> terms_;
};

// vector section of the trivial C^m bundle: an m x 1 matrix polynomial
using VectorSection = PolyMatrix;

// --- gauge transformations -----------------------------------------------------------

// g(w) = V exp(i diag(theta(w))) V^*: the exponential of an algebra-valued
// polynomial with commuting coefficients, so every derivative is exact
struct GaugeTransformation {
    Eigen::MatrixXcd frame;        // unitary V
    std::vector<Polynomial> theta; // real phase polynomials, one per diagonal

    int mdim() const { return static_cast<int>(frame.rows()); }
    Eigen::MatrixXcd value(const Eigen::VectorXd& w) const;
    Eigen::MatrixXcd dvalue(int i, const Eigen::VectorXd& w) const;
    Eigen::MatrixXcd inv_value(const Eigen::VectorXd& w) const;
    Eigen::MatrixXcd inv_dvalue(int i, const Eigen::VectorXd& w) const;
    Eigen::MatrixXcd inv_d2value(int i, int j, const Eigen::VectorXd& w) const;
    double unitarity_defect(const Eigen::VectorXd& w) const;
};

// --- connections -----------------------------------------------------------------------

class Connection {
public:
    virtual ~Connection() = default;
    virtual int points() const = 0;
    virtual int mdim() const = 0;
    // A_x evaluated at the weight point
    virtual Eigen::MatrixXcd A(int x, const Eigen::VectorXd& w) const = 0;
    // d/dw_y of A_x
    virtual Eigen::MatrixXcd dA(int y, int x, const Eigen::VectorXd& w) const = 0;
};

using ConnectionPtr = std::shared_ptr<const Connection>;

class PolyConnection : public Connection {
public:
    std::vector<PolyMatrix> Ax; // one matrix polynomial per support point

    int points() const override { return static_cast<int>(Ax.size()); }
    int mdim() const override { return Ax.empty() ? 0 : Ax[0].rows(); }
    Eigen::MatrixXcd A(int x, const Eigen::VectorXd& w) const override {
        return Ax.at(x).eval(w);
    }
    Eigen::MatrixXcd dA(int y, int x, const Eigen::VectorXd& w) const override {
        return Ax.at(x).partial(y).eval(w);
    }
    // anti-Hermiticity defect over sampled points
    double algebra_defect(const Eigen::VectorXd& w) const;
};

// A'_x = g A_x g^-1 + g d_x(g^-1); covariance is a tested contract, not an
// assumption. broken_sign flips the inhomogeneous term (negative control).
ConnectionPtr gauge_transform_connection(const ConnectionPtr& base,
                                         const GaugeTransformation& g,
                                         bool broken_sign = false);

// (nabla_x f)(mu) = (d_x f)(mu) + A_x(mu) f(mu)
Eigen::VectorXcd nabla_apply(const Connection& conn, int x, const VectorSection& f,
                             const Eigen::VectorXd& w);
// same, for a non-polynomial section given by its value and x-derivative
Eigen::VectorXcd nabla_apply_values(const Connection& conn, int x,
                                    const Eigen::VectorXcd& f_value,
                                    const Eigen::VectorXcd& f_dx,
                                    const Eigen::VectorXd& w);

// F_xy = d_x A_y - d_y A_x + [A_x, A_y]
Eigen::MatrixXcd curvature(const Connection& conn, int x, int y,
                           const Eigen::VectorXd& w);

// || (nabla_x nabla_y - nabla_y nabla_x) f - F_xy f || at the weight point
double commutator_identity_check(const Connection& conn, int x, int y,
                                 const VectorSection& f, const Eigen::VectorXd& w);

// --- invariants -----------------------------------------------------------------------

struct GaugeContext {
    SupportSet S;
    GaugeGroupSpec spec;
    LorentzKernel B;
    double cell = 1.0; // quadrature weight per support point
};

double K1(const Connection& conn, const Eigen::VectorXd& w, const GaugeContext& ctx);
cplx K2(const Connection& conn, const VectorSection& f, const Eigen::VectorXd& w,
        const GaugeContext& ctx);
// K2 assembled from precomputed covariant derivatives (supports sections that
// are not polynomial, e.g. gauge-transformed ones)
cplx K2_from_derivatives(const std::vector<Eigen::VectorXcd>& nf, const GaugeContext& ctx);

// potential V(v) = sum_k c_k (v^* v)^k and source J
struct SourceAndPotential {
    VectorSection J;
    std::vector<double> V_coeffs; // ascending in |v|^2

    cplx V(const Eigen::VectorXcd& v) const {
        double q = v.squaredNorm();
        double acc = 0;
        for (auto it = V_coeffs.rbegin(); it != V_coeffs.rend(); ++it) acc = acc * q + *it;
        return acc;
    }
};

cplx action_integrand(const Connection& conn, const VectorSection& f,
                      const SourceAndPotential& src, const Eigen::VectorXd& w,
                      const GaugeContext& ctx);

// --- surrogate fat-point sampler and partition estimator ------------------------------

struct SamplerConfig {
    int path_len = 4;          // N
    double eps = 1.0;
    std::uint64_t seed = 1;
    // φ-atoms are drawn from the support set when present, else uniformly
    // from the box
    std::vector<double> box_lo, box_hi;
    double y_half_width = 3.0; // auxiliary chain box
};

struct FatSample {
    DiscreteMeasure measure;
    double log_weight = 0; // log |w((eps/2) sum Y_j ^ Y_{j-1})|
    double phase = 0;      // arg of the same
};

FatSample sample_fatpoint_measure(const WeightFunction& W, const SamplerConfig& cfg,
                                  const SupportSet* S, int space_dim,
                                  std::uint64_t sample_index);

struct GaugeConfigPoint {
    ConnectionPtr conn;
    VectorSection f;
};

struct PartitionEstimate {
    cplx value{0, 0};
    double std_error = 0;
    double phase_mass = 0; // mean |importance weight|
    std::uint64_t samples = 0;
};

// W[J] estimator: Monte Carlo fat points against the surrogate measure, the
// declared parameter family integrated by uniform grid average; exploratory
PartitionEstimate partition_estimate(const std::vector<GaugeConfigPoint>& family,
                                     const SourceAndPotential& src,
                                     const GaugeContext& ctx, const WeightFunction& W,
                                     const SamplerConfig& sampler, std::uint64_t samples,
                                     int batches = 25);

} // namespace ncqft
