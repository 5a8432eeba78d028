#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/gauge.hpp"
#include "core/rng.hpp"

using namespace ncqft;

namespace {

SupportSet small_support() {
    SupportSet S;
    S.points = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {-0.5, 0.8}};
    S.validate();
    return S;
}

Eigen::MatrixXcd random_unitary(int m, std::uint64_t seed) {
    CounterRng rng(seed);
    Eigen::MatrixXcd A(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A(i, j) = cplx(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
    Eigen::MatrixXcd Q = qr.householderQ();
    return Q;
}

Eigen::MatrixXcd random_antihermitian(int m, std::uint64_t seed, bool traceless = false) {
    CounterRng rng(seed);
    Eigen::MatrixXcd A(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A(i, j) = cplx(rng.normal(), rng.normal());
    Eigen::MatrixXcd H = 0.5 * (A + A.adjoint());
    if (traceless) H -= (H.trace() / static_cast<double>(m)) *
                        Eigen::MatrixXcd::Identity(m, m);
    return cplx(0, 1) * H;
}

Polynomial random_real_poly(int vars, int deg, std::uint64_t seed) {
    CounterRng rng(seed);
    Polynomial p(vars);
    for (int t = 0; t < 8; ++t) {
        std::vector<int> e(vars, 0);
        int dd = static_cast<int>(rng.uniform_index(deg + 1));
        for (int k = 0; k < dd; ++k) e[rng.uniform_index(vars)] += 1;
        p.set(e, p.coeff(e) + cplx(rng.normal(), 0.0));
    }
    return p;
}

// anti-Hermitian-valued matrix polynomial of degree <= deg
PolyMatrix random_connection_entry(int vars, int m, int deg, std::uint64_t seed) {
    CounterRng rng(seed);
    PolyMatrix A(vars, m, m);
    for (int t = 0; t < 6; ++t) {
        std::vector<int> e(vars, 0);
        int dd = static_cast<int>(rng.uniform_index(deg + 1));
        for (int k = 0; k < dd; ++k) e[rng.uniform_index(vars)] += 1;
        A.add_term(e, random_antihermitian(m, seed * 131 + t));
    }
    return A;
}

std::shared_ptr<PolyConnection> random_poly_connection(int p, int m, int deg,
                                                       std::uint64_t seed) {
    auto conn = std::make_shared<PolyConnection>();
    for (int x = 0; x < p; ++x)
        conn->Ax.push_back(random_connection_entry(p, m, deg, seed + 7 * x));
    return conn;
}

VectorSection random_section(int vars, int m, int deg, std::uint64_t seed) {
    CounterRng rng(seed);
    PolyMatrix f(vars, m, 1);
    for (int t = 0; t < 6; ++t) {
        std::vector<int> e(vars, 0);
        int dd = static_cast<int>(rng.uniform_index(deg + 1));
        for (int k = 0; k < dd; ++k) e[rng.uniform_index(vars)] += 1;
        Eigen::MatrixXcd c(m, 1);
        for (int i = 0; i < m; ++i) c(i, 0) = cplx(rng.normal(), rng.normal());
        f.add_term(e, c);
    }
    return f;
}

GaugeTransformation random_gauge(int vars, int m, std::uint64_t seed) {
    GaugeTransformation g;
    g.frame = random_unitary(m, seed);
    for (int k = 0; k < m; ++k) g.theta.push_back(random_real_poly(vars, 2, seed + 17 * k));
    return g;
}

Eigen::VectorXd interior_point(int p, std::uint64_t seed) {
    CounterRng rng(seed);
    Eigen::VectorXd w(p);
    double tot = 0;
    for (int i = 0; i < p; ++i) {
        w[i] = rng.uniform();
        tot += w[i];
    }
    return w / (tot * 1.8);
}

} // namespace

TEST_CASE("killing form is Ad-invariant") {
    for (int m : {1, 2, 3}) {
        for (std::uint64_t seed = 1; seed < 30; ++seed) {
            auto a = random_antihermitian(m, seed);
            auto b = random_antihermitian(m, seed + 500);
            auto g = random_unitary(m, seed + 900);
            double lhs = GaugeGroupSpec::killing(g * a * g.adjoint(), g * b * g.adjoint());
            double rhs = GaugeGroupSpec::killing(a, b);
            CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("Lorentz kernel: symmetry and boost invariance of the interval") {
    LorentzKernel B{1.3};
    std::vector<double> x{0.4, -0.2}, y{-1.0, 0.7};
    CHECK(B.eval(x, y) == B.eval(y, x));

    // 1+1 boost: t' = t cosh + z sinh, z' = t sinh + z cosh
    for (double chi : {0.3, -0.9, 1.7}) {
        auto boost = [&](const std::vector<double>& v) {
            return std::vector<double>{v[0] * std::cosh(chi) + v[1] * std::sinh(chi),
                                       v[0] * std::sinh(chi) + v[1] * std::cosh(chi)};
        };
        CHECK(std::abs(B.eval(boost(x), boost(y)) - B.eval(x, y)) < 1e-12);
    }
    // depends on x - y only through the interval: translate both
    std::vector<double> xt{x[0] + 2.0, x[1] - 1.0}, yt{y[0] + 2.0, y[1] - 1.0};
    CHECK(std::abs(B.eval(xt, yt) - B.eval(x, y)) < 1e-15);
}

TEST_CASE("nabla: zero connection, constant section, scalar hand check") {
    auto S = small_support();
    const int p = S.size();
    const int m = 2;
    auto w = interior_point(p, 4);

    auto zero_conn = std::make_shared<PolyConnection>();
    for (int x = 0; x < p; ++x) zero_conn->Ax.push_back(PolyMatrix(p, m, m));

    auto f = random_section(p, m, 2, 11);
    for (int x = 0; x < p; ++x) {
        Eigen::VectorXcd lhs = nabla_apply(*zero_conn, x, f, w);
        Eigen::VectorXcd rhs = f.partial(x).eval(w);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-15);
    }

    // constant section: nabla_x f = A_x f
    auto conn = random_poly_connection(p, m, 2, 21);
    Eigen::MatrixXcd cvec(m, 1);
    cvec << cplx(1.0, 0.5), cplx(-0.3, 0.2);
    auto fc = PolyMatrix::constant(p, cvec);
    for (int x = 0; x < p; ++x) {
        Eigen::VectorXcd lhs = nabla_apply(*conn, x, fc, w);
        Eigen::VectorXcd rhs = conn->A(x, w) * Eigen::VectorXcd(cvec.col(0));
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
    }

    // m = 1, A_x = i c: nabla_x f = d_x f + i c f
    auto sc = std::make_shared<PolyConnection>();
    const double cval = 0.7;
    for (int x = 0; x < p; ++x) {
        Eigen::MatrixXcd ic(1, 1);
        ic(0, 0) = cplx(0, cval);
        sc->Ax.push_back(PolyMatrix::constant(p, ic));
    }
    Polynomial lin = Polynomial::coordinate(p, 0) * cplx(2.0) +
                     Polynomial::coordinate(p, 2) * cplx(-1.0);
    PolyMatrix flin(p, 1, 1);
    for (const auto& [mo, c] : lin.terms()) {
        Eigen::MatrixXcd cm(1, 1);
        cm(0, 0) = c;
        flin.add_term(mo.exps, cm);
    }
    Eigen::VectorXcd val = nabla_apply(*sc, 0, flin, w);
    cplx expect = cplx(2.0) + cplx(0, cval) * lin.eval(w);
    CHECK(std::abs(val(0) - expect) < 1e-14);
}

TEST_CASE("curvature: abelian constants vanish, constant noncommuting case, antisymmetry") {
    auto S = small_support();
    const int p = S.size();
    auto w = interior_point(p, 5);

    // m = 1 constant connection: curvature zero
    auto ab = std::make_shared<PolyConnection>();
    for (int x = 0; x < p; ++x) {
        Eigen::MatrixXcd c(1, 1);
        c(0, 0) = cplx(0, 0.3 + 0.1 * x);
        ab->Ax.push_back(PolyMatrix::constant(p, c));
    }
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y)
            CHECK(curvature(*ab, x, y, w).cwiseAbs().maxCoeff() < 1e-15);

    // phi-independent noncommuting connection: F_xy = [A_x, A_y]
    const int m = 3;
    auto cc = std::make_shared<PolyConnection>();
    std::vector<Eigen::MatrixXcd> mats;
    for (int x = 0; x < p; ++x) {
        mats.push_back(random_antihermitian(m, 600 + x));
        cc->Ax.push_back(PolyMatrix::constant(p, mats.back()));
    }
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y) {
            Eigen::MatrixXcd expect = mats[x] * mats[y] - mats[y] * mats[x];
            CHECK((curvature(*cc, x, y, w) - expect).cwiseAbs().maxCoeff() < 1e-13);
        }

    // antisymmetry on random polynomial data
    auto conn = random_poly_connection(p, 2, 2, 31);
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y) {
            Eigen::MatrixXcd fxy = curvature(*conn, x, y, w);
            Eigen::MatrixXcd fyx = curvature(*conn, y, x, w);
            CHECK((fxy + fyx).cwiseAbs().maxCoeff() < 1e-13);
            // curvature lies in the algebra: anti-Hermitian values
            CHECK((fxy + fxy.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        }
}

TEST_CASE("commutator identity: [nabla_x, nabla_y] acts as the curvature") {
    auto S = small_support();
    const int p = S.size();

    auto zero_conn = std::make_shared<PolyConnection>();
    for (int x = 0; x < p; ++x) zero_conn->Ax.push_back(PolyMatrix(p, 2, 2));
    auto f0 = random_section(p, 2, 2, 44);
    auto w = interior_point(p, 6);
    CHECK(commutator_identity_check(*zero_conn, 0, 1, f0, w) < 1e-14);

    CounterRng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        int m = 1 + static_cast<int>(rng.uniform_index(3));
        auto conn = random_poly_connection(p, m, 2, 1000 + trial);
        auto f = random_section(p, m, 2, 2000 + trial);
        auto wp = interior_point(p, 3000 + trial);
        int x = static_cast<int>(rng.uniform_index(p));
        int y = static_cast<int>(rng.uniform_index(p));
        CHECK(commutator_identity_check(*conn, x, y, f, wp) < 1e-9);
    }
}

TEST_CASE("gauge transformation: constants, covariance contract, broken law detected") {
    auto S = small_support();
    const int p = S.size();
    const int m = 2;
    auto w = interior_point(p, 8);

    // constant g, A = 0 -> A' = 0
    GaugeTransformation gconst;
    gconst.frame = random_unitary(m, 71);
    for (int k = 0; k < m; ++k)
        gconst.theta.push_back(Polynomial::constant(p, cplx(0.3 + 0.2 * k, 0)));
    auto zero_conn = std::make_shared<PolyConnection>();
    for (int x = 0; x < p; ++x) zero_conn->Ax.push_back(PolyMatrix(p, m, m));
    auto t0 = gauge_transform_connection(zero_conn, gconst);
    for (int x = 0; x < p; ++x) CHECK(t0->A(x, w).cwiseAbs().maxCoeff() < 1e-13);

    // constant g on a general connection -> g A g^-1
    auto conn = random_poly_connection(p, m, 2, 81);
    auto tc = gauge_transform_connection(conn, gconst);
    Eigen::MatrixXcd gv = gconst.value(w);
    for (int x = 0; x < p; ++x) {
        Eigen::MatrixXcd expect = gv * conn->A(x, w) * gv.adjoint();
        CHECK((tc->A(x, w) - expect).cwiseAbs().maxCoeff() < 1e-12);
    }

    // covariance contract nabla'_x (g f) = g nabla_x f on random data
    auto g = random_gauge(p, m, 91);
    CHECK(g.unitarity_defect(w) < 1e-10);
    auto tg = gauge_transform_connection(conn, g);
    auto f = random_section(p, m, 2, 92);
    for (int x = 0; x < p; ++x) {
        Eigen::VectorXcd gf = g.value(w) * f.eval(w);
        Eigen::VectorXcd dgf =
            g.dvalue(x, w) * f.eval(w) + g.value(w) * f.partial(x).eval(w);
        Eigen::VectorXcd lhs = nabla_apply_values(*tg, x, gf, dgf, w);
        Eigen::VectorXcd rhs = g.value(w) * nabla_apply(*conn, x, f, w);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    }

    // curvature transforms by conjugation
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y) {
            Eigen::MatrixXcd lhs = curvature(*tg, x, y, w);
            Eigen::MatrixXcd rhs =
                g.value(w) * curvature(*conn, x, y, w) * g.inv_value(w);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
        }

    // the deliberately broken law violates covariance
    auto tb = gauge_transform_connection(conn, g, true);
    double worst = 0;
    for (int x = 0; x < p; ++x) {
        Eigen::VectorXcd gf = g.value(w) * f.eval(w);
        Eigen::VectorXcd dgf =
            g.dvalue(x, w) * f.eval(w) + g.value(w) * f.partial(x).eval(w);
        Eigen::VectorXcd lhs = nabla_apply_values(*tb, x, gf, dgf, w);
        Eigen::VectorXcd rhs = g.value(w) * nabla_apply(*conn, x, f, w);
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    CHECK(worst > 1e-4);
}

TEST_CASE("K1 and K2: zeros and gauge invariance") {
    auto S = small_support();
    const int p = S.size();
    GaugeContext ctx{S, GaugeGroupSpec{2, false}, LorentzKernel{1.5}, 1.0};
    auto w = interior_point(p, 12);

    // A = 0 -> K1 = 0; constant abelian connection -> K1 = 0
    auto zero_conn = std::make_shared<PolyConnection>();
    for (int x = 0; x < p; ++x) zero_conn->Ax.push_back(PolyMatrix(p, 2, 2));
    CHECK(std::abs(K1(*zero_conn, w, ctx)) < 1e-15);

    GaugeContext ctx1{S, GaugeGroupSpec{1, false}, LorentzKernel{1.5}, 1.0};
    auto ab = std::make_shared<PolyConnection>();
    for (int x = 0; x < p; ++x) {
        Eigen::MatrixXcd c(1, 1);
        c(0, 0) = cplx(0, 0.2 * x);
        ab->Ax.push_back(PolyMatrix::constant(p, c));
    }
    CHECK(std::abs(K1(*ab, w, ctx1)) < 1e-15);

    // f = 0 -> K2 = 0; A = 0 and constant f -> K2 = 0
    VectorSection zf(p, 2, 1);
    auto conn = random_poly_connection(p, 2, 2, 201);
    CHECK(std::abs(K2(*conn, zf, w, ctx)) < 1e-15);
    Eigen::MatrixXcd cvec(2, 1);
    cvec << cplx(0.4, 0.1), cplx(-0.2, 0.9);
    CHECK(std::abs(K2(*zero_conn, PolyMatrix::constant(p, cvec), w, ctx)) < 1e-15);

    // gauge invariance of K1 and of K2 under the joint transformation
    for (int m : {1, 2, 3}) {
        GaugeContext c2{S, GaugeGroupSpec{m, false}, LorentzKernel{1.5}, 1.0};
        auto base = random_poly_connection(p, m, 2, 300 + m);
        auto f = random_section(p, m, 2, 400 + m);
        auto g = random_gauge(p, m, 500 + m);
        auto tg = gauge_transform_connection(base, g);

        double k1a = K1(*base, w, c2);
        double k1b = K1(*tg, w, c2);
        CHECK(std::abs(k1a - k1b) < 1e-8 * (1.0 + std::abs(k1a)));

        cplx k2a = K2(*base, f, w, c2);
        std::vector<Eigen::VectorXcd> nf(p);
        for (int x = 0; x < p; ++x) {
            Eigen::VectorXcd gf = g.value(w) * f.eval(w);
            Eigen::VectorXcd dgf =
                g.dvalue(x, w) * f.eval(w) + g.value(w) * f.partial(x).eval(w);
            nf[x] = nabla_apply_values(*tg, x, gf, dgf, w);
        }
        cplx k2b = K2_from_derivatives(nf, c2);
        CHECK(std::abs(k2a - k2b) < 1e-8 * (1.0 + std::abs(k2a)));
    }
}

TEST_CASE("action integrand: zero data, K1 + K2 reduction, joint invariance") {
    auto S = small_support();
    const int p = S.size();
    const int m = 2;
    GaugeContext ctx{S, GaugeGroupSpec{m, false}, LorentzKernel{1.2}, 1.0};
    auto w = interior_point(p, 31);

    auto zero_conn = std::make_shared<PolyConnection>();
    for (int x = 0; x < p; ++x) zero_conn->Ax.push_back(PolyMatrix(p, m, m));
    VectorSection zf(p, m, 1);
    SourceAndPotential zsrc{PolyMatrix(p, m, 1), {}};
    CHECK(std::abs(action_integrand(*zero_conn, zf, zsrc, w, ctx)) == 0.0);

    // J = 0, V = 0: K1 + K2
    auto conn = random_poly_connection(p, m, 2, 601);
    auto f = random_section(p, m, 2, 602);
    cplx act = action_integrand(*conn, f, zsrc, w, ctx);
    CHECK(std::abs(act - (cplx(K1(*conn, w, ctx), 0) + K2(*conn, f, w, ctx))) < 1e-12);

    // joint invariance with transformed (A, f, J) and invariant V
    SourceAndPotential src{random_section(p, m, 1, 603), {0.0, 0.7, -0.1}};
    auto g = random_gauge(p, m, 604);
    auto tg = gauge_transform_connection(conn, g);
    cplx lhs = action_integrand(*conn, f, src, w, ctx);
    // transformed side, assembled from values
    std::vector<Eigen::VectorXcd> nf(p);
    for (int x = 0; x < p; ++x) {
        Eigen::VectorXcd gf = g.value(w) * f.eval(w);
        Eigen::VectorXcd dgf =
            g.dvalue(x, w) * f.eval(w) + g.value(w) * f.partial(x).eval(w);
        nf[x] = nabla_apply_values(*tg, x, gf, dgf, w);
    }
    Eigen::VectorXcd gf = g.value(w) * f.eval(w);
    Eigen::VectorXcd gJ = g.value(w) * src.J.eval(w).col(0);
    cplx rhs = cplx(K1(*tg, w, ctx), 0) + K2_from_derivatives(nf, ctx) + src.V(gf) -
               gJ.dot(gf);
    CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(lhs)));
}

TEST_CASE("fat-point sampler: eps = 0 weights, single atoms, determinism") {
    LatticeSpec spec{9, 0.7, 3};
    auto W = gaussian_weight(spec, 1, 1.0);
    auto S = small_support();

    SamplerConfig cfg;
    cfg.path_len = 5;
    cfg.eps = 0.0;
    cfg.seed = 42;
    for (std::uint64_t k = 0; k < 20; ++k) {
        auto smp = sample_fatpoint_measure(W, cfg, &S, S.space_dim(), k);
        CHECK(std::abs(smp.log_weight) < 1e-12); // |w(0)| = 1
        CHECK(std::abs(smp.phase) < 1e-12);
        CHECK(smp.measure.total() == doctest::Approx(1.0));
    }

    cfg.eps = 1.0;
    cfg.path_len = 1;
    auto single = sample_fatpoint_measure(W, cfg, &S, S.space_dim(), 3);
    CHECK(single.measure.atoms.size() == 1);
    CHECK(std::abs(single.log_weight) < 1e-12); // no auxiliary chain at N = 1

    // bit-identical reproducibility
    cfg.path_len = 6;
    auto a = sample_fatpoint_measure(W, cfg, &S, S.space_dim(), 9);
    auto b = sample_fatpoint_measure(W, cfg, &S, S.space_dim(), 9);
    REQUIRE(a.measure.atoms.size() == b.measure.atoms.size());
    CHECK(a.log_weight == b.log_weight);
    CHECK(a.phase == b.phase);
    for (size_t i = 0; i < a.measure.atoms.size(); ++i) {
        CHECK(a.measure.atoms[i].x == b.measure.atoms[i].x);
        CHECK(a.measure.atoms[i].weight == b.measure.atoms[i].weight);
    }

    // box mode draws inside the box
    SamplerConfig boxcfg;
    boxcfg.path_len = 4;
    boxcfg.eps = 0.5;
    boxcfg.box_lo = {-2.0, -2.0};
    boxcfg.box_hi = {2.0, 2.0};
    auto bs = sample_fatpoint_measure(W, boxcfg, nullptr, 2, 5);
    for (const auto& at : bs.measure.atoms)
        for (double c : at.x) CHECK(std::abs(c) <= 2.0);
}

TEST_CASE("partition estimator: zero action is exactly one; J-linearity quadrature") {
    auto S = small_support();
    const int p = S.size();
    const int m = 1;
    GaugeContext ctx{S, GaugeGroupSpec{m, false}, LorentzKernel{1.0}, 1.0};
    LatticeSpec spec{9, 0.7, 3};
    auto W = gaussian_weight(spec, 1, 1.0);
    SamplerConfig cfg;
    cfg.path_len = 3;
    cfg.eps = 1.0;
    cfg.seed = 7;

    auto zero_conn = std::make_shared<PolyConnection>();
    for (int x = 0; x < p; ++x) zero_conn->Ax.push_back(PolyMatrix(p, m, m));
    std::vector<GaugeConfigPoint> family;
    for (int g = 0; g < 3; ++g) family.push_back({zero_conn, VectorSection(p, m, 1)});
    SourceAndPotential zsrc{PolyMatrix(p, m, 1), {}};

    auto est = partition_estimate(family, zsrc, ctx, W, cfg, 400);
    CHECK(est.value.real() == 1.0);
    CHECK(est.value.imag() == 0.0);
    CHECK(est.std_error == 0.0);

    // V = 0, A = 0, one-parameter family f_theta = theta * f0: the estimator
    // equals the direct quadrature over the family grid computed from the
    // same samples
    auto f0 = random_section(p, m, 1, 900);
    SourceAndPotential src{random_section(p, m, 1, 901), {}};
    std::vector<GaugeConfigPoint> fam;
    std::vector<double> thetas{0.2, 0.5, 0.8, 1.1};
    for (double th : thetas) {
        PolyMatrix fs(p, m, 1);
        for (const auto& [mo, c] : f0.terms()) fs.add_term(mo.exps, th * c);
        fam.push_back({zero_conn, fs});
    }
    const std::uint64_t M = 600;
    auto est2 = partition_estimate(fam, src, ctx, W, cfg, M);
    cplx direct(0);
    for (size_t gidx = 0; gidx < fam.size(); ++gidx) {
        cplx Shat(0);
        for (std::uint64_t k = 0; k < M; ++k) {
            auto smp = sample_fatpoint_measure(W, cfg, &S, S.space_dim(), k);
            Eigen::VectorXd wv = to_weights(S, smp.measure);
            cplx nu = std::exp(smp.log_weight) * std::polar(1.0, smp.phase);
            direct += cplx(0); // keep loop structure obvious
            Shat += action_integrand(*fam[gidx].conn, fam[gidx].f, src, wv, ctx) * nu;
        }
        direct += std::exp(cplx(0, 1) * (Shat / static_cast<double>(M)));
    }
    direct /= static_cast<double>(fam.size());
    CHECK(std::abs(est2.value - direct) < 1e-12);
    CHECK(est2.std_error > 0.0);
    CHECK(est2.phase_mass > 0.0);

    // reproducibility
    auto est3 = partition_estimate(fam, src, ctx, W, cfg, M);
    CHECK(est2.value == est3.value);
    CHECK(est2.std_error == est3.std_error);
}
