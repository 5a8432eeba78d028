#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/group.hpp"
#include "core/lattice.hpp"

// Harmonic analysis on the lattice models of G_0 and G_eps.
//
// Commutative side: the plain multidimensional DFT against the characters
// exp i(phi(X) + Phi(A)), unitary between the Haar and dual conventions.
//
// Noncommutative side: operator-valued transforms against explicit unitary
// irreducible representations. Labels with nondegenerate skew form Phi carry
// a Hilbert-Schmidt fiber; the representation is a Schrodinger-type model
// fixed by a pivoted Darboux factorization of Phi (translation along the
// chosen Lagrangian coordinates, modulation along the complementary ones,
// central phase exp(i Phi(A))). The finite-cyclic model uses clock-and-shift
// generators and is exact in modular arithmetic; the continuum model uses a
// truncated Hermite basis.

namespace ncqft {

struct RepSpec {
    int fiber_modes = 16;      // Hermite modes per Darboux pair (continuum)
    int phi_quad = 6;          // quadrature points per Phi axis (continuum)
    double phi_box = 3.0;      // Phi-quadrature box half-width
    double phi_excl = 0.3;     // excluded neighborhood of det Phi = 0
    std::string convention = "schrodinger-darboux-v1";

    void validate() const {
        if (fiber_modes < 2) throw ConfigError("rep.fiber_dim", "need at least 2 modes");
        if (phi_quad < 1) throw ConfigError("rep.phi_quad", "need at least 1 point");
        if (phi_box <= 0) throw ConfigError("rep.phi_box", "box must be positive");
        if (phi_excl < 0 || phi_excl >= phi_box)
            throw ConfigError("rep.phi_excl", "exclusion must lie inside the box");
    }
};

// Skew-symmetric bilinear form encoded by its m = d(d-1)/2 upper components
// in lexicographic (i, j) order.
struct SkewForm {
    std::vector<double> comps;

    int dim() const; // d recovered from m
    Eigen::MatrixXd matrix() const;
    double pfaffian() const;
    double det() const { double p = pfaffian(); return p * p; }
    bool is_symplectic(double tol = 1e-12) const { return std::abs(pfaffian()) > tol; }
    // pairing with a wedge vector A
    double pair(const std::vector<double>& a) const;
};

long long pfaffian_mod(const std::vector<long long>& comps, int d, long long p);
long long skew_pair_mod(const std::vector<long long>& comps,
                        const std::vector<long long>& a, long long n);

struct IrrepLabel {
    bool character = false;
    // finite model coordinates (integers mod n); empty in the continuum model
    std::vector<long long> zphi, zPhi;
    // continuum coordinates
    std::vector<double> rphi;
    SkewForm Phi;
    int fiber_dim = 1;
};

struct DualPoint {
    std::vector<double> phi; // d entries
    std::vector<double> Phi; // m entries
};

// exp i(phi(X) + Phi(A)); modulus one by construction
cplx character_eval(const DualPoint& pt, const RElement& g);
cplx character_eval_finite(const std::vector<long long>& phi,
                           const std::vector<long long>& Phi, const ZElement& g, int n);

// --- commutative transform ---------------------------------------------------

DualField fourier0(const LatticeField& f);
LatticeField fourier0_inv(const DualField& u);

// --- label sets and the operator-valued transform ----------------------------

class LabelSet {
public:
    GroupParams params;
    LatticeSpec spec;
    RepSpec rep;
    std::vector<IrrepLabel> labels;
    std::vector<double> base_weight; // model weight before calibration
    double calibration = 1.0;

    double weight(size_t i) const { return calibration * base_weight[i]; }
    size_t size() const { return labels.size(); }

    // cached rho0(X) over the n^d base sites, per label (identity for characters)
    const std::vector<Eigen::MatrixXcd>& rho0_table(size_t label_index) const;

private:
    mutable std::vector<std::vector<Eigen::MatrixXcd>> cache_;
};

using LabelSetPtr = std::shared_ptr<LabelSet>;

// Enumerates the sampled dual: finite-cyclic d = 2 lists all characters plus
// all nondegenerate Phi (exact finite Plancherel); the continuum model lists
// the midpoint Phi-quadrature grid away from det Phi = 0 (characters carry no
// Plancherel mass there and are not sampled).
LabelSetPtr make_label_set(const GroupParams& p, const LatticeSpec& spec, const RepSpec& rep);

// Plancherel weight of a single label under the model conventions (before
// calibration): zero for continuum characters, sqrt(det Phi) times the
// quadrature cell for continuum symplectic labels, exact finite-group weights
// (dim / |G|) in the finite-cyclic model.
double plancherel_base_weight(const GroupParams& p, const LatticeSpec& spec,
                              const RepSpec& rep, const IrrepLabel& label);

// Full representation matrix rho(X, A).
Eigen::MatrixXcd rep_matrix(const LabelSet& L, size_t label_index, const RElement& g);
Eigen::MatrixXcd rep_matrix(const LabelSet& L, size_t label_index, const ZElement& g);

struct OperatorField {
    LabelSetPtr labels;
    std::vector<Eigen::MatrixXcd> fibers;

    static OperatorField zeros(const LabelSetPtr& L);
    static OperatorField identity(const LabelSetPtr& L); // 1_eps

    OperatorField& operator+=(const OperatorField& o);
    OperatorField& operator*=(cplx s);
    double hs_norm() const; // sqrt(<F,F>)
};

OperatorField fourierE(const LatticeField& f, const LabelSetPtr& L);
LatticeField fourierE_inv(const OperatorField& F);

// fiberwise product (the transform side of twisted convolution)
OperatorField fiber_product(const OperatorField& a, const OperatorField& b);

cplx hs_inner(const OperatorField& a, const OperatorField& b);

// --- twisted convolution ------------------------------------------------------

LatticeField twisted_convolve(const LatticeField& h1, const LatticeField& h2,
                              const GroupParams& p);
LatticeField twisted_convolve(const std::vector<LatticeField>& hs, const GroupParams& p);

// delta at the group identity, normalized to be the convolution unit
LatticeField delta_identity(const LatticeSpec& spec);

// --- calibration ---------------------------------------------------------------

// Fixes the Plancherel calibration constant so that Parseval holds on the
// given reference function; returns the constant.
double calibrate_plancherel(LabelSet& L, const LatticeField& reference);

} // namespace ncqft
