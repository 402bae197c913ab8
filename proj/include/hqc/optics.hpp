// optics.hpp — Optical unitaries (coherent, squeezed, beam-splitter, two-mode
// squeeze), the parameter manifold of the Kerr qubit models, and the composite
// family W(lambda) with W(origin) = id.

#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hqc/expm.hpp"
#include "hqc/fock.hpp"
#include "hqc/frame.hpp"

namespace hqc {

// ------------------------------- Model presets -------------------------------

enum class ModelKind { two_qubit, n_qubit };

const char* model_name(ModelKind kind);

// The two_qubit preset is the n = 2 chain with the single (lambda, mu) pair;
// n_qubit generalizes to n modes coupled to mode n.
struct ModelSpec {
    ModelKind kind{ModelKind::two_qubit};
    int       n{2};
    int       cutoff{16};
    long      dim_budget{kDefaultDimBudget};
    double    param_warn_limit{1.0};
    double    param_hard_limit{2.0};

    // Factor order of W; leftmost factor is applied last to states.
    static constexpr const char* factor_order =
        "W = D1 S1 U1 V1 D2 S2 U2 V2 ... Dn Sn (U_j, V_j couple mode j to mode n; absent for j = n)";

    ModeSpace space() const { return make_space(n, cutoff, dim_budget); }
    int       fiber_dim() const { return 1 << n; } // 2^n
};

ModelSpec two_qubit_model(int cutoff);
ModelSpec n_qubit_model(int n, int cutoff); // library accepts n >= 1; the CLI requires n >= 2

// ---------------------------- Real coordinates of M --------------------------

// Coordinates are laid out in factor order, two reals per complex parameter:
//   j = 1..n:   alphaJ_re, alphaJ_im, betaJ_re, betaJ_im,
//   and for j < n additionally lambdaJ_re, lambdaJ_im, muJ_re, muJ_im.
// Total 8n - 4 reals = 2(4n - 2), matching M ~ C^(4n-2).
int         coord_count(const ModelSpec& spec);
std::string coord_name(const ModelSpec& spec, int coord);
int         coord_index(const ModelSpec& spec, const std::string& name); // throws on unknown names

// A point of M, stored as the real coordinate vector above.
struct ParamPoint {
    ModelKind       model{ModelKind::two_qubit};
    int             n{2};
    Eigen::VectorXd coords;
};

ParamPoint origin_point(const ModelSpec& spec);
ParamPoint point_from_coords(const ModelSpec& spec, Eigen::VectorXd coords);
void       require_point_match(const ModelSpec& spec, const ParamPoint& point, const char* what);

// Complex value of the parameter pair owned by coords (2k, 2k+1).
Complex param_value(const ParamPoint& point, int pair_index);

// Returns human-readable warnings for parameters above the warn limit and
// throws ValidationError past the hard limit.
std::vector<std::string> validate_point(const ModelSpec& spec, const ParamPoint& point);

// ------------------------------- Factor chain --------------------------------

enum class FactorKind { displacement, squeeze, beam_splitter, two_mode_squeeze };

// One factor of W; owns the complex parameter with pair index `pair_index`
// (real coordinates 2*pair_index and 2*pair_index + 1).
struct WFactor {
    FactorKind kind;
    int        mode;       // 1-based
    int        partner;    // second mode for two-mode kinds, else 0
    int        pair_index;
};

// D1 S1 U1 V1 D2 S2 ... Dn Sn; the product is taken left to right.
std::vector<WFactor> factor_chain(const ModelSpec& spec);

// Generator of a factor on its local space (cutoff for single-mode kinds,
// cutoff^2 with index n_mode*cutoff + n_partner for two-mode kinds). Exactly
// anti-Hermitian by construction.
Matrix factor_generator(FactorKind kind, int cutoff, Complex param);

// d(generator)/d(re param) or /d(im param); constant in the parameter.
Matrix factor_generator_tangent(FactorKind kind, int cutoff, bool imag_part);

// Conserved-quantity sector labels for number-conserving kinds (empty when the
// generator has no exploited block structure).
std::vector<int> factor_sectors(FactorKind kind, int cutoff);

Matrix factor_local_value(FactorKind kind, int cutoff, Complex param);
std::pair<Matrix, Matrix> factor_local_value_tangent(FactorKind kind, int cutoff,
                                                     Complex param, bool imag_part);

// Place a local factor matrix into the full space.
Matrix embed_factor(const ModeSpace& space, const WFactor& factor, const Matrix& local);

// ------------------------------ Unitary builders -----------------------------

// exp(x) for anti-Hermitian x. The input is symmetrized exactly; inputs whose
// anti-Hermitian defect exceeds 1e-10 * max(1, ||x||) are rejected.
Op expm_antihermitian(const Op& x);

Op displacement(const ModeSpace& space, int mode, Complex alpha);
Op squeeze(const ModeSpace& space, int mode, Complex beta);

// exp(lambda a_i^dag a_j - conj(lambda) a_j^dag a_i); commutes with N_i + N_j exactly.
Op beam_splitter(const ModeSpace& space, int i, int j, Complex lambda);

// exp(mu a_i^dag a_j^dag - conj(mu) a_j a_i); commutes with N_i - N_j exactly.
Op two_mode_squeeze(const ModeSpace& space, int i, int j, Complex mu);

// The full product W(point) in the documented factor order; identity at the origin.
Op composite_w(const ModelSpec& spec, const ParamPoint& point);

// Columns are the qubit basis states |q_1 ... q_n>, q_i in {0,1}, in
// lexicographic order (|0...00>, |0...01>, ..., |1...11>).
Frame vacuum_frame(const ModelSpec& spec);

} // namespace hqc
