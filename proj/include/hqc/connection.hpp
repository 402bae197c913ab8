// connection.hpp — Kerr reference Hamiltonian, degenerate vacuum frame,
// isospectral family, projector P(lambda), the canonical connection
// A = <vac| W^-1 dW |vac> and its curvature F = dA + A^A.

#pragma once

#include <memory>
#include <optional>
#include <span>

#include "hqc/optics.hpp"

namespace hqc {

// Diagonal sum_i N_i (N_i - 1) (hbar = X = 1).
Op kerr_hamiltonian(const ModelSpec& spec);

// Orthonormal frame of the |eigenvalue| < tol eigenspace of h0. For the Kerr
// models this is exactly the qubit basis in lexicographic order. Throws when
// the kernel dimension differs from 2^n_modes.
Frame degenerate_kernel(const Op& h0, double tol = 1e-9);

// W(point) H0 W(point)^dag; W^-1 is always taken as the adjoint.
Op isospectral_hamiltonian(const ModelSpec& spec, const ParamPoint& point);

// W V V^dag W^dag with V the vacuum frame.
Projector projector_at(const ModelSpec& spec, const ParamPoint& point);

// dW/d(coord) by the product rule over W's factors; each factor derivative is
// the directional derivative of its exponential (block-augmented form).
Op w_partial(const ModelSpec& spec, const ParamPoint& point, int coord);

// All coordinates at once, sharing the prefix/suffix factor products.
std::vector<Op> w_partials(const ModelSpec& spec, const ParamPoint& point);

// ------------------------------ Connection form ------------------------------

struct ConnectionSample {
    ParamPoint          point;
    std::vector<Matrix> components; // m x m, indexed by real coordinate
};

struct CurvatureSample {
    ParamPoint point;
    int        mu{0};
    int        nu{1};
    Matrix     f; // m x m
};

// Evaluates A_mu = V^dag W^dag (d_mu W) V by applying the factor chain to the
// frame columns; caches factor values and derivatives keyed on their complex
// parameter, so paths that vary few coordinates rebuild only what changed.
// Not thread-safe across concurrent calls; use one evaluator per thread.
class ConnectionEvaluator {
public:
    explicit ConnectionEvaluator(const ModelSpec& spec);
    ConnectionEvaluator(const ModelSpec& spec, Frame frame);

    const ModelSpec& spec() const { return spec_; }
    const Frame&     frame() const { return frame_; }

    Matrix              component(const ParamPoint& point, int coord);
    std::vector<Matrix> components(const ParamPoint& point, std::span<const int> coords);
    ConnectionSample    sample(const ParamPoint& point);

private:
    void refresh(const ParamPoint& point);
    const Matrix& derivative(int factor, int part);

    ModelSpec            spec_;
    Frame                frame_;
    std::vector<WFactor> chain_;

    struct Slot {
        bool                valid{false};
        Complex             param{0.0, 0.0};
        Matrix              value; // embedded, dim x dim
        std::array<bool, 2> has_deriv{false, false};
        std::array<Matrix, 2> deriv; // embedded tangents
    };
    std::vector<Slot>   slots_;
    std::vector<Matrix> suffix_; // suffix_[k] = F_k ... F_K * V frame columns
};

ConnectionSample connection_at(const ModelSpec& spec, const ParamPoint& point);
ConnectionSample connection_at(const ModelSpec& spec, const ParamPoint& point, const Frame& frame);

// F_mu_nu = d_mu A_nu - d_nu A_mu + [A_mu, A_nu]; the partial derivatives use
// Richardson-extrapolated central differences of the connection with the given
// step. Throws on mu == nu.
CurvatureSample curvature_at(const ModelSpec& spec, const ParamPoint& point,
                             int mu, int nu, double step = 1e-4);
CurvatureSample curvature_at(ConnectionEvaluator& evaluator, const ParamPoint& point,
                             int mu, int nu, double step = 1e-4);

} // namespace hqc
