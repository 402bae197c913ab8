#include "hqc/connection.hpp"

#include <algorithm>
#include <cmath>

namespace hqc {

Op kerr_hamiltonian(const ModelSpec& spec) {
    const ModeSpace space = spec.space();
    Op h = Op::zero(space);
    for (long idx = 0; idx < space.dim; ++idx) {
        long rest = idx;
        double e = 0.0;
        for (int m = 0; m < space.n_modes; ++m) {
            const double n = static_cast<double>(rest % space.cutoff);
            e += n * (n - 1.0);
            rest /= space.cutoff;
        }
        h.mat(idx, idx) = e;
    }
    return h;
}

Frame degenerate_kernel(const Op& h0, double tol) {
    const ModeSpace& space = h0.space;
    const long expected = 1L << space.n_modes;

    const double offdiag =
        (h0.mat - Matrix(h0.mat.diagonal().asDiagonal())).cwiseAbs().maxCoeff();

    Matrix cols;
    long count = 0;
    if (offdiag == 0.0) {
        // Exact-diagonal path (the Kerr case): pick zero-diagonal basis states in
        // ascending index order, which is the lexicographic qubit order.
        std::vector<long> kernel;
        for (long idx = 0; idx < space.dim; ++idx) {
            if (std::abs(h0.mat(idx, idx)) < tol) kernel.push_back(idx);
        }
        count = static_cast<long>(kernel.size());
        if (count == expected) {
            cols = Matrix::Zero(space.dim, count);
            for (long c = 0; c < count; ++c) cols(kernel[static_cast<std::size_t>(c)], c) = 1.0;
        }
    } else {
        if ((h0.mat - h0.mat.adjoint()).norm() > 1e-10 * std::max(1.0, h0.mat.norm())) {
            throw ValidationError("degenerate_kernel: operator must be Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(h0.mat);
        std::vector<long> kernel;
        for (long i = 0; i < space.dim; ++i) {
            if (std::abs(solver.eigenvalues()(i)) < tol) kernel.push_back(i);
        }
        count = static_cast<long>(kernel.size());
        if (count == expected) {
            cols = Matrix::Zero(space.dim, count);
            for (long c = 0; c < count; ++c) {
                cols.col(c) = solver.eigenvectors().col(kernel[static_cast<std::size_t>(c)]);
            }
        }
    }

    if (count != expected) {
        throw ValidationError("degenerate_kernel: kernel dimension " + std::to_string(count) +
                              " does not match the model's 2^n = " + std::to_string(expected));
    }
    return Frame{space, std::move(cols)};
}

Op isospectral_hamiltonian(const ModelSpec& spec, const ParamPoint& point) {
    const Op w = composite_w(spec, point);
    const Op h0 = kerr_hamiltonian(spec);
    return Op{w.space, w.mat * h0.mat * w.mat.adjoint()};
}

Projector projector_at(const ModelSpec& spec, const ParamPoint& point) {
    const Op w = composite_w(spec, point);
    const Matrix wv = w.mat * vacuum_frame(spec).columns;
    return Projector{w.space, wv * wv.adjoint()};
}

// ------------------------------- dW / d coord --------------------------------

namespace {

struct FactorMatrices {
    std::vector<Matrix> values; // embedded factor values, in chain order
};

FactorMatrices embedded_factors(const ModelSpec& spec, const ParamPoint& point) {
    const ModeSpace space = spec.space();
    FactorMatrices out;
    for (const WFactor& f : factor_chain(spec)) {
        out.values.push_back(embed_factor(
            space, f, factor_local_value(f.kind, space.cutoff, param_value(point, f.pair_index))));
    }
    return out;
}

Matrix embedded_factor_tangent(const ModelSpec& spec, const ParamPoint& point,
                               const WFactor& f, bool imag_part) {
    const ModeSpace space = spec.space();
    auto [value, tangent] = factor_local_value_tangent(
        f.kind, space.cutoff, param_value(point, f.pair_index), imag_part);
    (void)value;
    return embed_factor(space, f, tangent);
}

} // namespace

Op w_partial(const ModelSpec& spec, const ParamPoint& point, int coord) {
    require_point_match(spec, point, "w_partial");
    if (coord < 0 || coord >= coord_count(spec)) {
        throw ValidationError("w_partial: coordinate id out of range");
    }
    const ModeSpace space = spec.space();
    const std::vector<WFactor> chain = factor_chain(spec);
    const int k = coord / 2;
    const FactorMatrices f = embedded_factors(spec, point);

    Matrix left = Matrix::Identity(space.dim, space.dim);
    for (int i = 0; i < k; ++i) left = left * f.values[static_cast<std::size_t>(i)];
    Matrix right = Matrix::Identity(space.dim, space.dim);
    for (int i = k + 1; i < static_cast<int>(chain.size()); ++i) {
        right = right * f.values[static_cast<std::size_t>(i)];
    }
    const Matrix dfk =
        embedded_factor_tangent(spec, point, chain[static_cast<std::size_t>(k)], coord % 2 != 0);
    return Op{space, left * dfk * right};
}

std::vector<Op> w_partials(const ModelSpec& spec, const ParamPoint& point) {
    require_point_match(spec, point, "w_partials");
    const ModeSpace space = spec.space();
    const std::vector<WFactor> chain = factor_chain(spec);
    const FactorMatrices f = embedded_factors(spec, point);
    const std::size_t nk = chain.size();

    std::vector<Matrix> prefix(nk + 1), suffix(nk + 1);
    prefix[0] = Matrix::Identity(space.dim, space.dim);
    for (std::size_t i = 0; i < nk; ++i) prefix[i + 1] = prefix[i] * f.values[i];
    suffix[nk] = Matrix::Identity(space.dim, space.dim);
    for (std::size_t i = nk; i-- > 0;) suffix[i] = f.values[i] * suffix[i + 1];

    std::vector<Op> out;
    out.reserve(static_cast<std::size_t>(coord_count(spec)));
    for (int coord = 0; coord < coord_count(spec); ++coord) {
        const std::size_t k = static_cast<std::size_t>(coord / 2);
        const Matrix dfk = embedded_factor_tangent(spec, point, chain[k], coord % 2 != 0);
        out.push_back(Op{space, prefix[k] * (dfk * suffix[k + 1])});
    }
    return out;
}

// ---------------------------- ConnectionEvaluator ----------------------------

ConnectionEvaluator::ConnectionEvaluator(const ModelSpec& spec)
    : ConnectionEvaluator(spec, vacuum_frame(spec)) {}

ConnectionEvaluator::ConnectionEvaluator(const ModelSpec& spec, Frame frame)
    : spec_(spec), frame_(std::move(frame)), chain_(factor_chain(spec)) {
    if (!(frame_.space == spec.space())) {
        throw ValidationError("ConnectionEvaluator: frame lives on a different space");
    }
    slots_.resize(chain_.size());
    suffix_.resize(chain_.size() + 1);
}

void ConnectionEvaluator::refresh(const ParamPoint& point) {
    require_point_match(spec_, point, "ConnectionEvaluator");
    const ModeSpace space = spec_.space();
    for (std::size_t k = 0; k < chain_.size(); ++k) {
        Slot& slot = slots_[k];
        const Complex param = param_value(point, chain_[k].pair_index);
        if (slot.valid && slot.param == param) continue;
        slot.param = param;
        slot.value = embed_factor(space, chain_[k],
                                  factor_local_value(chain_[k].kind, space.cutoff, param));
        slot.has_deriv = {false, false};
        slot.valid = true;
    }
    // Suffix frame chains: suffix_[k] = F_k ... F_K V.
    suffix_[chain_.size()] = frame_.columns;
    for (std::size_t k = chain_.size(); k-- > 0;) {
        suffix_[k] = slots_[k].value * suffix_[k + 1];
    }
}

const Matrix& ConnectionEvaluator::derivative(int factor, int part) {
    Slot& slot = slots_[static_cast<std::size_t>(factor)];
    if (!slot.has_deriv[static_cast<std::size_t>(part)]) {
        const ModeSpace space = spec_.space();
        auto [value, tangent] = factor_local_value_tangent(
            chain_[static_cast<std::size_t>(factor)].kind, space.cutoff, slot.param, part != 0);
        (void)value;
        slot.deriv[static_cast<std::size_t>(part)] =
            embed_factor(space, chain_[static_cast<std::size_t>(factor)], tangent);
        slot.has_deriv[static_cast<std::size_t>(part)] = true;
    }
    return slot.deriv[static_cast<std::size_t>(part)];
}

std::vector<Matrix> ConnectionEvaluator::components(const ParamPoint& point,
                                                    std::span<const int> coords) {
    refresh(point);
    std::vector<Matrix> out;
    out.reserve(coords.size());
    const Matrix& wv = suffix_[0]; // W V
    for (const int coord : coords) {
        if (coord < 0 || coord >= coord_count(spec_)) {
            throw ValidationError("connection component: coordinate id out of range");
        }
        const int k = coord / 2;
        // (d_mu W) V = F_1 ... F_{k-1} (dF_k) F_{k+1} ... F_K V
        Matrix x = derivative(k, coord % 2) * suffix_[static_cast<std::size_t>(k) + 1];
        for (int i = k - 1; i >= 0; --i) x = slots_[static_cast<std::size_t>(i)].value * x;
        out.push_back(wv.adjoint() * x);
    }
    return out;
}

Matrix ConnectionEvaluator::component(const ParamPoint& point, int coord) {
    const int ids[1] = {coord};
    return components(point, ids)[0];
}

ConnectionSample ConnectionEvaluator::sample(const ParamPoint& point) {
    std::vector<int> ids(static_cast<std::size_t>(coord_count(spec_)));
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    return ConnectionSample{point, components(point, ids)};
}

ConnectionSample connection_at(const ModelSpec& spec, const ParamPoint& point) {
    ConnectionEvaluator evaluator(spec);
    return evaluator.sample(point);
}

ConnectionSample connection_at(const ModelSpec& spec, const ParamPoint& point,
                               const Frame& frame) {
    ConnectionEvaluator evaluator(spec, frame);
    return evaluator.sample(point);
}

// --------------------------------- Curvature ---------------------------------

namespace {

// Richardson-extrapolated central difference of a single connection component.
Matrix coord_derivative(ConnectionEvaluator& ev, const ParamPoint& point,
                        int along, int of, double h) {
    auto shifted = [&](double delta) {
        ParamPoint p = point;
        p.coords(along) += delta;
        return ev.component(p, of);
    };
    const Matrix d_h = (shifted(h) - shifted(-h)) / (2.0 * h);
    const Matrix d_h2 = (shifted(h / 2.0) - shifted(-h / 2.0)) / h;
    return (4.0 * d_h2 - d_h) / 3.0;
}

} // namespace

CurvatureSample curvature_at(ConnectionEvaluator& ev, const ParamPoint& point,
                             int mu, int nu, double step) {
    if (mu == nu) throw ValidationError("curvature_at: coordinate pair is degenerate (mu == nu)");
    if (step <= 0.0) throw ValidationError("curvature_at: step must be positive");
    const int ids[2] = {mu, nu};
    const std::vector<Matrix> a = ev.components(point, ids);
    const Matrix dmu_anu = coord_derivative(ev, point, mu, nu, step);
    const Matrix dnu_amu = coord_derivative(ev, point, nu, mu, step);
    Matrix f = dmu_anu - dnu_amu + a[0] * a[1] - a[1] * a[0];
    return CurvatureSample{point, mu, nu, std::move(f)};
}

CurvatureSample curvature_at(const ModelSpec& spec, const ParamPoint& point,
                             int mu, int nu, double step) {
    ConnectionEvaluator evaluator(spec);
    return curvature_at(evaluator, point, mu, nu, step);
}

} // namespace hqc
