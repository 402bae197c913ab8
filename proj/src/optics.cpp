#include "hqc/optics.hpp"

#include <cmath>
#include <map>

namespace hqc {

// ------------------------------- Model presets -------------------------------

const char* model_name(ModelKind kind) {
    return kind == ModelKind::two_qubit ? "two_qubit" : "n_qubit";
}

ModelSpec two_qubit_model(int cutoff) {
    ModelSpec spec;
    spec.kind = ModelKind::two_qubit;
    spec.n = 2;
    spec.cutoff = cutoff;
    spec.space(); // validates cutoff and budget eagerly
    return spec;
}

ModelSpec n_qubit_model(int n, int cutoff) {
    if (n < 1) throw ValidationError("n_qubit_model: n must be >= 1");
    ModelSpec spec;
    spec.kind = ModelKind::n_qubit;
    spec.n = n;
    spec.cutoff = cutoff;
    spec.space();
    return spec;
}

// ---------------------------- Real coordinates of M --------------------------

int coord_count(const ModelSpec& spec) { return 8 * spec.n - 4; }

namespace {

// Pair index layout: j-th qubit block starts at pair 4(j-1) with
// (alpha_j, beta_j[, lambda_j, mu_j]).
struct PairName {
    const char* stem;
    int         qubit; // 1-based
};

PairName pair_name(const ModelSpec& spec, int pair_index) {
    const int n = spec.n;
    const int block = pair_index / 4;
    const int within = pair_index % 4;
    if (block >= n || pair_index < 0 || (block == n - 1 && within >= 2)) {
        throw ValidationError("coord/pair index out of range");
    }
    static constexpr const char* stems[4] = {"alpha", "beta", "lambda", "mu"};
    return PairName{stems[within], block + 1};
}

} // namespace

std::string coord_name(const ModelSpec& spec, int coord) {
    if (coord < 0 || coord >= coord_count(spec)) {
        throw ValidationError("coord_name: coordinate index out of range");
    }
    const PairName pn = pair_name(spec, coord / 2);
    return std::string(pn.stem) + std::to_string(pn.qubit) + (coord % 2 ? "_im" : "_re");
}

int coord_index(const ModelSpec& spec, const std::string& name) {
    for (int c = 0; c < coord_count(spec); ++c) {
        if (coord_name(spec, c) == name) return c;
    }
    throw ValidationError("unknown coordinate name '" + name + "' for model " +
                          model_name(spec.kind) + " with n = " + std::to_string(spec.n));
}

ParamPoint origin_point(const ModelSpec& spec) {
    return ParamPoint{spec.kind, spec.n, Eigen::VectorXd::Zero(coord_count(spec))};
}

ParamPoint point_from_coords(const ModelSpec& spec, Eigen::VectorXd coords) {
    if (coords.size() != coord_count(spec)) {
        throw ValidationError("point_from_coords: expected " + std::to_string(coord_count(spec)) +
                              " coordinates, got " + std::to_string(coords.size()));
    }
    return ParamPoint{spec.kind, spec.n, std::move(coords)};
}

void require_point_match(const ModelSpec& spec, const ParamPoint& point, const char* what) {
    if (point.model != spec.kind || point.n != spec.n ||
        point.coords.size() != coord_count(spec)) {
        throw ValidationError(std::string(what) + ": point does not match the model spec");
    }
}

Complex param_value(const ParamPoint& point, int pair_index) {
    return Complex(point.coords(2 * pair_index), point.coords(2 * pair_index + 1));
}

std::vector<std::string> validate_point(const ModelSpec& spec, const ParamPoint& point) {
    require_point_match(spec, point, "validate_point");
    std::vector<std::string> warnings;
    const int pairs = coord_count(spec) / 2;
    for (int p = 0; p < pairs; ++p) {
        const double mag = std::abs(param_value(point, p));
        const PairName pn = pair_name(spec, p);
        const std::string label = std::string(pn.stem) + std::to_string(pn.qubit);
        if (mag > spec.param_hard_limit) {
            throw ValidationError("parameter |" + label + "| = " + std::to_string(mag) +
                                  " exceeds the hard magnitude limit " +
                                  std::to_string(spec.param_hard_limit));
        }
        if (mag > spec.param_warn_limit) {
            warnings.push_back("parameter |" + label + "| = " + std::to_string(mag) +
                               " is above " + std::to_string(spec.param_warn_limit) +
                               "; truncation error grows quickly in this regime");
        }
    }
    return warnings;
}

// ------------------------------- Factor chain --------------------------------

std::vector<WFactor> factor_chain(const ModelSpec& spec) {
    std::vector<WFactor> chain;
    int pair = 0;
    for (int j = 1; j <= spec.n; ++j) {
        chain.push_back(WFactor{FactorKind::displacement, j, 0, pair++});
        chain.push_back(WFactor{FactorKind::squeeze, j, 0, pair++});
        if (j < spec.n) {
            chain.push_back(WFactor{FactorKind::beam_splitter, j, spec.n, pair++});
            chain.push_back(WFactor{FactorKind::two_mode_squeeze, j, spec.n, pair++});
        }
    }
    return chain;
}

namespace {

// Anti-Hermitian fill: write the raising half, mirror the lowering half as
// -conj so the generator is anti-Hermitian bitwise.
void set_pair(Matrix& g, long row, long col, Complex value) {
    g(row, col) = value;
    g(col, row) = -std::conj(value);
}

Matrix displacement_generator(int cutoff, Complex alpha) {
    Matrix g = Matrix::Zero(cutoff, cutoff);
    for (int n = 0; n + 1 < cutoff; ++n) {
        set_pair(g, n + 1, n, alpha * std::sqrt(static_cast<double>(n + 1)));
    }
    return g;
}

Matrix squeeze_generator(int cutoff, Complex beta) {
    Matrix g = Matrix::Zero(cutoff, cutoff);
    for (int n = 0; n + 2 < cutoff; ++n) {
        const double amp = std::sqrt(static_cast<double>(n + 1)) *
                           std::sqrt(static_cast<double>(n + 2));
        set_pair(g, n + 2, n, 0.5 * beta * amp);
    }
    return g;
}

// Local two-mode basis: index = n_first * cutoff + n_second.
Matrix beam_splitter_generator(int cutoff, Complex lambda) {
    const int c = cutoff;
    Matrix g = Matrix::Zero(static_cast<long>(c) * c, static_cast<long>(c) * c);
    for (int n1 = 0; n1 + 1 < c; ++n1) {
        for (int n2 = 1; n2 < c; ++n2) {
            const double amp = std::sqrt(static_cast<double>(n1 + 1)) *
                               std::sqrt(static_cast<double>(n2));
            set_pair(g, static_cast<long>(n1 + 1) * c + (n2 - 1),
                     static_cast<long>(n1) * c + n2, lambda * amp);
        }
    }
    return g;
}

Matrix two_mode_squeeze_generator(int cutoff, Complex mu) {
    const int c = cutoff;
    Matrix g = Matrix::Zero(static_cast<long>(c) * c, static_cast<long>(c) * c);
    for (int n1 = 0; n1 + 1 < c; ++n1) {
        for (int n2 = 0; n2 + 1 < c; ++n2) {
            const double amp = std::sqrt(static_cast<double>(n1 + 1)) *
                               std::sqrt(static_cast<double>(n2 + 1));
            set_pair(g, static_cast<long>(n1 + 1) * c + (n2 + 1),
                     static_cast<long>(n1) * c + n2, mu * amp);
        }
    }
    return g;
}

} // namespace

Matrix factor_generator(FactorKind kind, int cutoff, Complex param) {
    switch (kind) {
        case FactorKind::displacement: return displacement_generator(cutoff, param);
        case FactorKind::squeeze: return squeeze_generator(cutoff, param);
        case FactorKind::beam_splitter: return beam_splitter_generator(cutoff, param);
        case FactorKind::two_mode_squeeze: return two_mode_squeeze_generator(cutoff, param);
    }
    throw ValidationError("factor_generator: unknown factor kind");
}

Matrix factor_generator_tangent(FactorKind kind, int cutoff, bool imag_part) {
    // d/d(re p) corresponds to p -> 1, d/d(im p) to p -> i; the generators are
    // (anti)linear in the parameter and its conjugate, which the mirrored fill
    // already encodes.
    const Complex dir = imag_part ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
    return factor_generator(kind, cutoff, dir);
}

std::vector<int> factor_sectors(FactorKind kind, int cutoff) {
    const int c = cutoff;
    std::vector<int> sectors;
    switch (kind) {
        case FactorKind::beam_splitter: // conserves n1 + n2
            sectors.resize(static_cast<std::size_t>(c) * c);
            for (int n1 = 0; n1 < c; ++n1)
                for (int n2 = 0; n2 < c; ++n2)
                    sectors[static_cast<std::size_t>(n1) * c + n2] = n1 + n2;
            return sectors;
        case FactorKind::two_mode_squeeze: // conserves n1 - n2
            sectors.resize(static_cast<std::size_t>(c) * c);
            for (int n1 = 0; n1 < c; ++n1)
                for (int n2 = 0; n2 < c; ++n2)
                    sectors[static_cast<std::size_t>(n1) * c + n2] = n1 - n2 + (c - 1);
            return sectors;
        default:
            return sectors; // no exploited block structure
    }
}

Matrix factor_local_value(FactorKind kind, int cutoff, Complex param) {
    const Matrix g = factor_generator(kind, cutoff, param);
    const std::vector<int> sectors = factor_sectors(kind, cutoff);
    return sectors.empty() ? expm_pade(g) : expm_sectored(g, sectors);
}

std::pair<Matrix, Matrix> factor_local_value_tangent(FactorKind kind, int cutoff,
                                                     Complex param, bool imag_part) {
    const Matrix g = factor_generator(kind, cutoff, param);
    const Matrix dg = factor_generator_tangent(kind, cutoff, imag_part);
    const std::vector<int> sectors = factor_sectors(kind, cutoff);
    return sectors.empty() ? expm_pade_tangent(g, dg) : expm_sectored_tangent(g, dg, sectors);
}

Matrix embed_factor(const ModeSpace& space, const WFactor& factor, const Matrix& local) {
    if (factor.kind == FactorKind::displacement || factor.kind == FactorKind::squeeze) {
        return embed_one_mode(space, factor.mode, local);
    }
    return embed_two_mode(space, factor.mode, factor.partner, local);
}

// ------------------------------ Unitary builders -----------------------------

Op expm_antihermitian(const Op& x) {
    const Matrix s = antihermitian_part(x.mat);
    const double defect = (x.mat - s).norm();
    if (defect > 1e-10 * std::max(1.0, x.mat.norm())) {
        throw ValidationError("expm_antihermitian: input violates the anti-Hermitian contract "
                              "(defect " + std::to_string(defect) + ")");
    }
    return Op{x.space, expm_pade(s)};
}

namespace {

Op single_mode_unitary(const ModeSpace& space, int mode, FactorKind kind, Complex param) {
    const Matrix local = factor_local_value(kind, space.cutoff, param);
    return Op{space, embed_one_mode(space, mode, local)};
}

Op two_mode_unitary(const ModeSpace& space, int i, int j, FactorKind kind, Complex param) {
    if (i == j) throw ValidationError("two-mode unitary: modes must differ");
    const Matrix local = factor_local_value(kind, space.cutoff, param);
    return Op{space, embed_two_mode(space, i, j, local)};
}

} // namespace

Op displacement(const ModeSpace& space, int mode, Complex alpha) {
    return single_mode_unitary(space, mode, FactorKind::displacement, alpha);
}

Op squeeze(const ModeSpace& space, int mode, Complex beta) {
    return single_mode_unitary(space, mode, FactorKind::squeeze, beta);
}

Op beam_splitter(const ModeSpace& space, int i, int j, Complex lambda) {
    return two_mode_unitary(space, i, j, FactorKind::beam_splitter, lambda);
}

Op two_mode_squeeze(const ModeSpace& space, int i, int j, Complex mu) {
    return two_mode_unitary(space, i, j, FactorKind::two_mode_squeeze, mu);
}

Op composite_w(const ModelSpec& spec, const ParamPoint& point) {
    require_point_match(spec, point, "composite_w");
    const ModeSpace space = spec.space();
    Matrix w = Matrix::Identity(space.dim, space.dim);
    for (const WFactor& factor : factor_chain(spec)) {
        const Matrix local = factor_local_value(factor.kind, space.cutoff,
                                                param_value(point, factor.pair_index));
        w = w * embed_factor(space, factor, local);
    }
    return Op{space, std::move(w)};
}

Frame vacuum_frame(const ModelSpec& spec) {
    const ModeSpace space = spec.space();
    const int m = spec.fiber_dim();
    Matrix cols = Matrix::Zero(space.dim, m);
    std::vector<int> occ(static_cast<std::size_t>(spec.n));
    for (int b = 0; b < m; ++b) {
        for (int i = 0; i < spec.n; ++i) {
            occ[static_cast<std::size_t>(i)] = (b >> (spec.n - 1 - i)) & 1;
        }
        cols(basis_index(space, occ), b) = 1.0;
    }
    return Frame{space, std::move(cols)};
}

double frame_defect(const Frame& v) {
    const long m = v.columns.cols();
    return (v.columns.adjoint() * v.columns - Matrix::Identity(m, m)).norm();
}

double projector_idempotency_defect(const Projector& p) {
    return (p.mat * p.mat - p.mat).norm();
}

double projector_hermiticity_defect(const Projector& p) {
    return (p.mat - p.mat.adjoint()).norm();
}

Complex projector_trace(const Projector& p) { return p.mat.trace(); }

} // namespace hqc
