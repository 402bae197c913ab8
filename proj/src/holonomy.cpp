#include "hqc/holonomy.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace hqc {

// ------------------------------- Loop geometry -------------------------------

Eigen::VectorXd PathSegment::position(double t) const {
    if (kind == Kind::line) return from + t * (to - from);
    const double a = angle_start + t * (angle_end - angle_start);
    Eigen::VectorXd p = center;
    p(plane0) += radius * std::cos(a);
    p(plane1) += radius * std::sin(a);
    return p;
}

Eigen::VectorXd PathSegment::velocity(double t) const {
    if (kind == Kind::line) return to - from;
    const double a = angle_start + t * (angle_end - angle_start);
    const double rate = angle_end - angle_start;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(center.size());
    v(plane0) = -radius * rate * std::sin(a);
    v(plane1) = radius * rate * std::cos(a);
    return v;
}

double PathSegment::coord_length() const {
    if (kind == Kind::line) return (to - from).norm();
    return std::abs(angle_end - angle_start) * radius;
}

PathSegment line_segment(Eigen::VectorXd from, Eigen::VectorXd to) {
    PathSegment s;
    s.kind = PathSegment::Kind::line;
    if (from.size() != to.size()) throw ValidationError("line_segment: endpoint size mismatch");
    s.from = std::move(from);
    s.to = std::move(to);
    return s;
}

PathSegment arc_segment(Eigen::VectorXd center, double radius, int plane0, int plane1,
                        double angle_start, double angle_end) {
    if (radius < 0.0) throw ValidationError("arc_segment: radius must be >= 0");
    if (plane0 == plane1) throw ValidationError("arc_segment: plane coordinates must differ");
    if (plane0 < 0 || plane1 < 0 || plane0 >= center.size() || plane1 >= center.size()) {
        throw ValidationError("arc_segment: plane coordinate out of range");
    }
    PathSegment s;
    s.kind = PathSegment::Kind::arc;
    s.center = std::move(center);
    s.radius = radius;
    s.plane0 = plane0;
    s.plane1 = plane1;
    s.angle_start = angle_start;
    s.angle_end = angle_end;
    return s;
}

LoopPath circle_loop(const ModelSpec& spec, int c0, int c1, Eigen::VectorXd center,
                     double radius) {
    if (center.size() != coord_count(spec)) {
        throw ValidationError("circle_loop: center has wrong coordinate count");
    }
    LoopPath loop;
    loop.model = spec.kind;
    loop.n = spec.n;
    loop.segments.push_back(
        arc_segment(std::move(center), radius, c0, c1, 0.0, 2.0 * M_PI));
    return loop;
}

void validate_loop(const ModelSpec& spec, const LoopPath& loop, double closure_tol) {
    if (loop.model != spec.kind || loop.n != spec.n) {
        throw ValidationError("validate_loop: loop was written for a different model");
    }
    if (loop.segments.empty()) throw ValidationError("validate_loop: loop has no segments");
    const int dim = coord_count(spec);
    for (std::size_t i = 0; i < loop.segments.size(); ++i) {
        const PathSegment& s = loop.segments[i];
        const Eigen::VectorXd p0 = s.start();
        if (p0.size() != dim) {
            throw ValidationError("validate_loop: segment " + std::to_string(i) +
                                  " has wrong coordinate count");
        }
        const Eigen::VectorXd p1 = loop.segments[(i + 1) % loop.segments.size()].start();
        const double gap = (s.end() - p1).cwiseAbs().maxCoeff();
        if (gap > closure_tol) {
            throw ValidationError(
                "validate_loop: segment " + std::to_string(i) +
                (i + 1 == loop.segments.size() ? " does not close the loop (gap "
                                               : " does not meet the next segment (gap ") +
                std::to_string(gap) + ")");
        }
        // Hard parameter-magnitude budget, sampled along the segment.
        for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            validate_point(spec, point_from_coords(spec, s.position(t)));
        }
    }
}

// ------------------------------ Discretization -------------------------------

namespace {

struct Piece {
    const PathSegment* segment;
    double             ta;
    double             tb;
};

std::vector<Piece> cut_loop(const LoopPath& loop, long n_segments) {
    const std::size_t nseg = loop.segments.size();
    std::vector<double> lengths(nseg);
    double total = 0.0;
    for (std::size_t i = 0; i < nseg; ++i) {
        lengths[i] = loop.segments[i].coord_length();
        total += lengths[i];
    }

    // Largest-remainder split of n_segments proportional to coordinate length,
    // with at least one piece per declared segment.
    std::vector<long> counts(nseg, 1);
    long assigned = static_cast<long>(nseg);
    if (n_segments > assigned) {
        const long extra = n_segments - assigned;
        std::vector<double> raw(nseg);
        std::vector<long> add(nseg, 0);
        long used = 0;
        for (std::size_t i = 0; i < nseg; ++i) {
            raw[i] = total > 0.0 ? extra * lengths[i] / total
                                 : static_cast<double>(extra) / static_cast<double>(nseg);
            add[i] = static_cast<long>(std::floor(raw[i]));
            used += add[i];
        }
        std::vector<std::size_t> order(nseg);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return raw[a] - std::floor(raw[a]) > raw[b] - std::floor(raw[b]);
        });
        for (long r = 0; r < extra - used; ++r) add[order[static_cast<std::size_t>(r) % nseg]]++;
        for (std::size_t i = 0; i < nseg; ++i) counts[i] += add[i];
    }

    std::vector<Piece> pieces;
    pieces.reserve(static_cast<std::size_t>(std::max(n_segments, assigned)));
    for (std::size_t i = 0; i < nseg; ++i) {
        const double inv = 1.0 / static_cast<double>(counts[i]);
        for (long j = 0; j < counts[i]; ++j) {
            pieces.push_back(Piece{&loop.segments[i], j * inv, (j + 1) * inv});
        }
    }
    return pieces;
}

int resolve_threads(int requested, std::size_t work_items) {
    if (requested == 1 || work_items < 64) return 1;
    int t = requested > 0 ? requested
                          : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    return std::min<int>(t, 8);
}

// Chunked, order-preserving parallel map; each worker gets its own evaluator.
template <class Body>
void parallel_chunks(std::size_t n, int threads, Body&& body) {
    if (threads <= 1 || n == 0) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + static_cast<std::size_t>(threads) - 1) /
                              static_cast<std::size_t>(threads);
    for (int w = 0; w < threads; ++w) {
        const std::size_t lo = std::min(n, static_cast<std::size_t>(w) * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

// One anti-Hermitian transport step per piece: X_k = sum_mu A_mu(mid) delta_mu.
std::vector<Matrix> transport_steps(const ModelSpec& spec, const Frame& frame,
                                    const LoopPath& loop, long n_segments, int threads) {
    const std::vector<Piece> pieces = cut_loop(loop, n_segments);
    const int m = static_cast<int>(frame.columns.cols());
    std::vector<Matrix> steps(pieces.size());

    const int workers = resolve_threads(threads, pieces.size());
    parallel_chunks(pieces.size(), workers, [&](std::size_t lo, std::size_t hi) {
        ConnectionEvaluator evaluator(spec, frame);
        std::vector<int> varying;
        for (std::size_t k = lo; k < hi; ++k) {
            const Piece& piece = pieces[k];
            const Eigen::VectorXd mid = piece.segment->position(0.5 * (piece.ta + piece.tb));
            const Eigen::VectorXd delta =
                piece.segment->position(piece.tb) - piece.segment->position(piece.ta);
            varying.clear();
            for (int c = 0; c < delta.size(); ++c) {
                if (delta(c) != 0.0) varying.push_back(c);
            }
            Matrix x = Matrix::Zero(m, m);
            if (!varying.empty()) {
                const std::vector<Matrix> a =
                    evaluator.components(point_from_coords(spec, mid), varying);
                for (std::size_t i = 0; i < varying.size(); ++i) {
                    x += delta(varying[i]) * a[i];
                }
            }
            steps[k] = antihermitian_part(x);
        }
    });
    return steps;
}

Matrix ordered_product(const std::vector<Matrix>& steps, int m) {
    Matrix gate = Matrix::Identity(m, m);
    for (const Matrix& x : steps) gate = gate * expm_pade(x); // later pieces on the right
    return gate;
}

Matrix gate_for(const ModelSpec& spec, const Frame& frame, const LoopPath& loop,
                long n_segments, int threads) {
    const std::vector<Matrix> steps = transport_steps(spec, frame, loop, n_segments, threads);
    return ordered_product(steps, static_cast<int>(frame.columns.cols()));
}

} // namespace

HolonomyReport holonomy(const ModelSpec& spec, const LoopPath& loop, int n_segments,
                        const Frame& frame, const HolonomyOptions& options) {
    validate_loop(spec, loop, options.closure_tol);
    if (n_segments < 8) throw ValidationError("holonomy: n_segments must be >= 8");

    HolonomyReport report;
    report.segments_used = n_segments;
    report.gate = gate_for(spec, frame, loop, n_segments, options.threads);
    const int m = static_cast<int>(frame.columns.cols());
    report.unitarity_defect =
        (report.gate.adjoint() * report.gate - Matrix::Identity(m, m)).norm();
    report.det_phase = std::arg(report.gate.determinant());

    if (options.with_discretization_history) {
        for (int count : {std::max(8, n_segments / 4), std::max(8, n_segments / 2)}) {
            if (count >= n_segments) continue;
            const Matrix g = gate_for(spec, frame, loop, count, options.threads);
            report.discretization_history.emplace_back(count, (g - report.gate).norm());
        }
        report.discretization_history.emplace_back(n_segments, 0.0);
    }
    if (options.with_cutoff_history) {
        for (int cut : {std::max(2, spec.cutoff / 2), std::max(2, (3 * spec.cutoff) / 4)}) {
            if (cut >= spec.cutoff) continue;
            ModelSpec reduced = spec;
            reduced.cutoff = cut;
            const Matrix g =
                gate_for(reduced, vacuum_frame(reduced), loop, n_segments, options.threads);
            report.cutoff_history.emplace_back(cut, (g - report.gate).norm());
        }
        report.cutoff_history.emplace_back(spec.cutoff, 0.0);
    }
    return report;
}

HolonomyReport holonomy(const ModelSpec& spec, const LoopPath& loop, int n_segments,
                        const HolonomyOptions& options) {
    return holonomy(spec, loop, n_segments, vacuum_frame(spec), options);
}

Matrix plaquette_holonomy(const ModelSpec& spec, const ParamPoint& point, int mu, int nu,
                          double eps) {
    require_point_match(spec, point, "plaquette_holonomy");
    if (mu == nu) throw ValidationError("plaquette_holonomy: mu and nu must differ");
    if (mu < 0 || nu < 0 || mu >= coord_count(spec) || nu >= coord_count(spec)) {
        throw ValidationError("plaquette_holonomy: coordinate id out of range");
    }
    if (eps <= 0.0) throw ValidationError("plaquette_holonomy: eps must be positive");

    Eigen::VectorXd p0 = point.coords;
    Eigen::VectorXd p1 = p0, p2 = p0, p3 = p0;
    p1(mu) += eps;
    p2(mu) += eps;
    p2(nu) += eps;
    p3(nu) += eps;

    LoopPath square;
    square.model = point.model;
    square.n = point.n;
    square.segments.push_back(line_segment(p0, p1));
    square.segments.push_back(line_segment(p1, p2));
    square.segments.push_back(line_segment(p2, p3));
    square.segments.push_back(line_segment(p3, p0));

    const long per_side = std::clamp<long>(static_cast<long>(std::ceil(0.32 / eps)), 4, 64);
    HolonomyOptions options;
    return holonomy(spec, square, static_cast<int>(4 * per_side), options).gate;
}

double det_phase_integral(const ModelSpec& spec, const LoopPath& loop, int n_segments) {
    validate_loop(spec, loop, 1e-12);
    if (n_segments < 8) throw ValidationError("det_phase_integral: n_segments must be >= 8");
    const Frame frame = vacuum_frame(spec);
    const std::vector<Matrix> steps = transport_steps(spec, frame, loop, n_segments, 0);
    double phase = 0.0;
    for (const Matrix& x : steps) phase += x.trace().imag();
    return phase;
}

Vector apply_gate(const Matrix& gate, const Vector& x) {
    if (gate.cols() != x.size()) {
        throw ValidationError("apply_gate: gate is " + std::to_string(gate.rows()) + "x" +
                              std::to_string(gate.cols()) + " but the fiber vector has dim " +
                              std::to_string(x.size()));
    }
    return gate * x;
}

Matrix principal_log_unitary(const Matrix& u) {
    if (u.rows() != u.cols()) throw ValidationError("principal_log_unitary: matrix must be square");
    Eigen::ComplexSchur<Matrix> schur(u);
    const long n = u.rows();
    Matrix log_t = Matrix::Zero(n, n);
    for (long i = 0; i < n; ++i) {
        log_t(i, i) = Complex(0.0, std::arg(schur.matrixT()(i, i)));
    }
    const Matrix g = schur.matrixU() * log_t * schur.matrixU().adjoint();
    return antihermitian_part(g);
}

// ------------------------- Holonomy-algebra rank probe -----------------------

LieSpanBuilder::LieSpanBuilder(int m, double rel_threshold)
    : m_(m), rel_threshold_(rel_threshold) {
    if (m < 1) throw ValidationError("LieSpanBuilder: m must be >= 1");
}

Eigen::VectorXd LieSpanBuilder::vectorize(const Matrix& g) const {
    // Isometric coordinates of u(m): imaginary diagonal, then sqrt(2)-scaled
    // real/imag upper triangle.
    const double rt2 = std::sqrt(2.0);
    Eigen::VectorXd v(m_ * m_);
    int at = 0;
    for (int i = 0; i < m_; ++i) v(at++) = g(i, i).imag();
    for (int i = 0; i < m_; ++i) {
        for (int j = i + 1; j < m_; ++j) {
            v(at++) = rt2 * g(i, j).real();
            v(at++) = rt2 * g(i, j).imag();
        }
    }
    return v;
}

Matrix LieSpanBuilder::unvectorize(const Eigen::VectorXd& v) const {
    const double rt2 = std::sqrt(2.0);
    Matrix g = Matrix::Zero(m_, m_);
    int at = 0;
    for (int i = 0; i < m_; ++i) g(i, i) = Complex(0.0, v(at++));
    for (int i = 0; i < m_; ++i) {
        for (int j = i + 1; j < m_; ++j) {
            const Complex z(v(at) / rt2, v(at + 1) / rt2);
            at += 2;
            g(i, j) = z;
            g(j, i) = -std::conj(z);
        }
    }
    return g;
}

Eigen::MatrixXd LieSpanBuilder::stacked() const {
    Eigen::MatrixXd s(static_cast<long>(rows_.size()), m_ * m_);
    for (std::size_t r = 0; r < rows_.size(); ++r) s.row(static_cast<long>(r)) = rows_[r];
    return s;
}

void LieSpanBuilder::add(const Matrix& g) {
    if (g.rows() != m_ || g.cols() != m_) throw ValidationError("LieSpanBuilder: size mismatch");
    rows_.push_back(vectorize(antihermitian_part(g)));
}

int LieSpanBuilder::rank() const {
    if (rows_.empty()) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked());
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int r = 0;
    for (long i = 0; i < sv.size(); ++i) {
        if (sv(i) > rel_threshold_ * sv(0)) ++r;
    }
    return r;
}

std::vector<Matrix> LieSpanBuilder::span_basis() const {
    std::vector<Matrix> basis;
    if (rows_.empty()) return basis;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked(), Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return basis;
    for (long i = 0; i < sv.size(); ++i) {
        if (sv(i) > rel_threshold_ * sv(0)) basis.push_back(unvectorize(svd.matrixV().col(i)));
    }
    return basis;
}

void LieSpanBuilder::close_under_commutators(int max_rounds) {
    int current = rank();
    for (int round = 0; round < max_rounds; ++round) {
        const std::vector<Matrix> basis = span_basis();
        for (std::size_t i = 0; i < basis.size(); ++i) {
            for (std::size_t j = i + 1; j < basis.size(); ++j) {
                add(basis[i] * basis[j] - basis[j] * basis[i]);
            }
        }
        const int grown = rank();
        if (grown == current) return;
        current = grown;
    }
}

const char* verdict_name(RankVerdict v) {
    switch (v) {
        case RankVerdict::at_most_su: return "at_most_su";
        case RankVerdict::full_u: return "full_u";
        case RankVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

// Seeded draws with pinned transforms, so reports are reproducible across
// standard-library implementations.
struct ProbeRng {
    std::mt19937_64 gen;

    explicit ProbeRng(std::uint64_t seed) : gen(seed) {}

    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * M_PI * u2);
    }

    int below(int n) {
        const int v = static_cast<int>(uniform() * n);
        return std::min(v, n - 1);
    }

    Eigen::VectorXd ball(int dim, double radius) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = normal();
        const double r = v.norm();
        if (r == 0.0) return Eigen::VectorXd::Zero(dim);
        const double scale =
            radius * std::pow(uniform(), 1.0 / static_cast<double>(dim)) / r;
        return scale * v;
    }
};

struct ProbeDraw {
    int             mu;
    int             nu;
    Eigen::VectorXd coords;
};

} // namespace

RankReport holonomy_algebra_rank(const ModelSpec& spec, const ParamPoint& base_point,
                                 int samples, double eps, std::uint64_t seed) {
    require_point_match(spec, base_point, "holonomy_algebra_rank");
    if (samples < 1) throw ValidationError("holonomy_algebra_rank: samples must be >= 1");
    if (eps <= 0.0) throw ValidationError("holonomy_algebra_rank: eps must be positive");

    const int dim = coord_count(spec);
    const int m = spec.fiber_dim();

    ProbeRng rng(seed);
    std::vector<ProbeDraw> draws;
    draws.reserve(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        ProbeDraw d;
        d.mu = rng.below(dim);
        d.nu = rng.below(dim - 1);
        if (d.nu >= d.mu) ++d.nu;
        d.coords = base_point.coords + rng.ball(dim, 0.2);
        draws.push_back(std::move(d));
    }

    // Accuracy gate: the plaquette defect must shrink ~4x when eps halves,
    // otherwise eps sits outside the quadratic regime.
    double eps_ratio = 0.0;
    for (int s = 0; s < std::min(samples, 5); ++s) {
        const ProbeDraw& d = draws[static_cast<std::size_t>(s)];
        const ParamPoint pt = point_from_coords(spec, d.coords);
        const int mm = spec.fiber_dim();
        const double d1 =
            (plaquette_holonomy(spec, pt, d.mu, d.nu, eps) - Matrix::Identity(mm, mm)).norm();
        if (d1 < 1e-10) continue; // flat direction; try the next draw
        const double d2 =
            (plaquette_holonomy(spec, pt, d.mu, d.nu, eps / 2.0) - Matrix::Identity(mm, mm))
                .norm();
        eps_ratio = d2 > 0.0 ? d1 / d2 : 0.0;
        if (eps_ratio < 2.5 || eps_ratio > 6.0) {
            throw ToleranceError(
                "holonomy_algebra_rank: eps " + std::to_string(eps) +
                " fails the quadratic plaquette test (defect ratio " +
                std::to_string(eps_ratio) + ", expected ~4); choose a smaller eps");
        }
        break;
    }

    std::vector<Matrix> generators(draws.size());
    const int workers = resolve_threads(0, draws.size() * 64);
    parallel_chunks(draws.size(), workers, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const ProbeDraw& d = draws[k];
            const ParamPoint pt = point_from_coords(spec, d.coords);
            const Matrix gamma = plaquette_holonomy(spec, pt, d.mu, d.nu, eps);
            generators[k] = principal_log_unitary(gamma) / (eps * eps);
        }
    });

    LieSpanBuilder builder(m);
    double max_abs_trace = 0.0;
    for (const Matrix& g : generators) {
        max_abs_trace = std::max(max_abs_trace, std::abs(g.trace()));
        builder.add(g);
    }
    builder.close_under_commutators();

    RankReport report;
    report.rank = builder.rank();
    report.dim_su = m * m - 1;
    report.dim_u = m * m;
    report.max_abs_trace = max_abs_trace;
    report.eps_ratio = eps_ratio;
    report.samples = samples;
    report.eps = eps;
    report.seed = seed;
    if (report.rank == report.dim_u && max_abs_trace > 1e-6) {
        report.verdict = RankVerdict::full_u;
    } else if (max_abs_trace < 1e-8 && samples >= 200) {
        report.verdict = RankVerdict::at_most_su;
    } else {
        report.verdict = RankVerdict::inconclusive;
    }
    return report;
}

} // namespace hqc
