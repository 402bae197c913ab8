// holonomy.hpp — Path-ordered holonomy along loops in M, plaquette holonomies,
// the holonomy-algebra rank probe, and gate application to fiber vectors.

#pragma once

#include <cstdint>
#include <utility>

#include "hqc/connection.hpp"

namespace hqc {

// ------------------------------- Loop geometry -------------------------------

// Piece of a loop in the real coordinates of M: a straight line or a circular
// arc inside one coordinate plane.
struct PathSegment {
    enum class Kind { line, arc };

    Kind kind{Kind::line};

    // line
    Eigen::VectorXd from;
    Eigen::VectorXd to;

    // arc: coords (plane0, plane1) trace center + radius*(cos a, sin a), the
    // remaining coordinates stay at center.
    Eigen::VectorXd center;
    double          radius{0.0};
    int             plane0{0};
    int             plane1{1};
    double          angle_start{0.0};
    double          angle_end{0.0};

    Eigen::VectorXd position(double t) const; // t in [0, 1]
    Eigen::VectorXd velocity(double t) const; // d position / dt
    Eigen::VectorXd start() const { return position(0.0); }
    Eigen::VectorXd end() const { return position(1.0); }
    double          coord_length() const;
};

PathSegment line_segment(Eigen::VectorXd from, Eigen::VectorXd to);
PathSegment arc_segment(Eigen::VectorXd center, double radius, int plane0, int plane1,
                        double angle_start, double angle_end);

// Piecewise-smooth closed path. Segment ends must chain up and the last end
// must return to the first start (checked by validate_loop).
struct LoopPath {
    ModelKind                model{ModelKind::two_qubit};
    int                      n{2};
    std::vector<PathSegment> segments;
};

// Full circle of `radius` in the (c0, c1) coordinate plane around `center`.
LoopPath circle_loop(const ModelSpec& spec, int c0, int c1, Eigen::VectorXd center,
                     double radius);

// Throws ValidationError on model mismatch, broken continuity/closure, or
// points beyond the parameter magnitude budget.
void validate_loop(const ModelSpec& spec, const LoopPath& loop, double closure_tol = 1e-12);

// ------------------------------- Holonomy ------------------------------------

struct HolonomyOptions {
    bool   with_discretization_history{false};
    bool   with_cutoff_history{false};
    int    threads{0}; // 0 = automatic, 1 = serial
    double closure_tol{1e-12};
};

struct HolonomyReport {
    Matrix gate; // m x m
    int    segments_used{0};
    double unitarity_defect{0.0}; // ||gate^dag gate - 1||_F
    double det_phase{0.0};        // arg det gate, in (-pi, pi]

    // (segment count, Frobenius distance to the final gate)
    std::vector<std::pair<int, double>> discretization_history;
    // (cutoff, Frobenius distance to the final gate)
    std::vector<std::pair<int, double>> cutoff_history;
};

// Midpoint-rule path-ordered product: the loop is cut into n_segments pieces,
// X_k = sum_mu A_mu(midpoint_k) * delta_mu_k is symmetrized exactly, and the
// gate is exp(X_1) exp(X_2) ... exp(X_N) — later pieces compose on the right,
// which makes small-plaquette gates match exp(eps^2 F) for F = dA + A^A.
HolonomyReport holonomy(const ModelSpec& spec, const LoopPath& loop, int n_segments,
                        const HolonomyOptions& options = {});
HolonomyReport holonomy(const ModelSpec& spec, const LoopPath& loop, int n_segments,
                        const Frame& frame, const HolonomyOptions& options = {});

// Holonomy of the eps x eps coordinate square at `point` in the (mu, nu) plane,
// traversed +mu, +nu, -mu, -nu; segment count scales with 1/eps.
Matrix plaquette_holonomy(const ModelSpec& spec, const ParamPoint& point, int mu, int nu,
                          double eps);

// Integral of tr A around the loop (midpoint quadrature); equals arg det of the
// holonomy gate modulo 2 pi.
double det_phase_integral(const ModelSpec& spec, const LoopPath& loop, int n_segments);

// gate * x with a dimension check; unitary gates preserve the norm.
Vector apply_gate(const Matrix& gate, const Vector& x);

// Principal matrix logarithm of a unitary (Schur-based); anti-Hermitian output.
Matrix principal_log_unitary(const Matrix& u);

// ------------------------- Holonomy-algebra rank probe -----------------------

// Real span of anti-Hermitian m x m matrices; rank counts singular values above
// rel_threshold times the largest.
class LieSpanBuilder {
public:
    explicit LieSpanBuilder(int m, double rel_threshold = 1e-7);

    void add(const Matrix& g);
    int  rank() const;
    int  ambient_dim() const { return m_ * m_; }
    int  count() const { return static_cast<int>(rows_.size()); }

    // Adds commutators of a span basis until the rank stops growing.
    void close_under_commutators(int max_rounds = 32);

    std::vector<Matrix> span_basis() const;

private:
    Eigen::VectorXd vectorize(const Matrix& g) const;
    Matrix          unvectorize(const Eigen::VectorXd& v) const;
    Eigen::MatrixXd stacked() const;

    int                          m_;
    double                       rel_threshold_;
    std::vector<Eigen::VectorXd> rows_;
};

enum class RankVerdict { at_most_su, full_u, inconclusive };

const char* verdict_name(RankVerdict v);

struct RankReport {
    int           rank{0};
    int           dim_su{0}; // m^2 - 1
    int           dim_u{0};  // m^2
    double        max_abs_trace{0.0};
    double        eps_ratio{0.0}; // plaquette-defect ratio from the eps-halving check
    int           samples{0};
    double        eps{0.0};
    std::uint64_t seed{0};
    RankVerdict   verdict{RankVerdict::inconclusive};

    friend bool operator==(const RankReport&, const RankReport&) = default;
};

// Collects log(plaquette)/eps^2 generators at seeded random coordinate pairs
// and points near base_point (uniform in a radius-0.2 ball), closes the set
// under commutators, and reports the estimated real Lie-algebra dimension plus
// the trace statistic separating su(m) from u(m). Same seed, same report.
RankReport holonomy_algebra_rank(const ModelSpec& spec, const ParamPoint& base_point,
                                 int samples, double eps, std::uint64_t seed);

} // namespace hqc
