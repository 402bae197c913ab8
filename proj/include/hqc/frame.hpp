// frame.hpp — Stiefel frames (orthonormal column tuples) and Grassmann projectors

#pragma once

#include "hqc/fock.hpp"

namespace hqc {

// m orthonormal columns spanning a subspace of the truncated Fock space.
struct Frame {
    ModeSpace space;
    Matrix    columns; // dim x m

    long rank() const { return columns.cols(); }
};

// ||V^dag V - 1_m||_F
double frame_defect(const Frame& v);

// Rank-m orthogonal projector: X^2 = X, X^dag = X, tr X = m.
struct Projector {
    ModeSpace space;
    Matrix    mat; // dim x dim
};

double projector_idempotency_defect(const Projector& p); // ||X^2 - X||_F
double projector_hermiticity_defect(const Projector& p); // ||X - X^dag||_F
Complex projector_trace(const Projector& p);

} // namespace hqc
