// expm.hpp — Dense matrix exponential (order-13 Pade with scaling and squaring)
// plus its directional derivative via the block-augmented form, evaluated blockwise.

#pragma once

#include <utility>
#include <vector>

#include "hqc/fock.hpp"

namespace hqc {

// exp(a) for a general square complex matrix. Deterministic: order-13 Pade
// approximant with power-of-two scaling chosen from the 1-norm.
Matrix expm_pade(const Matrix& a);

// {exp(a), D exp(a)[da]}. Equals the blocks of exp([[a,da],[0,a]]): the pair
// recurrences are exactly the block-upper-triangular arithmetic of that
// augmented exponential, without materializing the doubled matrix.
std::pair<Matrix, Matrix> expm_pade_tangent(const Matrix& a, const Matrix& da);

// exp(g) for a generator that is exactly block-diagonal under the grouping
// sector_of (one label per basis index). Off-sector entries must be zero;
// each block goes through expm_pade. Entries across sectors stay exactly zero.
Matrix expm_sectored(const Matrix& g, const std::vector<int>& sector_of);

std::pair<Matrix, Matrix> expm_sectored_tangent(const Matrix& g,
                                                const Matrix& dg,
                                                const std::vector<int>& sector_of);

// Exact anti-Hermitian part: s = (x - x^dag)/2 built entrywise so s^dag == -s
// holds bitwise.
Matrix antihermitian_part(const Matrix& x);

// Frobenius norm of x + x^dag (zero iff x is anti-Hermitian).
double antihermitian_defect(const Matrix& x);

} // namespace hqc
