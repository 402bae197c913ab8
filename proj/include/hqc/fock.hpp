// fock.hpp — Truncated multimode Fock space: basis indexing, ladder operators,
// boson-represented Weyl generators, commutators, tensor placement.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

#include "hqc/errors.hpp"

namespace hqc {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;

inline constexpr long kDefaultDimBudget = 4096;

// ----------------------------- ModeSpace ------------------------------------

// n oscillators, each truncated to levels {0, ..., cutoff-1}; dim = cutoff^n.
// Basis convention: index of occupation (n_1,...,n_k) is sum_i n_i * cutoff^(k-i),
// i.e. mode 1 is the most significant digit.
struct ModeSpace {
    int  n_modes{1};
    int  cutoff{2};
    long dim{2};

    friend bool operator==(const ModeSpace&, const ModeSpace&) = default;
};

// Throws ResourceError (naming the offending dim) past the dimension budget.
ModeSpace make_space(int n_modes, int cutoff, long dim_budget = kDefaultDimBudget);

// cutoff^(n_modes - mode); the index step of one quantum in `mode` (1-based).
long mode_stride(const ModeSpace& space, int mode);

long basis_index(const ModeSpace& space, std::span<const int> occupation);
std::vector<int> occupation_of(const ModeSpace& space, long index);

// Occupation of a single mode, read off an index without materializing the tuple.
int mode_occupation(const ModeSpace& space, int mode, long index);

// --------------------------------- Op ---------------------------------------

// Dense complex operator over a ModeSpace basis.
struct Op {
    ModeSpace space;
    Matrix    mat;

    static Op zero(const ModeSpace& s);
    static Op identity(const ModeSpace& s);
};

Op  adjoint(const Op& x);
Op  operator*(const Op& x, const Op& y);
Op  operator+(const Op& x, const Op& y);
Op  operator-(const Op& x, const Op& y);
Op  operator*(Complex c, const Op& x);
Op  commutator(const Op& x, const Op& y); // xy - yx

void require_same_space(const Op& x, const Op& y, const char* what);

// ------------------------------ StateVector ---------------------------------

struct StateVector {
    ModeSpace space;
    Vector    amplitudes;
};

StateVector basis_state(const ModeSpace& space, std::span<const int> occupation);
StateVector apply(const Op& x, const StateVector& v);

// ----------------------------- Ladder operators -----------------------------

// a|n> = sqrt(n)|n-1> on `mode`, identity on the other tensor factors.
Op annihilator(const ModeSpace& space, int mode);

// Exact matrix adjoint of annihilator: a^dag|n> = sqrt(n+1)|n+1>, with the top
// retained level mapped out of the space (dropped).
Op creator(const ModeSpace& space, int mode);

// Diagonal occupation number of `mode`; equals creator*annihilator including
// the truncation boundary (a^dag a keeps the full diagonal 0..cutoff-1).
Op number_op(const ModeSpace& space, int mode);

// --------------------------- Weyl generators --------------------------------

enum class WeylAlgebra {
    u_n,    // E_ij = a_i^dag a_j
    u_n1_1, // E_ij = a_i^dag a_j (i,j<n), E_nn = a_n^dag a_n + 1,
            // E_in = a_i^dag a_n^dag, E_ni = a_n a_i
};

Op weyl_generator(const ModeSpace& space, int i, int j, WeylAlgebra algebra);

// --------------------------- Protected subspace -----------------------------

// Orthogonal projector onto basis states with every mode occupation
// <= cutoff-1-margin. margin 0 is the identity.
Op protected_projector(const ModeSpace& space, int margin);

// Projector variant keeping total occupation sum <= max_total (used by the
// number-conserving su(2) algebra checks).
Op total_occupation_projector(const ModeSpace& space, int max_total);

// ---------------------------- Tensor placement ------------------------------

// Embed a cutoff x cutoff single-mode matrix at `mode`, identity elsewhere.
Matrix embed_one_mode(const ModeSpace& space, int mode, const Matrix& local);

// Embed a cutoff^2 x cutoff^2 two-mode matrix acting on (mode_a, mode_b);
// local basis index is n_a * cutoff + n_b.
Matrix embed_two_mode(const ModeSpace& space, int mode_a, int mode_b, const Matrix& local);

} // namespace hqc
