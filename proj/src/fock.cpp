#include "hqc/fock.hpp"

#include <cmath>
#include <string>

namespace hqc {

namespace {

void require_mode(const ModeSpace& space, int mode, const char* what) {
    if (mode < 1 || mode > space.n_modes) {
        throw ValidationError(std::string(what) + ": mode " + std::to_string(mode) +
                              " out of range [1, " + std::to_string(space.n_modes) + "]");
    }
}

} // namespace

// ----------------------------- ModeSpace ------------------------------------

ModeSpace make_space(int n_modes, int cutoff, long dim_budget) {
    if (n_modes < 1) throw ValidationError("make_space: n_modes must be >= 1");
    if (cutoff < 2) throw ValidationError("make_space: cutoff must be >= 2");
    long dim = 1;
    for (int i = 0; i < n_modes; ++i) {
        if (dim > dim_budget / cutoff + 1) {
            dim = dim_budget + 1; // known overflow of the budget; avoid integer overflow
            break;
        }
        dim *= cutoff;
    }
    if (dim > dim_budget) {
        throw ResourceError("make_space: dim = cutoff^n_modes = " + std::to_string(cutoff) +
                            "^" + std::to_string(n_modes) + " exceeds the dimension budget " +
                            std::to_string(dim_budget));
    }
    return ModeSpace{n_modes, cutoff, dim};
}

long mode_stride(const ModeSpace& space, int mode) {
    require_mode(space, mode, "mode_stride");
    long stride = 1;
    for (int i = 0; i < space.n_modes - mode; ++i) stride *= space.cutoff;
    return stride;
}

long basis_index(const ModeSpace& space, std::span<const int> occupation) {
    if (static_cast<int>(occupation.size()) != space.n_modes) {
        throw ValidationError("basis_index: occupation tuple size mismatch");
    }
    long index = 0;
    for (int i = 0; i < space.n_modes; ++i) {
        const int n = occupation[i];
        if (n < 0 || n >= space.cutoff) {
            throw ValidationError("basis_index: occupation " + std::to_string(n) +
                                  " outside [0, " + std::to_string(space.cutoff) + ")");
        }
        index = index * space.cutoff + n;
    }
    return index;
}

std::vector<int> occupation_of(const ModeSpace& space, long index) {
    if (index < 0 || index >= space.dim) {
        throw ValidationError("occupation_of: basis index out of range");
    }
    std::vector<int> occ(static_cast<std::size_t>(space.n_modes));
    for (int i = space.n_modes - 1; i >= 0; --i) {
        occ[static_cast<std::size_t>(i)] = static_cast<int>(index % space.cutoff);
        index /= space.cutoff;
    }
    return occ;
}

int mode_occupation(const ModeSpace& space, int mode, long index) {
    return static_cast<int>((index / mode_stride(space, mode)) % space.cutoff);
}

// --------------------------------- Op ---------------------------------------

Op Op::zero(const ModeSpace& s) { return Op{s, Matrix::Zero(s.dim, s.dim)}; }
Op Op::identity(const ModeSpace& s) { return Op{s, Matrix::Identity(s.dim, s.dim)}; }

void require_same_space(const Op& x, const Op& y, const char* what) {
    if (!(x.space == y.space)) {
        throw ValidationError(std::string(what) + ": operands live on different spaces");
    }
}

Op adjoint(const Op& x) { return Op{x.space, x.mat.adjoint()}; }

Op operator*(const Op& x, const Op& y) {
    require_same_space(x, y, "operator*");
    return Op{x.space, x.mat * y.mat};
}

Op operator+(const Op& x, const Op& y) {
    require_same_space(x, y, "operator+");
    return Op{x.space, x.mat + y.mat};
}

Op operator-(const Op& x, const Op& y) {
    require_same_space(x, y, "operator-");
    return Op{x.space, x.mat - y.mat};
}

Op operator*(Complex c, const Op& x) { return Op{x.space, c * x.mat}; }

Op commutator(const Op& x, const Op& y) {
    require_same_space(x, y, "commutator");
    return Op{x.space, x.mat * y.mat - y.mat * x.mat};
}

// ------------------------------ StateVector ---------------------------------

StateVector basis_state(const ModeSpace& space, std::span<const int> occupation) {
    Vector v = Vector::Zero(space.dim);
    v(basis_index(space, occupation)) = 1.0;
    return StateVector{space, std::move(v)};
}

StateVector apply(const Op& x, const StateVector& v) {
    if (!(x.space == v.space)) throw ValidationError("apply: operator/state space mismatch");
    return StateVector{v.space, x.mat * v.amplitudes};
}

// ----------------------------- Ladder operators -----------------------------

Op annihilator(const ModeSpace& space, int mode) {
    require_mode(space, mode, "annihilator");
    const long stride = mode_stride(space, mode);
    Op a = Op::zero(space);
    for (long idx = 0; idx < space.dim; ++idx) {
        const int n = static_cast<int>((idx / stride) % space.cutoff);
        if (n >= 1) a.mat(idx - stride, idx) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

Op creator(const ModeSpace& space, int mode) {
    require_mode(space, mode, "creator");
    const long stride = mode_stride(space, mode);
    Op ad = Op::zero(space);
    for (long idx = 0; idx < space.dim; ++idx) {
        const int n = static_cast<int>((idx / stride) % space.cutoff);
        // Entry mirrors annihilator's sqrt(n+1) at the transposed position, so the
        // adjoint relation holds entrywise with no tolerance.
        if (n + 1 <= space.cutoff - 1) {
            ad.mat(idx + stride, idx) = std::sqrt(static_cast<double>(n + 1));
        }
    }
    return ad;
}

Op number_op(const ModeSpace& space, int mode) {
    require_mode(space, mode, "number_op");
    const long stride = mode_stride(space, mode);
    Op num = Op::zero(space);
    for (long idx = 0; idx < space.dim; ++idx) {
        num.mat(idx, idx) = static_cast<double>((idx / stride) % space.cutoff);
    }
    return num;
}

// --------------------------- Weyl generators --------------------------------

Op weyl_generator(const ModeSpace& space, int i, int j, WeylAlgebra algebra) {
    require_mode(space, i, "weyl_generator");
    require_mode(space, j, "weyl_generator");
    const int  n_last = space.n_modes;
    const int  top    = space.cutoff - 1;
    Op e = Op::zero(space);

    // Entries are written as products of the individual sqrt factors in
    // application order, matching what the dense ladder-operator products give.
    const bool hyperbolic = (algebra == WeylAlgebra::u_n1_1);

    if (hyperbolic && i == n_last && j == n_last) {
        // E_nn = a_n^dag a_n + 1
        for (long idx = 0; idx < space.dim; ++idx) {
            e.mat(idx, idx) = static_cast<double>(mode_occupation(space, n_last, idx)) + 1.0;
        }
        return e;
    }
    if (hyperbolic && j == n_last && i != n_last) {
        // E_in = a_i^dag a_n^dag
        const long si = mode_stride(space, i), sn = mode_stride(space, n_last);
        for (long idx = 0; idx < space.dim; ++idx) {
            const int ni = mode_occupation(space, i, idx);
            const int nn = mode_occupation(space, n_last, idx);
            if (ni + 1 <= top && nn + 1 <= top) {
                e.mat(idx + si + sn, idx) =
                    std::sqrt(static_cast<double>(ni + 1)) * std::sqrt(static_cast<double>(nn + 1));
            }
        }
        return e;
    }
    if (hyperbolic && i == n_last && j != n_last) {
        // E_ni = a_n a_i  (the argument j plays the paper's i <= n-1 role)
        const long sj = mode_stride(space, j), sn = mode_stride(space, n_last);
        for (long idx = 0; idx < space.dim; ++idx) {
            const int nj = mode_occupation(space, j, idx);
            const int nn = mode_occupation(space, n_last, idx);
            if (nj >= 1 && nn >= 1) {
                e.mat(idx - sj - sn, idx) =
                    std::sqrt(static_cast<double>(nn)) * std::sqrt(static_cast<double>(nj));
            }
        }
        return e;
    }

    // Elliptic block shared by both algebras: E_ij = a_i^dag a_j.
    if (i == j) return number_op(space, i);
    const long si = mode_stride(space, i), sj = mode_stride(space, j);
    for (long idx = 0; idx < space.dim; ++idx) {
        const int ni = mode_occupation(space, i, idx);
        const int nj = mode_occupation(space, j, idx);
        if (nj >= 1 && ni + 1 <= top) {
            e.mat(idx + si - sj, idx) =
                std::sqrt(static_cast<double>(ni + 1)) * std::sqrt(static_cast<double>(nj));
        }
    }
    return e;
}

// --------------------------- Protected subspace -----------------------------

Op protected_projector(const ModeSpace& space, int margin) {
    if (margin < 0 || margin >= space.cutoff) {
        throw ValidationError("protected_projector: margin must satisfy 0 <= margin < cutoff");
    }
    const int keep = space.cutoff - 1 - margin;
    Op p = Op::zero(space);
    for (long idx = 0; idx < space.dim; ++idx) {
        bool ok = true;
        long rest = idx;
        for (int m = 0; m < space.n_modes; ++m) {
            if (rest % space.cutoff > keep) { ok = false; break; }
            rest /= space.cutoff;
        }
        if (ok) p.mat(idx, idx) = 1.0;
    }
    return p;
}

Op total_occupation_projector(const ModeSpace& space, int max_total) {
    if (max_total < 0) throw ValidationError("total_occupation_projector: max_total must be >= 0");
    Op p = Op::zero(space);
    for (long idx = 0; idx < space.dim; ++idx) {
        long rest = idx;
        int total = 0;
        for (int m = 0; m < space.n_modes; ++m) {
            total += static_cast<int>(rest % space.cutoff);
            rest /= space.cutoff;
        }
        if (total <= max_total) p.mat(idx, idx) = 1.0;
    }
    return p;
}

// ---------------------------- Tensor placement ------------------------------

Matrix embed_one_mode(const ModeSpace& space, int mode, const Matrix& local) {
    require_mode(space, mode, "embed_one_mode");
    const int c = space.cutoff;
    if (local.rows() != c || local.cols() != c) {
        throw ValidationError("embed_one_mode: local matrix must be cutoff x cutoff");
    }
    const long stride = mode_stride(space, mode);
    Matrix out = Matrix::Zero(space.dim, space.dim);
    for (long base = 0; base < space.dim; ++base) {
        if ((base / stride) % c != 0) continue; // enumerate environments with digit 0 at `mode`
        for (int a = 0; a < c; ++a) {
            for (int b = 0; b < c; ++b) {
                out(base + a * stride, base + b * stride) = local(a, b);
            }
        }
    }
    return out;
}

Matrix embed_two_mode(const ModeSpace& space, int mode_a, int mode_b, const Matrix& local) {
    require_mode(space, mode_a, "embed_two_mode");
    require_mode(space, mode_b, "embed_two_mode");
    if (mode_a == mode_b) throw ValidationError("embed_two_mode: modes must differ");
    const int c = space.cutoff;
    if (local.rows() != static_cast<long>(c) * c || local.cols() != static_cast<long>(c) * c) {
        throw ValidationError("embed_two_mode: local matrix must be cutoff^2 x cutoff^2");
    }
    const long sa = mode_stride(space, mode_a);
    const long sb = mode_stride(space, mode_b);
    Matrix out = Matrix::Zero(space.dim, space.dim);
    for (long base = 0; base < space.dim; ++base) {
        if ((base / sa) % c != 0 || (base / sb) % c != 0) continue;
        for (int ra = 0; ra < c; ++ra)
            for (int rb = 0; rb < c; ++rb)
                for (int ca = 0; ca < c; ++ca)
                    for (int cb = 0; cb < c; ++cb) {
                        const Complex v = local(ra * c + rb, ca * c + cb);
                        if (v != 0.0) out(base + ra * sa + rb * sb, base + ca * sa + cb * sb) = v;
                    }
    }
    return out;
}

} // namespace hqc
