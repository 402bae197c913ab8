#include "hqc/expm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hqc/errors.hpp"

namespace hqc {

namespace {

// Pade-13 coefficients (Higham, "The scaling and squaring method revisited").
constexpr double kB[14] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

constexpr double kTheta13 = 5.371920351148152;

double norm1(const Matrix& a) {
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Matrix-with-tangent pair; tangent operations mirror the (1,2) block of the
// augmented matrix [[a, da], [0, a]] through every step of the Pade scheme.
struct Jet {
    Matrix v;
    Matrix d;
    bool       with_d{false};
};

Jet mul(const Jet& x, const Jet& y) {
    Jet out;
    out.v = x.v * y.v;
    out.with_d = x.with_d;
    if (x.with_d) out.d = x.v * y.d + x.d * y.v;
    return out;
}

Jet expm_core(Jet a) {
    const long n = a.v.rows();
    double anorm = norm1(a.v);
    if (a.with_d) anorm += norm1(a.d); // 1-norm bound of the augmented matrix

    int s = 0;
    if (anorm > kTheta13) {
        s = static_cast<int>(std::ceil(std::log2(anorm / kTheta13)));
    }
    const double scale = std::ldexp(1.0, -s);
    a.v *= scale;
    if (a.with_d) a.d *= scale;

    Jet a2 = mul(a, a);
    Jet a4 = mul(a2, a2);
    Jet a6 = mul(a2, a4);

    auto poly = [&](double c6, double c4, double c2, double c0) {
        Jet out;
        out.v = c6 * a6.v + c4 * a4.v + c2 * a2.v;
        out.v.diagonal().array() += c0;
        out.with_d = a.with_d;
        if (a.with_d) out.d = c6 * a6.d + c4 * a4.d + c2 * a2.d;
        return out;
    };

    // U = A * (A6*(b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    Jet inner = poly(kB[13], kB[11], kB[9], 0.0);
    Jet u_tail = mul(a6, inner);
    Jet u_poly = poly(kB[7], kB[5], kB[3], kB[1]);
    Jet u_sum;
    u_sum.v = u_tail.v + u_poly.v;
    u_sum.with_d = a.with_d;
    if (a.with_d) u_sum.d = u_tail.d + u_poly.d;
    Jet u = mul(a, u_sum);

    // V = A6*(b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    Jet v_tail = mul(a6, poly(kB[12], kB[10], kB[8], 0.0));
    Jet v_poly = poly(kB[6], kB[4], kB[2], kB[0]);
    Jet v;
    v.v = v_tail.v + v_poly.v;
    v.with_d = a.with_d;
    if (a.with_d) v.d = v_tail.d + v_poly.d;

    // R = (V - U)^{-1} (V + U); dR = (V - U)^{-1} (dV + dU - (dV - dU) R)
    Matrix q = v.v - u.v;
    Matrix p = v.v + u.v;
    Eigen::PartialPivLU<Matrix> lu(q);
    Jet r;
    r.v = lu.solve(p);
    r.with_d = a.with_d;
    if (a.with_d) {
        Matrix dq = v.d - u.d;
        Matrix dp = v.d + u.d;
        r.d = lu.solve(dp - dq * r.v);
    }

    for (int i = 0; i < s; ++i) r = mul(r, r);
    (void)n;
    return r;
}

} // namespace

Matrix expm_pade(const Matrix& a) {
    if (a.rows() != a.cols()) throw ValidationError("expm_pade: matrix must be square");
    Jet j;
    j.v = a;
    j.with_d = false;
    return expm_core(std::move(j)).v;
}

std::pair<Matrix, Matrix> expm_pade_tangent(const Matrix& a, const Matrix& da) {
    if (a.rows() != a.cols()) throw ValidationError("expm_pade_tangent: matrix must be square");
    if (da.rows() != a.rows() || da.cols() != a.cols()) {
        throw ValidationError("expm_pade_tangent: tangent shape mismatch");
    }
    Jet j;
    j.v = a;
    j.d = da;
    j.with_d = true;
    Jet r = expm_core(std::move(j));
    return {std::move(r.v), std::move(r.d)};
}

namespace {

std::vector<std::vector<long>> group_sectors(const std::vector<int>& sector_of) {
    std::vector<std::pair<int, long>> tagged;
    tagged.reserve(sector_of.size());
    for (long i = 0; i < static_cast<long>(sector_of.size()); ++i) {
        tagged.emplace_back(sector_of[static_cast<std::size_t>(i)], i);
    }
    std::stable_sort(tagged.begin(), tagged.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::vector<long>> groups;
    for (const auto& [tag, idx] : tagged) {
        if (groups.empty() || sector_of[static_cast<std::size_t>(groups.back().front())] != tag) {
            groups.emplace_back();
        }
        groups.back().push_back(idx);
    }
    return groups;
}

} // namespace

Matrix expm_sectored(const Matrix& g, const std::vector<int>& sector_of) {
    auto [value, tangent] = expm_sectored_tangent(g, Matrix(), sector_of);
    (void)tangent;
    return value;
}

std::pair<Matrix, Matrix> expm_sectored_tangent(const Matrix& g,
                                                        const Matrix& dg,
                                                        const std::vector<int>& sector_of) {
    const long n = g.rows();
    if (g.cols() != n) throw ValidationError("expm_sectored: matrix must be square");
    if (static_cast<long>(sector_of.size()) != n) {
        throw ValidationError("expm_sectored: sector labels size mismatch");
    }
    const bool with_d = dg.size() != 0;

    Matrix value = Matrix::Zero(n, n);
    Matrix deriv;
    if (with_d) deriv = Matrix::Zero(n, n);

    for (const auto& idx : group_sectors(sector_of)) {
        const long b = static_cast<long>(idx.size());
        Matrix block(b, b), dblock;
        if (with_d) dblock.resize(b, b);
        for (long r = 0; r < b; ++r)
            for (long c = 0; c < b; ++c) {
                block(r, c) = g(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
                if (with_d) {
                    dblock(r, c) = dg(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
                }
            }
        Matrix eb, deb;
        if (with_d) {
            std::tie(eb, deb) = expm_pade_tangent(block, dblock);
        } else {
            eb = expm_pade(block);
        }
        for (long r = 0; r < b; ++r)
            for (long c = 0; c < b; ++c) {
                value(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]) = eb(r, c);
                if (with_d) {
                    deriv(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]) = deb(r, c);
                }
            }
    }
    return {std::move(value), std::move(deriv)};
}

Matrix antihermitian_part(const Matrix& x) {
    const long n = x.rows();
    Matrix s(n, n);
    for (long r = 0; r < n; ++r) {
        s(r, r) = Complex(0.0, x(r, r).imag());
        for (long c = r + 1; c < n; ++c) {
            const Complex v = 0.5 * (x(r, c) - std::conj(x(c, r)));
            s(r, c) = v;
            s(c, r) = -std::conj(v);
        }
    }
    return s;
}

double antihermitian_defect(const Matrix& x) {
    return (x + x.adjoint()).norm();
}

} // namespace hqc
