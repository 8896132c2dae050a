#ifndef RODMAT_EQUIVALENCE_HPP
#define RODMAT_EQUIVALENCE_HPP

#include <array>
#include <optional>
#include <vector>

#include "patching_matrix.hpp"

namespace rodmat {

namespace detail {

using Row4 = std::array<Rational, 4>;

inline std::vector<Row4> nullspace4(std::vector<Row4> rows)
{
    std::array<int, 4> pivot_col_of_row{-1, -1, -1, -1};
    std::vector<int> pivots;
    std::size_t r = 0;
    for (int col = 0; col < 4 && r < rows.size(); ++col) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][col] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        Rational inv = 1 / rows[r][col];
        for (auto& x : rows[r]) x *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col] == 0) continue;
            Rational f = rows[i][col];
            for (int j = 0; j < 4; ++j) rows[i][j] -= f * rows[r][j];
        }
        pivot_col_of_row[r] = col;
        pivots.push_back(col);
        ++r;
    }
    std::vector<Row4> basis;
    for (int free = 0; free < 4; ++free) {
        if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
        Row4 v{0, 0, 0, 0};
        v[free] = 1;
        for (std::size_t i = 0; i < r; ++i) v[pivot_col_of_row[i]] = -rows[i][free];
        basis.push_back(v);
    }
    return basis;
}

inline Polynomial lcm(const Polynomial& a, const Polynomial& b)
{
    return exact_div(a * b, gcd(a, b)).monic();
}

} // namespace detail

// Constant det-1 C with C P C^T = Q, if one exists. Solves C P = Q C^{-T}
// (linear in the entries of C once C^{-T} is written through the adjugate)
// exactly, then looks for a null vector whose determinant is a positive square.
inline std::optional<ConjugationRecord> find_conjugation(const PatchingMatrix& P, const PatchingMatrix& Q)
{
    if (P.signature != Q.signature) return std::nullopt;
    if (P.same_entries(Q)) return ConjugationRecord::identity();
    Polynomial D = Polynomial::constant(1);
    for (const auto* f : {&P.p11, &P.p12, &P.p22, &Q.p11, &Q.p12, &Q.p22}) D = detail::lcm(D, f->den());
    auto lift = [&](const RationalFunction& f) { return f.num() * exact_div(D, f.den()); };
    Polynomial p[2][2] = {{lift(P.p11), lift(P.p12)}, {lift(P.p12), lift(P.p22)}};
    Polynomial q[2][2] = {{lift(Q.p11), lift(Q.p12)}, {lift(Q.p12), lift(Q.p22)}};
    // unknown order: c11, c12, c21, c22; K(C) = [[c22, -c21], [-c12, c11]]
    // (C P)_{ij} = sum_k c_{ik} p_{kj};  (Q K)_{ij} = sum_k q_{ik} K_{kj}
    auto cidx = [](int i, int k) { return 2 * i + k; };
    // K_{kj} = sign * c_{index}
    auto kterm = [](int k, int j) -> std::pair<int, int> {
        if (k == 0 && j == 0) return {3, 1};
        if (k == 0 && j == 1) return {2, -1};
        if (k == 1 && j == 0) return {1, -1};
        return {0, 1};
    };
    std::vector<detail::Row4> rows;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::array<Polynomial, 4> coef;
            for (int k = 0; k < 2; ++k) {
                coef[cidx(i, k)] += p[k][j];
                auto [idx, sg] = kterm(k, j);
                coef[idx] -= Rational(sg) * q[i][k];
            }
            int deg = 0;
            for (const auto& c : coef) deg = std::max(deg, c.degree());
            for (int d = 0; d <= deg; ++d) {
                detail::Row4 row{coef[0][d], coef[1][d], coef[2][d], coef[3][d]};
                if (row[0] != 0 || row[1] != 0 || row[2] != 0 || row[3] != 0) rows.push_back(row);
            }
        }
    auto basis = detail::nullspace4(rows);
    if (basis.empty()) return std::nullopt;

    auto attempt = [&](const detail::Row4& c) -> std::optional<ConjugationRecord> {
        Rational d = c[0] * c[3] - c[1] * c[2];
        if (d <= 0) return std::nullopt;
        auto root = rational_sqrt(d);
        if (!root) return std::nullopt;
        ConjugationRecord C{c[0] / *root, c[1] / *root, c[2] / *root, c[3] / *root};
        if (congruence(P, C).same_entries(Q)) return C;
        return std::nullopt;
    };
    if (basis.size() == 1) {
        if (auto C = attempt(basis[0])) return C;
        detail::Row4 neg{-basis[0][0], -basis[0][1], -basis[0][2], -basis[0][3]};
        return attempt(neg);
    }
    // Small integer combinations, in order of increasing max-norm.
    const int bound = 6;
    std::size_t k = basis.size();
    for (int norm = 1; norm <= bound; ++norm) {
        std::vector<int> coeffs(k, -norm);
        while (true) {
            int mx = 0;
            for (int v : coeffs) mx = std::max(mx, std::abs(v));
            if (mx == norm) {
                detail::Row4 c{0, 0, 0, 0};
                for (std::size_t b = 0; b < k; ++b)
                    for (int j = 0; j < 4; ++j) c[j] += Rational(coeffs[b]) * basis[b][j];
                if (auto C = attempt(c)) return C;
            }
            std::size_t pos = 0;
            while (pos < k && coeffs[pos] == norm) coeffs[pos++] = -norm;
            if (pos == k) break;
            ++coeffs[pos];
        }
    }
    return std::nullopt;
}

inline bool conjugation_equivalent(const PatchingMatrix& P, const PatchingMatrix& Q)
{
    return find_conjugation(P, Q).has_value();
}

} // namespace rodmat

#endif
