#include "phase/classify_complex_linear.hpp"

#include "phase/linalg.hpp"
#include "phase/witness.hpp"
#include "power_law.hpp"

#include <algorithm>
#include <functional>

namespace phase {

using detail::AlphaConstraint;
using detail::solve_power_law;

namespace {

GeneratorSet scalar_set(std::span<const cplx> vals) {
    GeneratorSet g;
    g.space = complex_linear(1);
    for (cplx v : vals) {
        CMat m(1, 1);
        m(0, 0) = v;
        g.generators.push_back(m);
    }
    return g;
}

// Backtracking search for a bijection k -> perm[k] whose per-coordinate scalar
// relations are all solvable; per-coordinate exponents are independent.
bool match_coordinates(const std::vector<std::vector<cplx>>& p_cols,
                       const std::vector<std::vector<cplx>>& q_cols, bool conj,
                       const ToleranceConfig& tol, std::vector<int>& perm,
                       std::vector<cplx>& alphas) {
    const std::size_t n = p_cols.size();
    std::vector<std::vector<std::optional<cplx>>> comp(n, std::vector<std::optional<cplx>>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            comp[k][j] = solve_power_law(p_cols[k], q_cols[j], conj,
                                         AlphaConstraint::GreaterMinusOne, tol);

    perm.assign(n, -1);
    alphas.assign(n, cplx(0.0, 0.0));
    std::vector<bool> used(n, false);
    std::function<bool(std::size_t)> extend = [&](std::size_t k) {
        if (k == n) return true;
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j] || !comp[k][j]) continue;
            used[j] = true;
            perm[k] = static_cast<int>(j);
            alphas[k] = *comp[k][j];
            if (extend(k + 1)) return true;
            used[j] = false;
        }
        return false;
    };
    return extend(0);
}

} // namespace

Verdict classify_scalar_top(std::span<const cplx> ps, std::span<const cplx> qs,
                            const ToleranceConfig& tol) {
    if (ps.size() != qs.size())
        return Verdict::not_equivalent(Category::Topological, "generator counts differ");
    std::optional<Verdict> downgraded;
    for (bool conj : {false, true}) {
        auto alpha = solve_power_law(ps, qs, conj, AlphaConstraint::GreaterMinusOne, tol);
        if (!alpha) continue;
        DiagPowerWitness w;
        w.S = CMat::Identity(1, 1);
        w.T = CMat::Identity(1, 1);
        w.perm = {0};
        w.alphas = {*alpha};
        w.gammas = {cplx(1.0, 0.0)};
        w.conj = conj;
        Verdict v = certified_equivalent(Witness{w}, scalar_set(ps), scalar_set(qs),
                                         Category::Topological, tol);
        if (v.equivalent()) {
            v.details.emplace_back("alpha", *alpha);
            v.details.emplace_back("conj", cplx(conj ? 1.0 : 0.0, 0.0));
            return v;
        }
        downgraded = std::move(v);
    }
    if (downgraded) return *downgraded;
    return Verdict::not_equivalent(Category::Topological,
                                   "no exponent with Re(alpha) > -1 satisfies q_r = c(p_r)|p_r|^alpha "
                                   "in either orientation branch");
}

Verdict classify_diag_top(const GeneratorSet& ps, const GeneratorSet& qs,
                          const ToleranceConfig& tol) {
    const Category cat = Category::Topological;
    if (!is_abelian(ps, tol) || !is_abelian(qs, tol))
        return Verdict::inconclusive(cat, "diagonal criterion requires abelian families");

    auto pd = simultaneous_diagonalize(ps.generators, tol);
    auto qd = simultaneous_diagonalize(qs.generators, tol);
    if (!pd || !qd)
        return Verdict::inconclusive(cat, "family is not simultaneously diagonalizable");

    const int n = ps.matrix_size();
    // premise: every ln P_r and ln Q_r is a simple matrix
    for (const auto& diag : {std::cref(pd->eigenvalues), std::cref(qd->eigenvalues)}) {
        for (const auto& eigs : diag.get()) {
            std::vector<cplx> logs;
            for (cplx e : eigs) {
                if (std::abs(std::log(std::abs(e))) <= tol.eig_rel && std::abs(std::arg(e)) <= tol.eig_rel)
                    return Verdict::inconclusive(cat, "unit eigenvalue: log-spectrum simplicity fails");
                logs.push_back(std::log(e));
            }
            try {
                if (!is_simple_collection(logs, tol.s_max, tol.eig_rel))
                    return Verdict::inconclusive(cat, "log-spectrum is not a simple collection");
            } catch (const Error&) {
                return Verdict::inconclusive(cat, "log-spectrum has a zero entry");
            }
        }
    }

    // transpose eigenvalue tables to per-coordinate towers
    const std::size_t nu = pd->eigenvalues.size();
    std::vector<std::vector<cplx>> p_cols(static_cast<std::size_t>(n), std::vector<cplx>(nu));
    std::vector<std::vector<cplx>> q_cols(static_cast<std::size_t>(n), std::vector<cplx>(nu));
    for (std::size_t r = 0; r < nu; ++r)
        for (int k = 0; k < n; ++k) {
            p_cols[static_cast<std::size_t>(k)][r] = pd->eigenvalues[r][static_cast<std::size_t>(k)];
            q_cols[static_cast<std::size_t>(k)][r] = qd->eigenvalues[r][static_cast<std::size_t>(k)];
        }

    std::optional<Verdict> downgraded;
    for (bool conj : {false, true}) {
        std::vector<int> perm;
        std::vector<cplx> alphas;
        if (!match_coordinates(p_cols, q_cols, conj, tol, perm, alphas)) continue;
        DiagPowerWitness w;
        w.S = pd->transform;
        w.T = qd->transform;
        w.perm = perm;
        w.alphas = alphas;
        w.gammas.assign(static_cast<std::size_t>(n), cplx(1.0, 0.0));
        w.conj = conj;
        Verdict v = certified_equivalent(Witness{w}, ps, qs, cat, tol);
        if (v.equivalent()) {
            for (std::size_t k = 0; k < alphas.size(); ++k)
                v.details.emplace_back("alpha_" + std::to_string(k), alphas[k]);
            v.details.emplace_back("conj", cplx(conj ? 1.0 : 0.0, 0.0));
            return v;
        }
        downgraded = std::move(v);
    }
    if (downgraded) return *downgraded;
    return Verdict::not_equivalent(cat, "no coordinate permutation and exponents with "
                                        "Re(alpha_k) > -1 satisfy the diagonal power relations");
}

Verdict classify_rlinear(const GeneratorSet& ps, const GeneratorSet& qs, const ToleranceConfig& tol,
                         Category category) {
    const int n = ps.matrix_size();
    auto a_basis = intertwiner_space(ps.generators, qs.generators, /*conjugate=*/false, tol);
    auto b_basis = intertwiner_space(ps.generators, qs.generators, /*conjugate=*/true, tol);

    // realified span of w -> A w + B conj(w); invertibility is the realified
    // determinant test
    std::vector<CMat> real_span;
    auto realify = [&](const CMat& m, bool antilinear) {
        RMat r(2 * n, 2 * n);
        if (!antilinear) {
            r.block(0, 0, n, n) = m.real();
            r.block(0, n, n, n) = -m.imag();
            r.block(n, 0, n, n) = m.imag();
            r.block(n, n, n, n) = m.real();
        } else {
            r.block(0, 0, n, n) = m.real();
            r.block(0, n, n, n) = m.imag();
            r.block(n, 0, n, n) = m.imag();
            r.block(n, n, n, n) = -m.real();
        }
        real_span.push_back(r.cast<cplx>());
    };
    for (const CMat& a : a_basis) realify(a, false);
    for (const CMat& b : b_basis) realify(b, true);

    auto combo = contains_invertible(real_span, tol, tol.seed);
    if (!combo)
        return Verdict::not_equivalent(category,
                                       "no invertible real-linear map w -> A w + B conj(w) "
                                       "intertwines the families");
    RMat r = combo->real();
    RLinearMapWitness w;
    w.A = CMat(n, n);
    w.B = CMat(n, n);
    w.A.real() = 0.5 * (r.block(0, 0, n, n) + r.block(n, n, n, n));
    w.A.imag() = 0.5 * (r.block(n, 0, n, n) - r.block(0, n, n, n));
    w.B.real() = 0.5 * (r.block(0, 0, n, n) - r.block(n, n, n, n));
    w.B.imag() = 0.5 * (r.block(n, 0, n, n) + r.block(0, n, n, n));
    Verdict v = certified_equivalent(Witness{w}, ps, qs, category, tol);
    if (v.equivalent()) return v;
    return Verdict::inconclusive(category, v.unmet_premise);
}

Verdict classify_holo(const GeneratorSet& ps, const GeneratorSet& qs, const ToleranceConfig& tol) {
    auto basis = intertwiner_space(ps.generators, qs.generators, /*conjugate=*/false, tol);
    auto combo = contains_invertible(basis, tol, tol.seed);
    if (!combo)
        return Verdict::not_equivalent(Category::Holomorphic,
                                       "intertwiner space contains no invertible member");
    LinearMapWitness w;
    w.S = *combo;
    Verdict v = certified_equivalent(Witness{w}, ps, qs, Category::Holomorphic, tol);
    if (v.equivalent()) return v;
    return Verdict::inconclusive(Category::Holomorphic, v.unmet_premise);
}

Verdict classify_nonabelian_top(const GeneratorSet& ps, const GeneratorSet& qs,
                                const ToleranceConfig& tol) {
    Verdict rigid = classify_rlinear(ps, qs, tol, Category::Topological);
    if (rigid.equivalent()) return rigid;
    return Verdict::inconclusive(Category::Topological,
                                 "non-abelian topological rigidity is proven only in general "
                                 "position; no rigid witness found");
}

Verdict classify_complex_linear(const GeneratorSet& ps, const GeneratorSet& qs, Category category,
                                const ToleranceConfig& tol) {
    if (category == Category::Holomorphic) return classify_holo(ps, qs, tol);
    if (category == Category::Smooth || category == Category::RHolomorphic)
        return classify_rlinear(ps, qs, tol, category);

    bool pa = is_abelian(ps, tol);
    bool qa = is_abelian(qs, tol);
    if (pa != qa)
        return Verdict::not_equivalent(Category::Topological,
                                       "one phase group is abelian, the other is not");
    if (!pa) return classify_nonabelian_top(ps, qs, tol);
    if (ps.matrix_size() == 1) {
        std::vector<cplx> pv, qv;
        for (const CMat& m : ps.generators) pv.push_back(m(0, 0));
        for (const CMat& m : qs.generators) qv.push_back(m(0, 0));
        return classify_scalar_top(pv, qv, tol);
    }
    return classify_diag_top(ps, qs, tol);
}

} // namespace phase
