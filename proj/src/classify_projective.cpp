#include "phase/classify_projective.hpp"

#include "phase/linalg.hpp"
#include "phase/witness.hpp"
#include "power_law.hpp"

#include <algorithm>
#include <functional>

namespace phase {

using detail::AlphaConstraint;
using detail::solve_power_law;

namespace {

enum class ActionClass { Scalar, DiagonalizableNonScalar, Defective };

ActionClass action_class(const CMat& m, const ToleranceConfig& tol) {
    const int sz = static_cast<int>(m.rows());
    cplx mean = m.trace() / static_cast<double>(sz);
    if ((m - mean * CMat::Identity(sz, sz)).norm() <= tol.eig_rel * std::max(1.0, m.norm()) * 16.0)
        return ActionClass::Scalar;
    SpectralForm sf = eig_decompose(m, tol);
    return sf.diagonalizable ? ActionClass::DiagonalizableNonScalar : ActionClass::Defective;
}

std::vector<cplx> ratios_against(const std::vector<cplx>& eigs, std::size_t denom) {
    std::vector<cplx> out;
    for (std::size_t k = 0; k < eigs.size(); ++k)
        if (k != denom) out.push_back(eigs[k] / eigs[denom]);
    return out;
}

} // namespace

bool jordan_block_count_compatible(const GeneratorSet& ps, const GeneratorSet& qs,
                                   const ToleranceConfig& tol) {
    if (ps.count() != qs.count()) return false;
    for (int r = 0; r < ps.count(); ++r)
        if (action_class(ps.generators[static_cast<std::size_t>(r)], tol) !=
            action_class(qs.generators[static_cast<std::size_t>(r)], tol))
            return false;
    return true;
}

Verdict classify_cp1_top(const GeneratorSet& ps, const GeneratorSet& qs,
                         const ToleranceConfig& tol) {
    const Category cat = Category::Topological;
    if (!jordan_block_count_compatible(ps, qs, tol))
        return Verdict::not_equivalent(cat, "fixed-point structure differs for some generator pair");

    auto pd = simultaneous_diagonalize(ps.generators, tol);
    auto qd = simultaneous_diagonalize(qs.generators, tol);
    if (!pd || !qd)
        return Verdict::inconclusive(
            cat, "no sufficient topological criterion for defective abelian families on CP^1");

    std::vector<cplx> rho, sigma;
    for (const auto& e : pd->eigenvalues) rho.push_back(e[0] / e[1]);
    for (const auto& e : qd->eigenvalues) sigma.push_back(e[0] / e[1]);

    std::optional<Verdict> downgraded;
    for (bool conj : {false, true}) {
        auto alpha = solve_power_law(rho, sigma, conj, AlphaConstraint::NotMinusOne, tol);
        if (!alpha) continue;
        DiagPowerWitness w;
        w.S = pd->transform;
        w.T = qd->transform;
        w.perm = {0, 1};
        w.alphas = {*alpha, *alpha};
        w.gammas = {cplx(1.0, 0.0), cplx(1.0, 0.0)};
        w.conj = conj;
        w.projective = true;
        w.swapped_fixed_points = alpha->real() < -1.0;
        Verdict v = certified_equivalent(Witness{w}, ps, qs, cat, tol);
        if (v.equivalent()) {
            v.details.emplace_back("alpha", *alpha);
            v.details.emplace_back("conj", cplx(conj ? 1.0 : 0.0, 0.0));
            return v;
        }
        downgraded = std::move(v);
    }
    if (downgraded) return *downgraded;
    return Verdict::not_equivalent(cat, "eigenvalue ratios admit no common exponent with "
                                        "Re(alpha) != -1 in either orientation branch");
}

Verdict classify_cpn_top(const GeneratorSet& ps, const GeneratorSet& qs,
                         const ToleranceConfig& tol) {
    const Category cat = Category::Topological;
    auto pd = simultaneous_diagonalize(ps.generators, tol);
    auto qd = simultaneous_diagonalize(qs.generators, tol);
    if (!pd || !qd)
        return Verdict::inconclusive(cat, "family is not simultaneously diagonalizable");

    const std::size_t m = pd->eigenvalues[0].size(); // n + 1 homogeneous coordinates
    const std::size_t nu = pd->eigenvalues.size();

    // premise: the log collections of eigenvalue ratios are simple
    for (const auto& table : {std::cref(pd->eigenvalues), std::cref(qd->eigenvalues)}) {
        for (const auto& eigs : table.get()) {
            std::vector<cplx> logs;
            bool unit_ratio = false;
            for (std::size_t k = 0; k + 1 < m; ++k) {
                cplx ratio = eigs[k] / eigs[m - 1];
                if (std::abs(ratio - 1.0) <= tol.eig_rel) unit_ratio = true;
                logs.push_back(std::log(ratio));
            }
            if (unit_ratio)
                return Verdict::inconclusive(cat, "repeated eigenvalue ratio: simplicity premise fails");
            try {
                if (!is_simple_collection(logs, tol.s_max, tol.eig_rel))
                    return Verdict::inconclusive(cat, "ratio-log collection is not simple");
            } catch (const Error&) {
                return Verdict::inconclusive(cat, "ratio-log collection has a zero entry");
            }
        }
    }

    // permutation rho over the m coordinates and one common alpha; the
    // denominator slot rho(m-1) is chosen first, then coordinates are matched
    // with incremental feasibility checks on the pooled relations
    std::optional<Verdict> downgraded;
    for (bool conj : {false, true}) {
        for (std::size_t denom = 0; denom < m; ++denom) {
            std::vector<int> perm(m, -1);
            perm[m - 1] = static_cast<int>(denom);
            std::vector<bool> used(m, false);
            used[denom] = true;
            std::vector<cplx> pooled_p, pooled_q;
            cplx found_alpha;

            std::function<bool(std::size_t)> extend = [&](std::size_t k) -> bool {
                if (k == m - 1) {
                    auto alpha = solve_power_law(pooled_p, pooled_q, conj,
                                                 AlphaConstraint::GreaterMinusOne, tol);
                    if (!alpha) return false;
                    found_alpha = *alpha;
                    return true;
                }
                for (std::size_t j = 0; j < m; ++j) {
                    if (used[j]) continue;
                    std::size_t base = pooled_p.size();
                    for (std::size_t r = 0; r < nu; ++r) {
                        pooled_p.push_back(pd->eigenvalues[r][k] / pd->eigenvalues[r][m - 1]);
                        pooled_q.push_back(qd->eigenvalues[r][j] / qd->eigenvalues[r][denom]);
                    }
                    bool feasible = true;
                    try {
                        feasible = solve_power_law(pooled_p, pooled_q, conj,
                                                   AlphaConstraint::GreaterMinusOne, tol)
                                       .has_value();
                    } catch (const Error&) {
                        feasible = false;
                    }
                    if (feasible) {
                        used[j] = true;
                        perm[k] = static_cast<int>(j);
                        if (extend(k + 1)) return true;
                        used[j] = false;
                    }
                    pooled_p.resize(base);
                    pooled_q.resize(base);
                }
                return false;
            };

            if (!extend(0)) continue;
            DiagPowerWitness w;
            w.S = pd->transform;
            w.T = qd->transform;
            w.perm = perm;
            w.alphas.assign(m, found_alpha);
            w.gammas.assign(m, cplx(1.0, 0.0));
            w.conj = conj;
            w.projective = true;
            Verdict v = certified_equivalent(Witness{w}, ps, qs, cat, tol);
            if (v.equivalent()) {
                v.details.emplace_back("alpha", found_alpha);
                v.details.emplace_back("conj", cplx(conj ? 1.0 : 0.0, 0.0));
                return v;
            }
            downgraded = std::move(v);
        }
    }
    if (downgraded) return *downgraded;
    return Verdict::not_equivalent(cat, "no coordinate permutation with one common exponent "
                                        "satisfies the ratio power relations");
}

Verdict classify_proj_rigid(const GeneratorSet& ps, const GeneratorSet& qs, Category level,
                            const ToleranceConfig& tol) {
    const int m = ps.matrix_size();
    const int nu = ps.count();

    std::vector<CMat> pn, qn;
    for (int r = 0; r < nu; ++r) {
        pn.push_back(ps.normalized_generator(r));
        qn.push_back(qs.normalized_generator(r));
    }

    std::vector<bool> branches =
        level == Category::Holomorphic ? std::vector<bool>{false} : std::vector<bool>{false, true};
    const cplx omega = std::exp(cplx(0.0, 2.0 * M_PI / static_cast<double>(m)));

    std::optional<Verdict> downgraded;
    for (bool conj : branches) {
        std::vector<int> combo(static_cast<std::size_t>(nu), 0);
        while (true) {
            std::vector<CMat> scaled(qn.begin(), qn.end());
            for (int r = 0; r < nu; ++r)
                scaled[static_cast<std::size_t>(r)] *=
                    std::pow(omega, static_cast<double>(combo[static_cast<std::size_t>(r)]));
            auto basis = intertwiner_space(pn, scaled, conj, tol);
            if (auto s = contains_invertible(basis, tol, tol.seed)) {
                LinearMapWitness w;
                w.S = *s;
                w.conj = conj;
                w.projective = true;
                Verdict v = certified_equivalent(Witness{w}, ps, qs, level, tol);
                if (v.equivalent()) {
                    v.details.emplace_back("antiholomorphic", cplx(conj ? 1.0 : 0.0, 0.0));
                    return v;
                }
                downgraded = std::move(v);
            }
            // next scale-root combination
            int pos = 0;
            while (pos < nu) {
                if (++combo[static_cast<std::size_t>(pos)] < m) break;
                combo[static_cast<std::size_t>(pos)] = 0;
                ++pos;
            }
            if (pos == nu) break;
        }
    }
    if (downgraded) return *downgraded;
    return Verdict::not_equivalent(level, "no invertible projective intertwiner exists for any "
                                          "scale-root combination");
}

Verdict classify_projective(const GeneratorSet& ps, const GeneratorSet& qs, Category category,
                            const ToleranceConfig& tol) {
    if (category != Category::Topological) {
        Category level = category == Category::Holomorphic ? Category::Holomorphic : category;
        return classify_proj_rigid(ps, qs, level, tol);
    }

    bool pa = is_abelian(ps, tol);
    bool qa = is_abelian(qs, tol);
    if (pa != qa)
        return Verdict::not_equivalent(Category::Topological,
                                       "one phase group is abelian, the other is not");
    if (!pa) {
        Verdict rigid = classify_proj_rigid(ps, qs, Category::Smooth, tol);
        if (rigid.equivalent()) {
            rigid.category = Category::Topological;
            return rigid;
        }
        return Verdict::inconclusive(Category::Topological,
                                     "non-abelian topological rigidity is proven only in general "
                                     "position; no rigid witness found");
    }
    if (ps.space.n == 1) return classify_cp1_top(ps, qs, tol);
    return classify_cpn_top(ps, qs, tol);
}

} // namespace phase
