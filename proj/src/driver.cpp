#include "sbdc/driver.hpp"

#include "sbdc/log.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace sbdc {

namespace {

struct NodeResult {
    DecompositionNode node;
    Matrix p;                                 // local accumulated transform
    std::vector<int> sizes;                   // leaf sizes, tree order
    std::vector<std::vector<Matrix>> blocks;  // per input matrix
};

struct BuildContext {
    Mode mode;
    SolverConfig cfg;
    int depth_limit = 0;
    DecompositionResiduals res;
};

void track_pair(BuildContext& ctx, const IdempotentPair& pair) {
    ctx.res.max_idempotency = std::max(ctx.res.max_idempotency, pair.idem_residual);
    ctx.res.max_idempotency = std::max(ctx.res.max_idempotency, pair.orth_residual);
    ctx.res.max_membership = std::max(ctx.res.max_membership, pair.member_residual);
}

NodeResult leaf_result(const MatrixSet& set, int depth, const SplitOutcome& outcome,
                       int center_dim) {
    NodeResult r;
    r.node.depth = depth;
    r.node.size = set.n();
    r.node.center_dim = center_dim;
    r.node.restricted_dim = outcome.restricted_dim;
    r.node.tries = outcome.tries;
    r.node.leaf = true;
    r.node.evidence = outcome.evidence;
    r.p = Matrix::Identity(set.n(), set.n());
    r.sizes = {set.n()};
    r.blocks.resize(static_cast<std::size_t>(set.m()));
    for (int i = 0; i < set.m(); ++i)
        r.blocks[static_cast<std::size_t>(i)] = {set.matrices[static_cast<std::size_t>(i)]};
    return r;
}

NodeResult decompose_node(BuildContext& ctx, const MatrixSet& raw, int depth,
                          const std::string& path) {
    if (depth > ctx.depth_limit)
        throw DepthExceeded("recursion exceeded max_depth");

    const MatrixSet set = validate_matrix_set(raw, ctx.cfg);
    ctx.res.max_symmetry = std::max(ctx.res.max_symmetry, set.symmetry_residual);
    const int n = set.n();

    const CenterBasis cb = center_basis(set, ctx.cfg);

    SolverConfig node_cfg = ctx.cfg;
    node_cfg.seed = mix_seed(ctx.cfg.seed, path);

    SplitOutcome outcome = find_split(cb, ctx.mode, node_cfg);
    // a numerically bad idempotent gets one retry with fresh randomness
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (!outcome.found())
            break;
        try {
            TransformStep step = build_transform(*outcome.pair, ctx.mode, ctx.cfg);
            const MatrixSet transformed = apply_congruence(step.p, set, ctx.mode, ctx.cfg);
            BlockSplit split = extract_blocks(transformed, step.sizes, ctx.cfg);
            step.off_block_residual = split.off_block_residual;
            track_pair(ctx, *outcome.pair);
            ctx.res.max_off_block = std::max(ctx.res.max_off_block, split.off_block_residual);
            if (ctx.mode == Mode::OrthogonalCongruence || ctx.mode == Mode::UnitaryStarCongruence)
                ctx.res.transform_orthogonality =
                    std::max(ctx.res.transform_orthogonality.value_or(0.0),
                             step.unitarity_residual);

            NodeResult left = decompose_node(ctx, split.first, depth + 1, path + "0");
            NodeResult right = decompose_node(ctx, split.second, depth + 1, path + "1");

            NodeResult r;
            r.node.depth = depth;
            r.node.size = n;
            r.node.center_dim = cb.dim();
            r.node.restricted_dim = outcome.restricted_dim;
            r.node.tries = outcome.tries;
            r.node.leaf = false;
            r.node.step = step;
            r.node.left = std::make_unique<DecompositionNode>(std::move(left.node));
            r.node.right = std::make_unique<DecompositionNode>(std::move(right.node));

            Matrix embedded = Matrix::Zero(n, n);
            embedded.topLeftCorner(step.sizes.first, step.sizes.first) = left.p;
            embedded.bottomRightCorner(step.sizes.second, step.sizes.second) = right.p;
            r.p = step.p * embedded;

            r.sizes = left.sizes;
            r.sizes.insert(r.sizes.end(), right.sizes.begin(), right.sizes.end());
            r.blocks.resize(static_cast<std::size_t>(set.m()));
            for (std::size_t i = 0; i < r.blocks.size(); ++i) {
                r.blocks[i] = std::move(left.blocks[i]);
                r.blocks[i].insert(r.blocks[i].end(), right.blocks[i].begin(),
                                   right.blocks[i].end());
            }
            return r;
        } catch (const BlockResidualExceeded& e) {
            log_warn(std::string("split rejected at node ") + path + ": " + e.what());
        } catch (const IllConditioned& e) {
            log_warn(std::string("split rejected at node ") + path + ": " + e.what());
        } catch (const RankTraceMismatch& e) {
            log_warn(std::string("split rejected at node ") + path + ": " + e.what());
        }
        if (attempt == 0) {
            node_cfg.seed = mix_seed(ctx.cfg.seed, path + "r");
            const int rdim = outcome.restricted_dim;
            outcome = find_split(cb, ctx.mode, node_cfg);
            if (outcome.restricted_dim == 0)
                outcome.restricted_dim = rdim;
        }
    }

    if (outcome.found()) {
        // both rebuild attempts failed numerically
        SplitOutcome fallback = SplitOutcome::none(SplitEvidence::BudgetExhausted, outcome.tries);
        fallback.restricted_dim = outcome.restricted_dim;
        outcome = fallback;
    }
    log_debug("leaf at node '" + path + "' size " + std::to_string(n) + " evidence " +
              to_string(outcome.evidence));
    return leaf_result(set, depth, outcome, cb.dim());
}

bool all_leaves_certified(const DecompositionNode& node) {
    if (node.leaf)
        return node.evidence == SplitEvidence::DimOne;
    return all_leaves_certified(*node.left) && all_leaves_certified(*node.right);
}

double off_block_residual_of(const Matrix& transformed, const std::vector<int>& sizes) {
    double off2 = 0.0;
    int r0 = 0;
    for (int br = 0; br < static_cast<int>(sizes.size()); ++br) {
        int c0 = 0;
        for (int bc = 0; bc < static_cast<int>(sizes.size()); ++bc) {
            if (br != bc)
                off2 += transformed
                            .block(r0, c0, sizes[static_cast<std::size_t>(br)],
                                   sizes[static_cast<std::size_t>(bc)])
                            .squaredNorm();
            c0 += sizes[static_cast<std::size_t>(bc)];
        }
        r0 += sizes[static_cast<std::size_t>(br)];
    }
    return std::sqrt(off2) / std::max(1e-30, transformed.norm());
}

Matrix transform_of(const Matrix& p, const Matrix& a, Mode mode) {
    const bool star = mode == Mode::StarCongruence || mode == Mode::UnitaryStarCongruence;
    return star ? Matrix(p.adjoint() * a * p) : Matrix(p.transpose() * a * p);
}

} // namespace

std::vector<int> Decomposition::sorted_block_sizes() const {
    std::vector<int> s = block_sizes;
    std::sort(s.begin(), s.end());
    return s;
}

Decomposition decompose(const MatrixSet& raw, Mode mode, const SolverConfig& cfg) {
    cfg.validate();
    const MatrixSet set = validate_matrix_set(raw, cfg);
    check_mode_compatibility(set, mode);

    BuildContext ctx;
    ctx.mode = mode;
    ctx.cfg = cfg;
    ctx.depth_limit = cfg.depth_limit(set.n());

    NodeResult root = decompose_node(ctx, set, 0, "");

    Decomposition dec;
    dec.p_global = std::move(root.p);
    dec.block_sizes = std::move(root.sizes);
    dec.blocks = std::move(root.blocks);
    dec.tree = std::move(root.node);
    dec.mode = mode;
    dec.residuals = ctx.res;
    dec.certified_finest = all_leaves_certified(dec.tree);

    // final whole-transform residual, recomputed from the original input
    for (int i = 0; i < set.m(); ++i) {
        const Matrix t =
            transform_of(dec.p_global, set.matrices[static_cast<std::size_t>(i)], mode);
        dec.residuals.max_off_block =
            std::max(dec.residuals.max_off_block, off_block_residual_of(t, dec.block_sizes));
    }
    if (mode == Mode::OrthogonalCongruence || mode == Mode::UnitaryStarCongruence) {
        const int n = set.n();
        const double u = (dec.p_global.adjoint() * dec.p_global - Matrix::Identity(n, n)).norm();
        dec.residuals.transform_orthogonality =
            std::max(dec.residuals.transform_orthogonality.value_or(0.0), u);
    }
    return dec;
}

bool VerificationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const VerificationCheck& c) { return c.passed; });
}

namespace {

std::vector<int> leaf_sizes(const DecompositionNode& node) {
    if (node.leaf)
        return {node.size};
    std::vector<int> s = leaf_sizes(*node.left);
    const std::vector<int> r = leaf_sizes(*node.right);
    s.insert(s.end(), r.begin(), r.end());
    return s;
}

} // namespace

VerificationReport verify(const VerifyInput& input, const MatrixSet& original,
                          const SolverConfig& cfg) {
    VerificationReport rep;
    const MatrixSet set = validate_matrix_set(original, cfg);
    const int n = set.n();

    const int size_sum =
        std::accumulate(input.block_sizes.begin(), input.block_sizes.end(), 0);
    rep.checks.push_back({"sizes_sum_to_n", size_sum == n, static_cast<double>(size_sum),
                          static_cast<double>(n)});

    const bool tree_ok = input.tree_leaf_sizes == input.block_sizes;
    rep.checks.push_back({"declared_sizes_match_tree", tree_ok,
                          static_cast<double>(input.tree_leaf_sizes.size()),
                          static_cast<double>(input.block_sizes.size())});

    std::vector<int> sorted = input.block_sizes;
    std::sort(sorted.begin(), sorted.end());
    rep.checks.push_back({"sorted_signature_consistent",
                          sorted == input.declared_sorted_block_sizes,
                          static_cast<double>(sorted.size()),
                          static_cast<double>(input.declared_sorted_block_sizes.size())});

    const bool shape_ok = input.p_global.rows() == n && input.p_global.cols() == n &&
                          size_sum == n;
    rep.checks.push_back({"transform_shape", shape_ok, static_cast<double>(input.p_global.rows()),
                          static_cast<double>(n)});
    if (!shape_ok)
        return rep;

    Eigen::JacobiSVD<Matrix> svd(input.p_global);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    const double cond = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
    rep.checks.push_back({"transform_condition", cond <= 1.0 / cfg.tol_rank, cond,
                          1.0 / cfg.tol_rank});

    if (input.mode == Mode::OrthogonalCongruence || input.mode == Mode::UnitaryStarCongruence) {
        const double u =
            (input.p_global.adjoint() * input.p_global - Matrix::Identity(n, n)).norm();
        rep.checks.push_back({"transform_orthogonality", u <= cfg.tol_idem, u, cfg.tol_idem});
    }

    double worst_off = 0.0;
    double worst_block_diff = 0.0;
    double worst_block_sym = 0.0;
    const bool have_blocks = static_cast<int>(input.blocks.size()) == set.m();
    for (int i = 0; i < set.m(); ++i) {
        const Matrix t =
            transform_of(input.p_global, set.matrices[static_cast<std::size_t>(i)], input.mode);
        worst_off = std::max(worst_off, off_block_residual_of(t, input.block_sizes));
        if (!have_blocks)
            continue;
        int r0 = 0;
        for (std::size_t j = 0; j < input.block_sizes.size(); ++j) {
            const int bs = input.block_sizes[j];
            if (j >= input.blocks[static_cast<std::size_t>(i)].size())
                break;
            const Matrix& declared = input.blocks[static_cast<std::size_t>(i)][j];
            if (declared.rows() == bs && declared.cols() == bs) {
                worst_block_diff =
                    std::max(worst_block_diff, (t.block(r0, r0, bs, bs) - declared).norm() /
                                                   std::max(1.0, t.norm()));
                worst_block_sym = std::max(worst_block_sym, symmetry_deviation(declared, set.kind));
            } else {
                worst_block_diff = std::numeric_limits<double>::infinity();
            }
            r0 += bs;
        }
    }
    rep.checks.push_back({"off_block_residual", worst_off <= cfg.tol_block, worst_off,
                          cfg.tol_block});
    if (have_blocks) {
        rep.checks.push_back({"declared_blocks_match", worst_block_diff <= cfg.tol_block,
                              worst_block_diff, cfg.tol_block});
        rep.checks.push_back({"block_symmetry", worst_block_sym <= cfg.tol_sym, worst_block_sym,
                              cfg.tol_sym});
    }
    return rep;
}

VerificationReport verify(const Decomposition& dec, const MatrixSet& original,
                          const SolverConfig& cfg) {
    VerifyInput input;
    input.p_global = dec.p_global;
    input.mode = dec.mode;
    input.block_sizes = dec.block_sizes;
    input.declared_sorted_block_sizes = dec.sorted_block_sizes();
    input.blocks = dec.blocks;
    input.tree_leaf_sizes = leaf_sizes(dec.tree);
    return verify(input, original, cfg);
}

CommutationResult commutation_check(const MatrixSet& set, const SolverConfig& cfg) {
    CommutationResult result;
    for (int i = 0; i < set.m(); ++i) {
        for (int j = i + 1; j < set.m(); ++j) {
            const Matrix& a = set.matrices[static_cast<std::size_t>(i)];
            const Matrix& b = set.matrices[static_cast<std::size_t>(j)];
            const double denom = std::max(1e-30, a.norm() * b.norm());
            result.max_commutator_norm =
                std::max(result.max_commutator_norm, (a * b - b * a).norm() / denom);
        }
    }
    result.commute = result.max_commutator_norm <= cfg.tol_idem;
    return result;
}

} // namespace sbdc
