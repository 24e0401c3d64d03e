#pragma once
#include <array>
#include <map>
#include <string>
#include <vector>

#include "fixsplit/partners.hpp"

namespace fixsplit {

/* Canonical registry key for a direction: exact slope repr, "inf" for vertical. */
std::string slope_key(const Vec& w);

struct TreeNode {
    FixSplitting s;
    Rat eps;                                 // eps_n at this node
    int depth = 0;
    long parent = -1;
    long k = 0;                              // twist exponent of the step into this node
    PartnerTriple partners;                  // partner triple of that step (unset at root)
    std::pair<Scalar, Scalar> bounds;        // stated area-exchange bounds of the step
    std::array<long, 2> children{{-1, -1}};  // [0] positive twist, [1] negative twist
    bool expanded = false;
};

struct SplittingTree {
    std::vector<TreeNode> nodes;             // arena, nodes[0] = root
    std::map<std::string, long> registry;    // slope key -> node index
    std::vector<long> incomplete;            // nodes whose expansion exhausted the budget
    bool complete = true;
    bool is_leaf(long i) const { return nodes[i].children[0] < 0; }
    std::vector<long> leaves() const;
};

/* Expand a node into its two children, one per twist sign (memoized).  Child
   budgets: eps_{n+1} = eps_n / 2, direction change and both area-exchange
   bounds below eps_n / 4, new slope absent from the registry.  Throws
   BudgetExhausted when no admissible pair is found within the budget. */
std::array<long, 2> expand(SplittingTree& t, long node, const SearchBudget& budget);

/* Level-order construction to the requested depth.  BudgetExhausted at a node
   marks the tree incomplete and moves on; GuaranteeViolated propagates. */
SplittingTree build_tree(const FixSplitting& root, const Rat& eps0, int depth,
                         const SearchBudget& budget);

struct PathRow {
    int n = 0;
    long k = 0;          // 0 at the root row
    double hn = 0;       // |w_n x w_N| / |w_N|
    double an = 0;       // exchanged area at the step into node n
    double partial_sum = 0;
    double area1 = 0, area2 = 0;
    double abs_w = 0;
};

struct PathReport {
    std::vector<PathRow> rows;        // one per node on the root-to-leaf path
    bool budgets_ok = false;          // exact: prefix sums of a_j within sum eps_j/4, total < eps_0/2
    bool heights_ok = false;          // last recorded height below 1e-6 (trivially true for the bare root)
    bool areas_ok = false;            // exact: both torus areas positive at every node
    bool crossings_ok = false;        // exact: |w_n x w_{n+1}| <= 9 area(M)
    bool recurrence_ok = false;       // diagnostic only: h_{n+1} <= 2 |w_n x w_{n+1}| / |w_{n+1}|
    double theta_x = 0, theta_y = 0;  // unit direction estimate from the leaf
    double angular_uncertainty = 0;   // eps_N / 2
    bool ok() const { return budgets_ok && heights_ok && areas_ok && crossings_ok; }
};

PathReport audit_path(const SplittingTree& t, long leaf);

struct TreeAudit {
    bool ok = true;
    long edges_checked = 0;
    std::vector<std::string> violations;
};

/* Re-derive every edge of the tree from scratch: validity and irrationality of
   each node, eps halving, twist consistency, forward orientation, same-side,
   good partners, budget gates, exact area conservation, crossing bound, and
   global slope distinctness via the registry. */
TreeAudit audit(const SplittingTree& t);

struct DirectionSeparation {
    long leaf_count = 0;
    bool all_distinct = false;
    double min_angle = 0;   // min over slope-adjacent leaf pairs (exact crosses, reported as double)
};

DirectionSeparation distinct_directions(const SplittingTree& t);

} // namespace fixsplit
