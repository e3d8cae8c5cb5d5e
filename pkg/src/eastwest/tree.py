"""Bias-adjustable top-down induction of binary decision trees.

At every node the attribute maximizing (2**gain - 1) / (bias + 1)**omega
is chosen, where `gain` is the plain information gain of the binary split.
A per-feature bias vector plus the two knobs omega (bias strength) and
cf (pruning confidence, in percent) form the genome searched by the
genetic layer.  Pruning is pessimistic leaf-replacement using an exact
binomial upper confidence bound; lower cf prunes harder.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.stats import beta as beta_dist

from .features import FeatureMatrix, FeatureSpec

EAST = "east"
WEST = "west"

B_MAX = 10000.0
CF_MIN, CF_MAX = 1.0, 100.0

_GAIN_EPS = 1e-12


@dataclass(frozen=True)
class BiasVector:
    """Search genome: one bias weight per feature plus omega and cf."""

    weights: np.ndarray
    omega: float
    cf: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if w.ndim != 1:
            raise ValueError("bias weights must be a 1-d vector")
        if np.any(w < 0) or np.any(w > B_MAX):
            raise ValueError(f"bias weights must lie in [0, {B_MAX}]")
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError("omega must lie in [0, 1]")
        if not CF_MIN <= self.cf <= CF_MAX:
            raise ValueError(f"cf must lie in [{CF_MIN}, {CF_MAX}]")


@dataclass(frozen=True)
class Leaf:
    label: str
    n_examples: int = 0


@dataclass(frozen=True)
class Node:
    feature: int
    on_true: "Tree"
    on_false: "Tree"


Tree = Union[Node, Leaf]


@dataclass(frozen=True)
class FitnessReport:
    test_cost: int
    error_count: int
    error_rate: float
    error_cost_param: float
    fitness: float


def _entropy(pos: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Binary entropy of `pos` positives out of `n`, elementwise; 0 when n = 0."""
    pos = np.asarray(pos, dtype=float)
    n = np.asarray(n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(n > 0, pos / np.maximum(n, 1), 0.0)
        h = -(np.where(p > 0, p * np.log2(np.maximum(p, 1e-300)), 0.0)
              + np.where(p < 1, (1 - p) * np.log2(np.maximum(1 - p, 1e-300)), 0.0))
    return np.where(n > 0, h, 0.0)


def _gains(values: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Information gain of each feature column over the given examples."""
    m = values.shape[0]
    pos = labels.sum()
    parent = _entropy(pos, m)
    n1 = values.sum(axis=0)
    pos1 = values[labels].sum(axis=0) if pos else np.zeros(values.shape[1])
    n0 = m - n1
    pos0 = pos - pos1
    child = (n1 / m) * _entropy(pos1, n1) + (n0 / m) * _entropy(pos0, n0)
    return np.maximum(parent - child, 0.0)


def information_gain(matrix: FeatureMatrix, subset: Sequence[int], feature: int) -> float:
    """Entropy gain of splitting `subset` on one feature."""
    idx = np.asarray(subset, dtype=int)
    if idx.size == 0:
        raise ValueError("subset must be nonempty")
    return float(_gains(matrix.values[idx][:, [feature]], matrix.labels[idx])[0])


def selection_criterion(gain, bias, omega: float):
    """Cost-sensitive attribute score: (2**gain - 1) / (bias + 1)**omega."""
    return (np.power(2.0, gain) - 1.0) / np.power(np.asarray(bias, dtype=float) + 1.0, omega)


def _majority(labels: np.ndarray) -> str:
    pos = int(labels.sum())
    # ties label east, for determinism
    return EAST if pos >= labels.size - pos else WEST


def _grow(values, labels, idx, weights, omega, used):
    y = labels[idx]
    pos = int(y.sum())
    if pos == 0 or pos == idx.size:
        return Leaf(EAST if pos else WEST, idx.size)
    gains = _gains(values[idx], y)
    scores = selection_criterion(gains, weights, omega)
    scores = np.where(used | (gains <= _GAIN_EPS), -np.inf, scores)
    best = int(np.argmax(scores))
    if not np.isfinite(scores[best]):
        return Leaf(_majority(y), idx.size)
    col = values[idx, best]
    used = used.copy()
    used[best] = True
    return Node(
        best,
        _grow(values, labels, idx[col], weights, omega, used),
        _grow(values, labels, idx[~col], weights, omega, used),
    )


def induce_tree(matrix: FeatureMatrix, bias: BiasVector) -> Tree:
    """Grow a tree under the given bias, then prune it at bias.cf."""
    if matrix.n_trains == 0:
        raise ValueError("matrix must contain at least one example")
    if bias.weights.size != matrix.n_features:
        raise ValueError(
            f"bias has {bias.weights.size} weights for {matrix.n_features} features"
        )
    idx = np.arange(matrix.n_trains)
    used = np.zeros(matrix.n_features, dtype=bool)
    tree = _grow(matrix.values, matrix.labels, idx, bias.weights, bias.omega, used)
    return prune(tree, bias.cf, matrix)


def pessimistic_upper_bound(errors: int, n: int, cf: float) -> float:
    """Exact binomial upper confidence bound on the true error rate.

    Returns the p with P(X <= errors | n, p) = cf/100; smaller cf gives a
    larger (more pessimistic) bound.
    """
    if n == 0:
        return 0.0
    if errors >= n:
        return 1.0
    return float(beta_dist.ppf(1.0 - cf / 100.0, errors + 1, n - errors))


def _prune(node, cf, values, labels, idx):
    """Returns (pruned subtree, pessimistic error estimate over idx)."""
    y = labels[idx]
    if isinstance(node, Leaf):
        errors = int((y != (node.label == EAST)).sum()) if idx.size else 0
        return Leaf(node.label, idx.size), idx.size * pessimistic_upper_bound(errors, idx.size, cf)
    if idx.size == 0:
        return node, 0.0
    col = values[idx, node.feature]
    on_true, est_t = _prune(node.on_true, cf, values, labels, idx[col])
    on_false, est_f = _prune(node.on_false, cf, values, labels, idx[~col])
    subtree_est = est_t + est_f
    label = _majority(y)
    errors = int((y != (label == EAST)).sum())
    leaf_est = idx.size * pessimistic_upper_bound(errors, idx.size, cf)
    if leaf_est < subtree_est:
        return Leaf(label, idx.size), leaf_est
    return Node(node.feature, on_true, on_false), subtree_est


def prune(tree: Tree, cf: float, matrix: FeatureMatrix) -> Tree:
    """Pessimistic leaf-replacement pruning at confidence level cf (percent)."""
    if not CF_MIN <= cf <= CF_MAX:
        raise ValueError(f"cf must lie in [{CF_MIN}, {CF_MAX}]")
    idx = np.arange(matrix.n_trains)
    pruned, _ = _prune(tree, cf, matrix.values, matrix.labels, idx)
    return pruned


def predict(tree: Tree, row: np.ndarray) -> str:
    node = tree
    while isinstance(node, Node):
        node = node.on_true if row[node.feature] else node.on_false
    return node.label


def predict_all(tree: Tree, matrix: FeatureMatrix) -> np.ndarray:
    """Boolean predictions (True = east) for every row of the matrix."""
    return np.array([predict(tree, matrix.values[i]) == EAST for i in range(matrix.n_trains)])


def internal_nodes(tree: Tree) -> list[Node]:
    out = []
    stack = [tree]
    while stack:
        node = stack.pop()
        if isinstance(node, Node):
            out.append(node)
            stack.append(node.on_false)
            stack.append(node.on_true)
    return out


def node_count(tree: Tree) -> int:
    """Total number of nodes, internal plus leaves."""
    if isinstance(node := tree, Leaf):
        return 1
    return 1 + node_count(node.on_true) + node_count(node.on_false)


def test_cost(tree: Tree, costs: np.ndarray) -> int:
    """Sum of feature costs over all internal nodes, one per node."""
    return int(sum(costs[n.feature] for n in internal_nodes(tree)))


def fitness(
    tree: Tree,
    matrix: FeatureMatrix,
    costs: np.ndarray,
    error_cost: float = 1000.0,
    per_example_cost: bool = False,
) -> FitnessReport:
    """Score a tree: static test cost plus error_rate * error_cost.

    With per_example_cost=True the test-cost term is instead the mean,
    over the examples, of the cost of the tests on each example's path.
    """
    predictions = predict_all(tree, matrix)
    errors = int((predictions != matrix.labels).sum())
    rate = errors / matrix.n_trains if matrix.n_trains else 0.0
    if per_example_cost:
        total = 0.0
        for i in range(matrix.n_trains):
            node = tree
            while isinstance(node, Node):
                total += costs[node.feature]
                node = node.on_true if matrix.values[i, node.feature] else node.on_false
        cost = total / matrix.n_trains if matrix.n_trains else 0.0
    else:
        cost = test_cost(tree, costs)
    return FitnessReport(
        test_cost=test_cost(tree, costs),
        error_count=errors,
        error_rate=rate,
        error_cost_param=error_cost,
        fitness=cost + rate * error_cost,
    )


def tree_signature(tree: Tree):
    """Hashable structural key (feature indices and leaf labels only)."""
    if isinstance(tree, Leaf):
        return tree.label
    return (tree.feature, tree_signature(tree.on_true), tree_signature(tree.on_false))


def tree_to_dict(tree: Tree, table: Sequence[FeatureSpec]) -> dict:
    if isinstance(tree, Leaf):
        return {"leaf": tree.label, "n": tree.n_examples}
    spec = table[tree.feature]
    return {
        "feature": spec.name,
        "cost": spec.cost,
        "yes": tree_to_dict(tree.on_true, table),
        "no": tree_to_dict(tree.on_false, table),
    }


def tree_from_dict(data: dict, table: Sequence[FeatureSpec]) -> Tree:
    if "leaf" in data:
        return Leaf(data["leaf"], data.get("n", 0))
    by_name = {s.name: s.index for s in table}
    return Node(
        by_name[data["feature"]],
        tree_from_dict(data["yes"], table),
        tree_from_dict(data["no"], table),
    )


def tree_to_json(tree: Tree, table: Sequence[FeatureSpec]) -> str:
    return json.dumps(tree_to_dict(tree, table), indent=2) + "\n"


def tree_to_text(tree: Tree, table: Sequence[FeatureSpec], indent: str = "") -> str:
    """Indented text rendering, yes-branch first."""
    if isinstance(tree, Leaf):
        return f"{indent}-> {tree.label} ({tree.n_examples})\n"
    spec = table[tree.feature]
    out = f"{indent}{spec.name} [cost {spec.cost}]\n"
    out += f"{indent}  yes:\n" + tree_to_text(tree.on_true, table, indent + "    ")
    out += f"{indent}  no:\n" + tree_to_text(tree.on_false, table, indent + "    ")
    return out
