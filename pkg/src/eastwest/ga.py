"""Genetic search over bias vectors (the top tier of the two-tier search).

Real-coded genomes of length n + 2 hold the per-feature bias weights plus
omega and cf.  Each genome's fitness is the cost of the decision tree it
induces: lower is better.  Selection is rank-proportionate, recombination
is two-point crossover, and mutation redraws single genes uniformly within
their legal range, so every genome stays inside the bias bounds by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .features import FeatureMatrix
from .tree import BiasVector, FitnessReport, Tree, B_MAX, CF_MIN, CF_MAX, fitness, induce_tree, tree_signature


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 50
    generations: int = 20
    crossover_rate: float = 0.6
    mutation_rate: float = 0.001
    elitism_count: int = 1
    rng_seed: int = 0
    error_cost: float = 1000.0

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover_rate must lie in [0, 1]")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must lie in [0, 1]")
        if not 0 <= self.elitism_count <= self.population_size:
            raise ValueError("elitism_count must lie in [0, population_size]")
        if self.error_cost < 0:
            raise ValueError("error_cost must be >= 0")


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    best: float
    mean: float
    best_test_cost: int
    best_errors: int


@dataclass
class EvolutionResult:
    best_tree: Tree
    best_report: FitnessReport
    best_bias: BiasVector
    history: list[GenerationStats] = field(default_factory=list)


def _gene_bounds(n_features: int) -> tuple[np.ndarray, np.ndarray]:
    lows = np.concatenate([np.zeros(n_features), [0.0, CF_MIN]])
    highs = np.concatenate([np.full(n_features, B_MAX), [1.0, CF_MAX]])
    return lows, highs


def genome_to_bias(genome: np.ndarray) -> BiasVector:
    return BiasVector(genome[:-2].copy(), float(genome[-2]), float(genome[-1]))


def evaluate_individual(
    bias: BiasVector,
    matrix: FeatureMatrix,
    costs: np.ndarray,
    config: GaConfig,
    _cache: dict | None = None,
) -> tuple[Tree, FitnessReport]:
    """Induce and score the tree for one bias vector."""
    tree = induce_tree(matrix, bias)
    key = tree_signature(tree)
    if _cache is not None and key in _cache:
        return tree, _cache[key]
    report = fitness(tree, matrix, costs, error_cost=config.error_cost)
    if _cache is not None:
        _cache[key] = report
    return tree, report


def _rank_probabilities(fitnesses: np.ndarray) -> np.ndarray:
    # lowest fitness gets the highest rank weight; scale-free in fitness
    order = np.argsort(fitnesses, kind="stable")
    weights = np.empty_like(fitnesses)
    n = len(fitnesses)
    weights[order] = np.arange(n, 0, -1, dtype=float)
    return weights / weights.sum()


def _crossover(a: np.ndarray, b: np.ndarray, rng: np.random.Generator):
    """Two-point crossover; returns two children."""
    length = len(a)
    i, j = sorted(rng.integers(0, length + 1, size=2))
    child_a, child_b = a.copy(), b.copy()
    child_a[i:j], child_b[i:j] = b[i:j], a[i:j]
    return child_a, child_b


def _mutate(genome: np.ndarray, rate: float, lows, highs, rng: np.random.Generator):
    mask = rng.random(len(genome)) < rate
    if mask.any():
        genome = genome.copy()
        genome[mask] = rng.uniform(lows[mask], highs[mask])
    return genome


def evolve(matrix: FeatureMatrix, costs: np.ndarray, config: GaConfig) -> EvolutionResult:
    """Run the genetic search and return the fittest tree seen overall."""
    rng = np.random.default_rng(config.rng_seed)
    n = matrix.n_features
    lows, highs = _gene_bounds(n)
    pop = rng.uniform(lows, highs, size=(config.population_size, n + 2))

    cache: dict = {}
    best_tree = None
    best_report = None
    best_bias = None
    history: list[GenerationStats] = []

    for generation in range(1, config.generations + 1):
        evals = []
        for genome in pop:
            bias = genome_to_bias(genome)
            evals.append(evaluate_individual(bias, matrix, costs, config, _cache=cache))
        fitnesses = np.array([rep.fitness for _, rep in evals])
        gen_best = int(np.argmin(fitnesses))
        gen_tree, gen_report = evals[gen_best]
        if best_report is None or gen_report.fitness < best_report.fitness:
            best_tree, best_report = gen_tree, gen_report
            best_bias = genome_to_bias(pop[gen_best])
        history.append(
            GenerationStats(
                generation=generation,
                best=float(gen_report.fitness),
                mean=float(fitnesses.mean()),
                best_test_cost=gen_report.test_cost,
                best_errors=gen_report.error_count,
            )
        )
        if generation == config.generations:
            break

        order = np.argsort(fitnesses, kind="stable")
        probs = _rank_probabilities(fitnesses)
        next_pop = [pop[i].copy() for i in order[: config.elitism_count]]
        while len(next_pop) < config.population_size:
            pa, pb = rng.choice(config.population_size, size=2, p=probs)
            a, b = pop[pa], pop[pb]
            if rng.random() < config.crossover_rate:
                a, b = _crossover(a, b, rng)
            next_pop.append(_mutate(a, config.mutation_rate, lows, highs, rng))
            if len(next_pop) < config.population_size:
                next_pop.append(_mutate(b, config.mutation_rate, lows, highs, rng))
        pop = np.array(next_pop)

    return EvolutionResult(best_tree, best_report, best_bias, history)


def history_to_csv(history: Sequence[GenerationStats], delimiter: str = ",") -> str:
    lines = [delimiter.join(["generation", "best", "mean", "best_test_cost", "best_errors"])]
    for h in history:
        lines.append(
            delimiter.join(
                [str(h.generation), repr(h.best), repr(h.mean), str(h.best_test_cost), str(h.best_errors)]
            )
        )
    return "\n".join(lines) + "\n"
