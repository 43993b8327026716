"""Branch-and-propagate search over a decomposed problem.

Depth-first, leftmost-first: variables are picked in declaration order
(auxiliaries last), the chosen domain is bisected at the floor midpoint and
the lower half explored first.  Propagation runs once at the root and after
every split.  Every search-tree node is counted, including failed and
solution leaves.

Maximization adds a variable equated with the objective; each time a
solution is found, the remaining search only admits strictly larger
objective values, so the incumbent sequence is strictly increasing and the
last solution is optimal.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

from .decompose import DecomposedCSP, decompose
from .engine import FIXPOINT, Solver
from .intervals import OpCounters
from .model import CSP, Expr, Var, check_origin, normalize

Assignment = Tuple[int, ...]


class UnboundedAfterPropagation(Exception):
    """A variable kept an infinite domain, so it cannot be branched on."""

    def __init__(self, name: str):
        super().__init__("domain of %s is still unbounded after propagation"
                         % name)
        self.name = name


class Infeasible(Exception):
    """Maximization found no solution at all."""


@dataclass
class SearchStats:
    variant: str
    division: str
    mode: str
    nvar: int = 0
    n_rules: int = 0
    nodes: int = 0
    solutions: int = 0
    drf_applications: int = 0
    drf_effective: int = 0
    counters: OpCounters = field(default_factory=OpCounters)
    complete: bool = True
    elapsed: float = 0.0
    incumbents: List[int] = field(default_factory=list)

    @property
    def percent_effective(self) -> float:
        if not self.drf_applications:
            return 0.0
        return 100.0 * self.drf_effective / self.drf_applications


class _Truncated(Exception):
    pass


def verify_solution(csp: CSP, assignment) -> bool:
    """Exact re-evaluation of every constraint as originally written."""
    return all(check_origin(c, assignment) for c in csp.constraints)


def _search(dec: DecomposedCSP, stats: SearchStats, solver: Solver,
            max_nodes: Optional[int],
            on_solution: Callable[[List[int]], None],
            cutoff_var: Optional[int] = None,
            cutoff: Optional[Callable[[], Optional[int]]] = None) -> None:
    store = solver.store
    order = dec.branch_order
    n_user = dec.n_user

    def bump_nodes():
        stats.nodes += 1
        if max_nodes is not None and stats.nodes > max_nodes:
            stats.nodes -= 1
            raise _Truncated

    def expand(start: int) -> None:
        k = start
        while k < len(order):
            d = store[order[k]]
            if d[0] is None or d[1] is None:
                raise UnboundedAfterPropagation(dec.names[order[k]])
            if d[0] != d[1]:
                break
            k += 1
        else:
            on_solution([store[v][0] for v in range(n_user)])
            return
        v = order[k]
        lo, hi = store[v]
        mid = (lo + hi) // 2
        for half in ((lo, mid), (mid + 1, hi)):
            saved = store[:]
            store[v] = half
            bump_nodes()
            seeds = [v]
            if cutoff is not None:
                bound = cutoff()
                if bound is not None:
                    dc = store[cutoff_var]
                    if dc is not None and (dc[0] is None or dc[0] < bound):
                        nd = None if dc[1] is not None and dc[1] < bound \
                            else (bound, dc[1])
                        store[cutoff_var] = nd
                        seeds.append(cutoff_var)
            failed = (store[cutoff_var] is None if cutoff is not None
                      else False)
            if not failed:
                failed = solver.propagate(seeds) != FIXPOINT
            if not failed:
                expand(k)
            solver.reset_pending()
            store[:] = saved

    bump_nodes()
    expand(0)


def solve_all(csp: CSP, variant: str = "fe", division: str = "weak",
              mode: str = "scheduled", max_nodes: Optional[int] = None,
              collect: bool = True,
              on_solution: Optional[Callable] = None,
              dec: Optional[DecomposedCSP] = None,
              ) -> Tuple[List[Assignment], SearchStats]:
    """Enumerate every solution of the CSP (projected onto its variables).

    Each reported assignment is re-checked by exact evaluation of the
    original constraints.  Statistics cover the whole run, root
    propagation included.
    """
    if dec is None:
        dec = decompose(csp, variant, division)
    stats = SearchStats(variant=variant, division=division, mode=mode,
                        nvar=len(dec.names), n_rules=len(dec.rules))
    solutions: List[Assignment] = []
    t0 = time.perf_counter()
    solver = Solver(dec, mode=mode)
    stats.counters = solver.counters
    if dec.infeasible:
        stats.elapsed = time.perf_counter() - t0
        return solutions, stats

    def found(values: List[int]) -> None:
        assert verify_solution(csp, values), \
            "propagation produced a spurious solution"
        stats.solutions += 1
        if collect:
            solutions.append(tuple(values))
        if on_solution is not None:
            on_solution(tuple(values))

    solver.flag_all()
    root = solver.propagate()
    try:
        if root == FIXPOINT:
            for v in range(dec.n_user):
                d = solver.store[v]
                if d[0] is None or d[1] is None:
                    raise UnboundedAfterPropagation(dec.names[v])
            _search(dec, stats, solver, max_nodes, found)
    except _Truncated:
        stats.complete = False
    finally:
        stats.drf_applications = solver.applications
        stats.drf_effective = solver.effective
        stats.elapsed = time.perf_counter() - t0
    return solutions, stats


def maximize(csp: CSP, objective: Optional[Expr] = None,
             variant: str = "fe", division: str = "weak",
             mode: str = "scheduled", max_nodes: Optional[int] = None,
             ) -> Tuple[Assignment, int, SearchStats]:
    """Find the assignment maximizing the objective, by branch and bound.

    A fresh variable is constrained equal to the objective; after every
    solution the search additionally requires the objective to exceed the
    incumbent, so solutions stream in strictly increasing objective order.
    Returns (best assignment, best value, stats); raises
    :class:`Infeasible` when there is no solution.
    """
    if objective is None:
        objective = csp.objective
    if objective is None:
        raise ValueError("no objective given")
    work = CSP(names=list(csp.names), domains=list(csp.domains),
               constraints=list(csp.constraints))
    obj_var = work.add_var("_objective", (None, None))
    work.constraints.append(
        normalize(Var(obj_var), "=", objective, work.nvars))
    dec = decompose(work, variant, division, branch_exclude=(obj_var,))
    stats = SearchStats(variant=variant, division=division, mode=mode,
                        nvar=len(dec.names), n_rules=len(dec.rules))
    t0 = time.perf_counter()
    solver = Solver(dec, mode=mode)
    stats.counters = solver.counters
    best: Optional[Tuple[Assignment, int]] = None

    def found(values: List[int]) -> None:
        nonlocal best
        val = values[obj_var]
        assert verify_solution(csp, values[:len(csp.names)]), \
            "propagation produced a spurious solution"
        assert best is None or val > best[1], "incumbents must increase"
        best = (tuple(values[:len(csp.names)]), val)
        stats.solutions += 1
        stats.incumbents.append(val)

    def current_bound() -> Optional[int]:
        return None if best is None else best[1] + 1

    if dec.infeasible:
        raise Infeasible("the problem contains a false constraint")
    solver.flag_all()
    root = solver.propagate()
    try:
        if root == FIXPOINT:
            for v in range(dec.n_user):
                if v == obj_var:
                    continue
                d = solver.store[v]
                if d[0] is None or d[1] is None:
                    raise UnboundedAfterPropagation(dec.names[v])
            _search(dec, stats, solver, max_nodes, found,
                    cutoff_var=obj_var, cutoff=current_bound)
    except _Truncated:
        stats.complete = False
    finally:
        stats.drf_applications = solver.applications
        stats.drf_effective = solver.effective
        stats.elapsed = time.perf_counter() - t0
    if best is None:
        raise Infeasible("no solution satisfies the constraints")
    return best[0], best[1], stats
