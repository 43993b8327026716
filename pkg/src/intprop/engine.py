"""Propagation driver: pending-flag scheduling over a rule set.

Each rule carries a pending flag.  Applying a rule clears its flag; a rule
that shrinks a variable's domain re-flags every rule reading that variable
(possibly itself, since rules on constraints with repeated occurrences are
not idempotent).  Propagation stops when no rule is pending or a domain
empties.

Two visiting orders are supported: ``cycle`` sweeps the rules in their
construction order over and over, while ``scheduled`` sweeps a generated
sequence that interleaves forward evaluation and backward propagation of
auxiliary definitions around each user rule, so decomposed problems reach
their fixpoint with far fewer applications.  Both orders end in the same
store: the rules are contracting and monotone, so the greatest common
fixpoint is unique.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .intervals import OpCounters

FIXPOINT = -1

DEFAULT_STEP_LIMIT = 10 ** 8


class PropagationLimit(RuntimeError):
    """Raised when a propagation run exceeds the application budget."""


class Solver:
    """One propagation instance: rules + store + pending flags + counters.

    Confine an instance to a single thread; independent instances are free
    to run concurrently.
    """

    def __init__(self, decomposed, mode: str = "scheduled",
                 counters: Optional[OpCounters] = None,
                 step_limit: int = DEFAULT_STEP_LIMIT):
        if mode not in ("scheduled", "cycle"):
            raise ValueError("mode must be 'scheduled' or 'cycle'")
        self.decomposed = decomposed
        self.rules = decomposed.rules
        self.readers = decomposed.readers
        self.store = list(decomposed.domains)
        self.order = (decomposed.schedule if mode == "scheduled"
                      else range(len(self.rules)))
        self.mode = mode
        self.counters = counters if counters is not None else OpCounters()
        self.step_limit = step_limit
        self.applications = 0
        self.effective = 0
        self.pending = bytearray(len(self.rules))
        self.n_pending = 0

    def note_change(self, var: int) -> None:
        """Flag every rule whose update depends on the variable."""
        pending = self.pending
        for r in self.readers[var]:
            if not pending[r]:
                pending[r] = 1
                self.n_pending += 1

    def flag_all(self) -> None:
        self.pending = bytearray(b"\x01" * len(self.rules))
        self.n_pending = len(self.rules)

    def propagate(self, changed: Optional[Iterable[int]] = None) -> int:
        """Run to fixpoint; returns FIXPOINT or the emptied variable id.

        ``changed`` seeds the pending set with the readers of those
        variables (after branching); pass nothing to continue from the
        current flags (use :meth:`flag_all` for an initial run).
        """
        if changed is not None:
            for v in changed:
                self.note_change(v)
        rules = self.rules
        readers = self.readers
        store = self.store
        ctr = self.counters
        pending = self.pending
        apps = self.applications
        eff = self.effective
        limit = self.step_limit
        try:
            while self.n_pending:
                for i in self.order:
                    if pending[i]:
                        pending[i] = 0
                        self.n_pending -= 1
                        apps += 1
                        w = rules[i].apply(store, ctr)
                        if w >= 0:
                            if store[w] is None:
                                return w
                            eff += 1
                            np = self.n_pending
                            for r in readers[w]:
                                if not pending[r]:
                                    pending[r] = 1
                                    np += 1
                            self.n_pending = np
                if apps > limit:
                    raise PropagationLimit(
                        "more than %d rule applications" % limit)
            return FIXPOINT
        finally:
            self.applications = apps
            self.effective = eff

    def reset_pending(self) -> None:
        if self.n_pending:
            self.pending = bytearray(len(self.rules))
            self.n_pending = 0
