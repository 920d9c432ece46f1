"""Bilinear forms beta: Gamma x G -> T.

``BilinearForm`` is the abelian case, stored by generator values
``values[i][j] = beta(gamma_i, g_j)``.  ``TableForm`` takes arbitrary finite
groups (given by tables) on both sides and the full value table; it is what
the nonabelian constructions use.  Both expose ``table`` (Gamma ids x G ids ->
torus ids) and the same methods, so downstream code treats them alike.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels as K
from .errors import InputError
from .finab import AbSubgroup, FinAbGroup, elements_killed_by
from .grp import FiniteGroup, GrpSubgroup, group_table_of


@dataclass(frozen=True)
class KernelPair:
    left: object    # subgroup of Gamma pairing trivially with all of G
    right: object   # subgroup of G pairing trivially with all of Gamma


class _FormBase:
    gamma: object
    g: object
    torus: FinAbGroup
    table: np.ndarray

    def eval(self, xi, x):
        return self.torus.element(self.table[self.gamma.index(xi), self.g.index(x)])

    def __call__(self, xi, x):
        return self.eval(xi, x)

    def _sub(self, group, ids):
        if isinstance(group, FinAbGroup):
            return AbSubgroup(group, ids)
        return GrpSubgroup(group, ids)

    def kernels(self) -> KernelPair:
        left = np.flatnonzero((self.table == 0).all(axis=1))
        right = np.flatnonzero((self.table == 0).all(axis=0))
        return KernelPair(self._sub(self.gamma, left), self._sub(self.g, right))

    def is_duality(self) -> bool:
        k = self.kernels()
        return k.left.order == 1 and k.right.order == 1

    def pairing_orthogonal(self, side: str, s):
        """``side='left'``: s <= Gamma, returns {x in G : beta(s, x) = 0};
        ``side='right'``: s <= G, returns {xi in Gamma : beta(xi, s) = 0}."""
        ids = np.asarray(s.ids, dtype=np.int64)
        if side == "left":
            return self._sub(self.g, np.flatnonzero((self.table[ids, :] == 0).all(axis=0)))
        if side == "right":
            return self._sub(self.gamma, np.flatnonzero((self.table[:, ids] == 0).all(axis=1)))
        raise InputError("side must be 'left' or 'right'")

    @cached_property
    def gamma_group(self) -> FiniteGroup:
        return group_table_of(self.gamma)

    @cached_property
    def g_group(self) -> FiniteGroup:
        return group_table_of(self.g)

    def check_bilinear(self):
        """Exhaustive bilinearity check; returns a violating triple or None."""
        bad = K.left_linearity_violation(self.table, self.gamma.table, self.torus.table)
        if bad[0] >= 0:
            return ("left",) + bad
        bad = K.left_linearity_violation(np.ascontiguousarray(self.table.T), self.g.table, self.torus.table)
        if bad[0] >= 0:
            return ("right",) + bad
        return None

    @property
    def is_abelian(self) -> bool:
        return isinstance(self.gamma, FinAbGroup) and isinstance(self.g, FinAbGroup)


class BilinearForm(_FormBase):
    def __init__(self, gamma: FinAbGroup, g: FinAbGroup, torus: FinAbGroup, values):
        self.gamma, self.g, self.torus = gamma, g, torus
        vals = np.zeros((gamma.rank, g.rank, torus.rank), dtype=np.int64)
        try:
            rows = list(values)
            if len(rows) != gamma.rank or any(len(r) != g.rank for r in rows):
                raise InputError(f"values must be a {gamma.rank}x{g.rank} matrix of torus elements")
            for i, row in enumerate(rows):
                for j, v in enumerate(row):
                    vals[i, j] = torus.normalize(v)
        except TypeError as exc:
            raise InputError("malformed form values") from exc
        for i, n in enumerate(gamma.orders):
            for j, m in enumerate(g.orders):
                v = tuple(vals[i, j])
                if any(torus.scale(n, v)) or any(torus.scale(m, v)):
                    raise InputError(
                        f"beta(gamma_{i}, g_{j}) = {v} is not killed by both generator orders {n}, {m}")
        vals.setflags(write=False)
        self.values = vals

    def __repr__(self):
        return f"BilinearForm({self.gamma} x {self.g} -> {self.torus}, values={self.values.tolist()})"

    def __eq__(self, other):
        return (isinstance(other, BilinearForm) and (self.gamma, self.g, self.torus) == (other.gamma, other.g, other.torus)
                and bool((self.values == other.values).all()))

    def __hash__(self):
        return hash((self.gamma, self.g, self.torus, self.values.tobytes()))

    @cached_property
    def table(self) -> np.ndarray:
        cg, cx = self.gamma.coords, self.g.coords
        raw = np.einsum("ai,bj,ijk->abk", cg, cx, self.values)
        out = self.torus.ids_of(raw)
        out.setflags(write=False)
        return out

    def transpose(self) -> "BilinearForm":
        return BilinearForm(self.g, self.gamma, self.torus, self.values.transpose(1, 0, 2).tolist())

    def to_json(self) -> dict:
        return {"gamma": self.gamma.to_json(), "g": self.g.to_json(), "torus": self.torus.to_json(),
                "values": self.values.tolist()}

    @classmethod
    def from_json(cls, data) -> "BilinearForm":
        try:
            return cls(FinAbGroup.from_json(data["gamma"]), FinAbGroup.from_json(data["g"]),
                       FinAbGroup.from_json(data["torus"]), data["values"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"bilinear-form JSON is missing {exc}") from exc


class TableForm(_FormBase):
    """beta given by its full value table on groups with Cayley tables."""

    def __init__(self, gamma, g, torus: FinAbGroup, table, check: bool = True):
        self.gamma, self.g, self.torus = gamma, g, torus
        table = np.array(table, dtype=np.int64)
        if table.shape != (gamma.size, g.size):
            raise InputError(f"value table must be {gamma.size}x{g.size}")
        if table.min() < 0 or table.max() >= torus.size:
            raise InputError("value table entries must be torus ids")
        table.setflags(write=False)
        self.table = table
        if check:
            bad = self.check_bilinear()
            if bad is not None:
                raise InputError(f"value table is not bilinear ({bad[0]}-linearity fails at {bad[1:]})")

    def __repr__(self):
        return f"TableForm({self.gamma} x {self.g} -> {self.torus})"

    def transpose(self) -> "TableForm":
        return TableForm(self.g, self.gamma, self.torus, self.table.T, check=False)


def form_values_choices(gamma: FinAbGroup, g: FinAbGroup, torus: FinAbGroup) -> list:
    """For each generator pair, the torus elements allowed as its value."""
    return [[elements_killed_by(torus, np.gcd(n, m)) for m in g.orders] for n in gamma.orders]


def all_forms(gamma: FinAbGroup, g: FinAbGroup, torus: FinAbGroup):
    """Every bilinear form Gamma x G -> T (generator)."""
    choices = form_values_choices(gamma, g, torus)
    flat = [c for row in choices for c in row]
    for pick in itertools.product(*flat):
        vals = [list(pick[i * g.rank:(i + 1) * g.rank]) for i in range(gamma.rank)]
        yield BilinearForm(gamma, g, torus, vals)


def product_form(n: int, torus_order: int | None = None) -> BilinearForm:
    """beta(k, l) = k*l on Z_n x Z_n, valued in Z_t (t = n by default, t | n)."""
    t = n if torus_order is None else torus_order
    z, zt = FinAbGroup((n,)), FinAbGroup((t,))
    return BilinearForm(z, z, zt, [[(1,)]])
