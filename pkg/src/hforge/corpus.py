"""Instance corpus for the verification suites, and the named example objects.

The default corpus is every duality Gamma x G -> T with Gamma, G, T drawn from
Z2, Z3, Z4, Z2^2 and |H| <= 256 (225 forms), a handful of degenerate and
nonabelian forms, and the D4, Q8, S3 group tables.  A corpus can also be read
from JSON, see :func:`corpus_from_json`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .cohom import Cochain, Cocycle, standard_cocycle
from .errors import InputError
from .finab import FinAbGroup
from .forms import BilinearForm, TableForm, all_forms, product_form
from .grp import FiniteGroup, dihedral4, quaternion8, symmetric3
from .sympl import AlternatingForm, all_alternating_forms

GROUP_MENU = ((2,), (3,), (4,), (2, 2))


def group_name(g) -> str:
    if isinstance(g, FinAbGroup):
        return "x".join(f"Z{n}" for n in g.orders) or "1"
    return f"G{g.size}"


def form_name(b) -> str:
    return f"{group_name(b.gamma)}.{group_name(b.g)}->{group_name(b.torus)}"


@dataclass
class Corpus:
    forms: list = field(default_factory=list)          # (name, BilinearForm | TableForm)
    cocycles: list = field(default_factory=list)       # (name, Cochain), not necessarily cocycles
    alternating: list = field(default_factory=list)    # (name, AlternatingForm)
    groups: list = field(default_factory=list)         # (name, FiniteGroup)

    def is_empty(self) -> bool:
        return not (self.forms or self.cocycles or self.alternating or self.groups)

    def dualities(self) -> list:
        return [(n, b) for n, b in self.forms if isinstance(b, BilinearForm) and b.is_duality()]


def duality_forms(max_order: int = 256) -> list:
    """All dualities over the group menu with |T| |G| |Gamma| <= max_order."""
    menu = [FinAbGroup(o) for o in GROUP_MENU]
    out = []
    for gm, g, t in itertools.product(menu, repeat=3):
        if gm.size * g.size * t.size > max_order:
            continue
        k = 0
        for b in all_forms(gm, g, t):
            if b.is_duality():
                out.append((f"{form_name(b)}#{k}", b))
                k += 1
    return out


def degenerate_forms() -> list:
    """A few degenerate forms: zero forms and forms with nontrivial kernels."""
    z2, z4 = FinAbGroup((2,)), FinAbGroup((4,))
    k22 = FinAbGroup((2, 2))
    return [
        ("zero:Z2.Z2->Z2", BilinearForm(z2, z2, z2, [[(0,)]])),
        ("mod2:Z4.Z4->Z2", BilinearForm(z4, z4, z2, [[(1,)]])),
        ("proj:Z2xZ2.Z2->Z2", BilinearForm(k22, z2, z2, [[(1,)], [(0,)]])),
        ("half:Z4.Z4->Z4", BilinearForm(z4, z4, z4, [[(2,)]])),
    ]


def nonabelian_forms() -> list:
    """Forms with a nonabelian side, given by full tables.

    S3 pairs with Z2 through the sign character; D4 through the character
    killing the rotations t^2 and r (value 1 on t, tr, t3, t3r).
    """
    z2 = FinAbGroup((2,))
    s3 = symmetric3()
    sign = [_perm_sign(tuple(int(c) for c in s3.label(i))) for i in range(6)]
    s3_form = TableForm(z2, s3, z2, [[0] * 6, sign])
    d4 = dihedral4()
    chi = [0, 1, 0, 1, 0, 1, 0, 1]
    d4_form = TableForm(z2, d4, z2, [[0] * 8, chi])
    return [("sign:Z2.S3->Z2", s3_form), ("char:Z2.D4->Z2", d4_form)]


def _perm_sign(p) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return inv % 2


def named_groups() -> list:
    return [("D4", dihedral4()), ("Q8", quaternion8()), ("S3", symmetric3())]


def small_alternating_forms() -> list:
    """Every alternating form on a few small phase groups, degenerate ones included."""
    cases = [((2, 2), (2,)), ((4,), (4,)), ((2, 4), (2,)), ((2, 4), (4,)), ((4, 4), (2,)),
             ((3, 3), (3,)), ((2, 2, 2), (2,))]
    out = []
    for po, to in cases:
        p, t = FinAbGroup(po), FinAbGroup(to)
        for k, w in enumerate(all_alternating_forms(p, t)):
            out.append((f"alt:{group_name(p)}->{group_name(t)}#{k}", w))
    return out


def default_corpus(max_order: int = 256) -> Corpus:
    forms = duality_forms(max_order) + degenerate_forms() + nonabelian_forms()
    alternating = small_alternating_forms() + [("freenil3", freenil3()[0])]
    cocycles = []
    for n in (2, 3, 4):
        ex = perturbed(n)
        cocycles += [(f"gamma0:N={n}", ex["gamma0"]), (f"alpha:N={n}", ex["alpha"]),
                     (f"perturbed:N={n}", ex["perturbed"])]
    return Corpus(forms, cocycles, alternating, named_groups())


def corpus_from_json(data) -> Corpus:
    """Read ``{"forms": [...], "cocycles": [...], "alternating": [...], "groups": [...]}``.

    Each entry is the module JSON of the object, optionally with a "name" key.
    Cocycle entries are read as raw cochains so that broken ones can be reported.
    """
    if not isinstance(data, dict):
        raise InputError("corpus JSON must be an object")
    unknown = set(data) - {"forms", "cocycles", "alternating", "groups"}
    if unknown:
        raise InputError(f"unknown corpus sections: {sorted(unknown)}")
    readers = {"forms": BilinearForm.from_json, "cocycles": Cochain.from_json,
               "alternating": AlternatingForm.from_json, "groups": FiniteGroup.from_json}
    out = Corpus()
    for key, read in readers.items():
        entries = data.get(key, [])
        if not isinstance(entries, list):
            raise InputError(f"corpus section {key!r} must be a list")
        for i, entry in enumerate(entries):
            if not isinstance(entry, dict):
                raise InputError(f"{key}[{i}] must be an object")
            getattr(out, key).append((str(entry.get("name", f"{key}[{i}]")), read(entry)))
    return out


# --------------------------------------------------------------------------
# named examples
# --------------------------------------------------------------------------

def d4_form() -> BilinearForm:
    """Z2 x Z2 -> Z2, beta(xi, x) = xi x; its Heisenberg group is D4."""
    return product_form(2)


def heis_form(n: int) -> BilinearForm:
    """The cyclic duality Z_N x Z_N -> Z_N, beta(k, l) = k l."""
    if n < 2:
        raise InputError("N must be at least 2")
    return product_form(n)


def perturbed(n: int) -> dict:
    """Cocycles on P = Z_N + Z_N (coordinates (x, xi)) with values in Z_N.

    ``gamma0`` = xi x', the standard cocycle of the cyclic duality;
    ``alpha`` = [x + x' >= N], the carry bit of the position coordinates;
    ``perturbed`` = gamma0 + alpha;
    ``literal`` = xi + x', a raw cochain that is not a cocycle.
    """
    if n < 2:
        raise InputError("N must be at least 2")
    b = heis_form(n)
    g0 = standard_cocycle(b)
    p, t = g0.p, g0.torus
    x = p.coords[:, 0]
    xi = p.coords[:, 1]
    carry = (x[:, None] + x[None, :] >= n).astype(np.int64)
    alpha = Cocycle(p, t, t.ids_of(carry[..., None]))
    literal = Cochain(2, p, t, t.ids_of(((xi[:, None] + x[None, :]) % n)[..., None]))
    return {"gamma0": g0, "alpha": alpha, "perturbed": Cocycle.from_cochain(g0 + alpha),
            "literal": literal}


def freenil3():
    """``(omega, gamma)`` on P = Z2^3 with values in Z2^3.

    omega is the cross product mod 2 and gamma(x, y) = sum_{i<j} x_i y_j e_ij,
    with e_ij the basis vector of the remaining index; q(gamma) = omega and the
    extension has order 64.
    """
    p = FinAbGroup((2, 2, 2))
    t = FinAbGroup((2, 2, 2))
    c = p.coords
    slot = {(1, 2): 0, (0, 2): 1, (0, 1): 2}
    gam = np.zeros((p.size, p.size, 3), dtype=np.int64)
    for (i, j), k in slot.items():
        gam[:, :, k] = c[:, None, i] * c[None, :, j]
    cross = np.zeros_like(gam)
    for (i, j), k in slot.items():
        cross[:, :, k] = c[:, None, i] * c[None, :, j] + c[:, None, j] * c[None, :, i]
    omega = AlternatingForm(p, t, t.ids_of(cross % 2))
    return omega, Cocycle(p, t, t.ids_of(gam % 2))
