"""Hot loops over Cayley tables and form tables.

Every kernel is written twice: once as a numba ``@njit`` loop and once as a
vectorised numpy routine with identical semantics.  The numba path is used
when numba imports cleanly and ``HFORGE_DISABLE_NUMBA`` is unset; setting
``HFORGE_DISABLE_NUMBA=1`` selects the numpy path for the whole process.

All tables are ``int64`` arrays of element ids.  Torus ids use 0 for the
identity.  Kernels that look for a counterexample return a tuple of ids, or a
tuple of ``-1`` when none exists.
"""
import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False


def _numba_disabled():
    return os.environ.get("HFORGE_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


BACKEND = "numba" if (_HAVE_NUMBA and not _numba_disabled()) else "numpy"


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------

def _np_assoc_violation(table):
    n = table.shape[0]
    for a in range(n):
        left = table[table[a]]          # (ab)c indexed [b, c]
        right = table[a][table]         # a(bc) indexed [b, c]
        bad = np.argwhere(left != right)
        if bad.size:
            return a, int(bad[0, 0]), int(bad[0, 1])
    return -1, -1, -1


def _np_assoc_violation_sampled(table, triples):
    a, b, c = triples[:, 0], triples[:, 1], triples[:, 2]
    left = table[table[a, b], c]
    right = table[a, table[b, c]]
    bad = np.flatnonzero(left != right)
    if bad.size:
        i = bad[0]
        return int(a[i]), int(b[i]), int(c[i])
    return -1, -1, -1


def _np_commutator_table(table, inv):
    x = table[table, inv[:, None]]
    return table[x, inv[None, :]]


def _np_center_mask(table):
    return (table == table.T).all(axis=1)


def _np_centralizer_mask(table, ids):
    return (table[:, ids] == table[ids, :].T).all(axis=1)


def _np_hom_violation(ta, tb, img):
    lhs = img[ta]
    rhs = tb[img[:, None], img[None, :]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        return int(bad[0, 0]), int(bad[0, 1])
    return -1, -1


def _np_closure_mask(table, seed):
    n = table.shape[0]
    mask = seed.copy()
    gens = np.flatnonzero(seed)
    members = np.flatnonzero(mask)
    if gens.size == 0:
        return mask
    while True:
        new = np.zeros(n, dtype=np.bool_)
        new[table[np.ix_(members, gens)].ravel()] = True
        new |= mask
        if new.sum() == mask.sum():
            return new
        mask = new
        members = np.flatnonzero(mask)


def _np_left_linearity_violation(form, ladd, tadd):
    n1 = form.shape[0]
    for a in range(n1):
        lhs = form[ladd[a]]                   # [b, c] -> form(a+b, c)
        rhs = tadd[form[a][None, :], form]    # [b, c] -> form(a,c)+form(b,c)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return a, int(bad[0, 0]), int(bad[0, 1])
    return -1, -1, -1


def _np_cocycle_violation(padd, tadd, gamma):
    n = padd.shape[0]
    for a in range(n):
        # gamma(b,c) + gamma(a,b+c) == gamma(a+b,c) + gamma(a,b)
        lhs = tadd[gamma, gamma[a][padd]]
        rhs = tadd[gamma[padd[a]], gamma[a][:, None]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return a, int(bad[0, 0]), int(bad[0, 1])
    return -1, -1, -1


def _np_heis_table(tadd, gmul, gamul, beta):
    nt, ng, nh = tadd.shape[0], gmul.shape[0], gamul.shape[0]
    ids = np.arange(nt * ng * nh)
    c, rest = np.divmod(ids, ng * nh)
    x, xi = np.divmod(rest, nh)
    cc = tadd[tadd[c[:, None], c[None, :]], beta[xi[:, None], x[None, :]]]
    xx = gmul[x[:, None], x[None, :]]
    yy = gamul[xi[:, None], xi[None, :]]
    return (cc * ng + xx) * nh + yy


def _np_twisted_table(tadd, padd, gamma):
    nt, n = tadd.shape[0], padd.shape[0]
    ids = np.arange(nt * n)
    c, z = np.divmod(ids, n)
    cc = tadd[tadd[c[:, None], c[None, :]], gamma[z[:, None], z[None, :]]]
    return cc * n + padd[z[:, None], z[None, :]]


def _np_perp_mask(form, ids):
    return (form[:, ids] == 0).all(axis=1)


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

if _HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)

    @_jit
    def _nb_assoc_violation(table):
        n = table.shape[0]
        for a in range(n):
            for b in range(n):
                ab = table[a, b]
                for c in range(n):
                    if table[ab, c] != table[a, table[b, c]]:
                        return a, b, c
        return -1, -1, -1

    @_jit
    def _nb_assoc_violation_sampled(table, triples):
        for i in range(triples.shape[0]):
            a, b, c = triples[i, 0], triples[i, 1], triples[i, 2]
            if table[table[a, b], c] != table[a, table[b, c]]:
                return a, b, c
        return -1, -1, -1

    @_jit
    def _nb_commutator_table(table, inv):
        n = table.shape[0]
        out = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                out[a, b] = table[table[table[a, b], inv[a]], inv[b]]
        return out

    @_jit
    def _nb_center_mask(table):
        n = table.shape[0]
        out = np.ones(n, dtype=np.bool_)
        for a in range(n):
            for b in range(n):
                if table[a, b] != table[b, a]:
                    out[a] = False
                    break
        return out

    @_jit
    def _nb_centralizer_mask(table, ids):
        n = table.shape[0]
        out = np.ones(n, dtype=np.bool_)
        for a in range(n):
            for k in range(ids.shape[0]):
                b = ids[k]
                if table[a, b] != table[b, a]:
                    out[a] = False
                    break
        return out

    @_jit
    def _nb_hom_violation(ta, tb, img):
        n = ta.shape[0]
        for a in range(n):
            for b in range(n):
                if img[ta[a, b]] != tb[img[a], img[b]]:
                    return a, b
        return -1, -1

    @_jit
    def _nb_closure_mask(table, seed):
        n = table.shape[0]
        mask = seed.copy()
        gens = np.flatnonzero(seed)
        if gens.shape[0] == 0:
            return mask
        queue = np.empty(n, dtype=np.int64)
        head = 0
        tail = 0
        for i in range(n):
            if mask[i]:
                queue[tail] = i
                tail += 1
        while head < tail:
            a = queue[head]
            head += 1
            for k in range(gens.shape[0]):
                b = table[a, gens[k]]
                if not mask[b]:
                    mask[b] = True
                    queue[tail] = b
                    tail += 1
        return mask

    @_jit
    def _nb_left_linearity_violation(form, ladd, tadd):
        n1, n2 = form.shape
        for a in range(n1):
            for b in range(n1):
                ab = ladd[a, b]
                for c in range(n2):
                    if form[ab, c] != tadd[form[a, c], form[b, c]]:
                        return a, b, c
        return -1, -1, -1

    @_jit
    def _nb_cocycle_violation(padd, tadd, gamma):
        n = padd.shape[0]
        for a in range(n):
            for b in range(n):
                ab = padd[a, b]
                gab = gamma[a, b]
                for c in range(n):
                    lhs = tadd[gamma[b, c], gamma[a, padd[b, c]]]
                    rhs = tadd[gamma[ab, c], gab]
                    if lhs != rhs:
                        return a, b, c
        return -1, -1, -1

    @_jit
    def _nb_heis_table(tadd, gmul, gamul, beta):
        nt, ng, nh = tadd.shape[0], gmul.shape[0], gamul.shape[0]
        n = nt * ng * nh
        out = np.empty((n, n), dtype=np.int64)
        for u in range(n):
            c1 = u // (ng * nh)
            x1 = (u // nh) % ng
            y1 = u % nh
            for v in range(n):
                c2 = v // (ng * nh)
                x2 = (v // nh) % ng
                y2 = v % nh
                c = tadd[tadd[c1, c2], beta[y1, x2]]
                out[u, v] = (c * ng + gmul[x1, x2]) * nh + gamul[y1, y2]
        return out

    @_jit
    def _nb_twisted_table(tadd, padd, gamma):
        nt, n = tadd.shape[0], padd.shape[0]
        m = nt * n
        out = np.empty((m, m), dtype=np.int64)
        for u in range(m):
            c1 = u // n
            z1 = u % n
            for v in range(m):
                c2 = v // n
                z2 = v % n
                out[u, v] = tadd[tadd[c1, c2], gamma[z1, z2]] * n + padd[z1, z2]
        return out

    @_jit
    def _nb_perp_mask(form, ids):
        n = form.shape[0]
        out = np.ones(n, dtype=np.bool_)
        for z in range(n):
            for k in range(ids.shape[0]):
                if form[z, ids[k]] != 0:
                    out[z] = False
                    break
        return out


_NAMES = (
    "assoc_violation",
    "assoc_violation_sampled",
    "commutator_table",
    "center_mask",
    "centralizer_mask",
    "hom_violation",
    "closure_mask",
    "left_linearity_violation",
    "cocycle_violation",
    "heis_table",
    "twisted_table",
    "perp_mask",
)

NUMPY = {name: globals()["_np_" + name] for name in _NAMES}
NUMBA = {name: globals()["_nb_" + name] for name in _NAMES} if _HAVE_NUMBA else {}


def _wrap(name):
    impl = (NUMBA if BACKEND == "numba" else NUMPY)[name]

    def call(*args):
        args = tuple(np.ascontiguousarray(a, dtype=np.bool_ if a.dtype == np.bool_ else np.int64)
                     if isinstance(a, np.ndarray) else a for a in args)
        out = impl(*args)
        if isinstance(out, tuple):
            return tuple(int(v) for v in out)
        return out

    call.__name__ = name
    call.__doc__ = NUMPY[name].__doc__
    return call


assoc_violation = _wrap("assoc_violation")
assoc_violation_sampled = _wrap("assoc_violation_sampled")
commutator_table = _wrap("commutator_table")
center_mask = _wrap("center_mask")
centralizer_mask = _wrap("centralizer_mask")
hom_violation = _wrap("hom_violation")
closure_mask = _wrap("closure_mask")
left_linearity_violation = _wrap("left_linearity_violation")
cocycle_violation = _wrap("cocycle_violation")
heis_table = _wrap("heis_table")
twisted_table = _wrap("twisted_table")
perp_mask = _wrap("perp_mask")
