"""Black-box finite matrix group engine.

Groups are given by generating matrices; enumeration is a breadth-first
closure with canonical byte keys, capped by default at 2e7 elements
(override with the FUSIONSEED_CAP environment variable).  Normalizers and
centralizers are computed by full scans over the cached element stack.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, IndexTooLarge, SubgroupViolation
from .gfp import FpMatrix, Prime, as_prime

DEFAULT_CAP = int(os.environ.get("FUSIONSEED_CAP", 2 * 10 ** 7))
_CHUNK = 1 << 15


def _stack_key(arr_int8: np.ndarray) -> bytes:
    return arr_int8.tobytes()


class MatGroup:
    """Matrix group over F_p given by invertible generators.

    The element cache, once built, holds the full element stack (int8),
    a key -> index dict, and the matching stack of inverses.
    """

    def __init__(self, p, generators, cap: int = DEFAULT_CAP):
        self.p: Prime = as_prime(p)
        gens = list(generators)
        if not gens:
            raise ValueError("need at least one generator (use identity for trivial)")
        self.dim = gens[0].rows
        for g in gens:
            if g.p.p != self.p.p or g.rows != self.dim or g.cols != self.dim:
                raise SubgroupViolation("generator size/prime mismatch")
            if not g.is_invertible():
                raise SubgroupViolation("generator not invertible")
        self.generators = gens
        self.cap = cap
        self._stack = None        # (N, n, n) int8
        self._inv_stack = None    # (N, n, n) int8
        self._keys = None         # bytes -> index

    # -- enumeration ------------------------------------------------------
    def cache(self) -> "MatGroup":
        if self._stack is not None:
            return self
        p, n = self.p.p, self.dim
        gen64 = [g.a for g in self.generators]
        geninv64 = [g.inverse().a for g in self.generators]
        elems = [np.eye(n, dtype=np.int8)]
        invs = [np.eye(n, dtype=np.int8)]
        keys = {elems[0].tobytes(): 0}
        frontier = [0]
        while frontier:
            F = np.array([elems[i] for i in frontier], dtype=np.int64)
            FI = np.array([invs[i] for i in frontier], dtype=np.int64)
            new_frontier = []
            for g, gi in zip(gen64, geninv64):
                P = (F @ g % p).astype(np.int8)
                Q = (gi @ FI % p).astype(np.int8)
                for j in range(P.shape[0]):
                    k = P[j].tobytes()
                    if k not in keys:
                        keys[k] = len(elems)
                        elems.append(P[j])
                        invs.append(Q[j])
                        new_frontier.append(len(elems) - 1)
                        if len(elems) > self.cap:
                            raise CapExceeded(
                                f"group order exceeds cap {self.cap}")
            frontier = new_frontier
        self._stack = np.array(elems, dtype=np.int8)
        self._inv_stack = np.array(invs, dtype=np.int8)
        self._keys = keys
        return self

    @classmethod
    def from_elements(cls, p, generators, stack, inv_stack, keys,
                      cap: int = DEFAULT_CAP) -> "MatGroup":
        """Wrap an already-closed element set (no re-enumeration)."""
        g = cls.__new__(cls)
        g.p = as_prime(p)
        g.generators = list(generators)
        g.dim = stack.shape[1]
        g.cap = cap
        g._stack = np.ascontiguousarray(stack, dtype=np.int8)
        g._inv_stack = np.ascontiguousarray(inv_stack, dtype=np.int8)
        g._keys = dict(keys)
        return g

    def subset_group(self, indices, generators=None) -> "MatGroup":
        """Subgroup from a closed index subset of this group's cache."""
        self.cache()
        idx = np.asarray(sorted(indices), dtype=np.int64)
        stack = self._stack[idx]
        inv_stack = self._inv_stack[idx]
        keys = {stack[i].tobytes(): i for i in range(len(idx))}
        if generators is None:
            generators = [self.element(int(i)) for i in idx]
        return MatGroup.from_elements(self.p, generators, stack, inv_stack,
                                      keys, self.cap)

    def order(self) -> int:
        return len(self.cache()._keys)

    def elements_stack(self) -> np.ndarray:
        return self.cache()._stack

    def inverses_stack(self) -> np.ndarray:
        return self.cache()._inv_stack

    def keys(self):
        return self.cache()._keys

    def element(self, i: int) -> FpMatrix:
        return FpMatrix(self.p, self.cache()._stack[i])

    def contains(self, m: FpMatrix) -> bool:
        return m.key() in self.cache()._keys

    def index_of(self, m: FpMatrix):
        return self.cache()._keys.get(m.key())

    def is_subgroup_of(self, other: "MatGroup") -> bool:
        ok = other.cache()._keys
        return all(k in ok for k in self.cache()._keys)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all((a @ b) == (b @ a) for i, a in enumerate(gens)
                   for b in gens[i + 1:])

    # -- scans -------------------------------------------------------------
    def _scan_normalizing(self, u: FpMatrix):
        """Indices of elements g with g u g^-1 in <u>."""
        p, n = self.p.p, self.dim
        self.cache()
        upows = [u.pow(k).a.astype(np.int8) for k in range(1, p)]
        utarget = np.array(upows, dtype=np.int64)  # (p-1, n, n)
        out = []
        N = self._stack.shape[0]
        u64 = u.a
        for lo in range(0, N, _CHUNK):
            S = self._stack[lo:lo + _CHUNK].astype(np.int64)
            SI = self._inv_stack[lo:lo + _CHUNK].astype(np.int64)
            conj = (S @ u64 % p) @ SI % p          # (k, n, n)
            mask = np.zeros(conj.shape[0], dtype=bool)
            for t in utarget:
                mask |= (conj == t).all(axis=(1, 2))
            out.extend((lo + np.nonzero(mask)[0]).tolist())
        return out

    def _scan_commuting(self, mats) -> list:
        """Indices of elements commuting with every matrix in mats."""
        p = self.p.p
        self.cache()
        N = self._stack.shape[0]
        out = []
        m64 = [m.a for m in mats]
        for lo in range(0, N, _CHUNK):
            S = self._stack[lo:lo + _CHUNK].astype(np.int64)
            mask = np.ones(S.shape[0], dtype=bool)
            for m in m64:
                mask &= (S @ m % p == m @ S % p).all(axis=(1, 2))
            out.extend((lo + np.nonzero(mask)[0]).tolist())
        return out

    def centralizer_of(self, mats) -> "MatGroup":
        return self.subset_group(self._scan_commuting(mats))

    def conjugates_of(self, u: FpMatrix) -> list:
        """All distinct conjugates g u g^-1, as FpMatrix."""
        p = self.p.p
        self.cache()
        seen = {}
        N = self._stack.shape[0]
        u64 = u.a
        for lo in range(0, N, _CHUNK):
            S = self._stack[lo:lo + _CHUNK].astype(np.int64)
            SI = self._inv_stack[lo:lo + _CHUNK].astype(np.int64)
            conj = ((S @ u64 % p) @ SI % p).astype(np.int8)
            for j in range(conj.shape[0]):
                k = conj[j].tobytes()
                if k not in seen:
                    seen[k] = conj[j].copy()
            del S, SI, conj
        return [FpMatrix(self.p, a) for a in seen.values()]


# -- Sylow data ----------------------------------------------------------

@dataclass
class SylowData:
    u: FpMatrix
    normalizer_N: MatGroup
    centralizer_C: MatGroup
    automizer_order: int

    def u_powers(self):
        return [self.u.pow(k) for k in range(int(self.u.p))]

    def r_of(self, g: FpMatrix) -> int:
        """Exponent r with g u g^-1 = u^r."""
        conj = g @ self.u @ g.inverse()
        for r in range(1, int(self.u.p)):
            if conj == self.u.pow(r):
                return r
        raise SubgroupViolation("element does not normalize U")


@dataclass
class GGReport:
    status: str                # 'not_in_G' | 'in_G_only' | 'in_GG'
    group_order: int
    reason: str = ""
    sylow: SylowData | None = None


def _find_order_p_element(g: MatGroup) -> FpMatrix | None:
    """First element of multiplicative order exactly p, by batched powering."""
    p = g.p.p
    n = g.dim
    ident = np.eye(n, dtype=np.int64)
    stack = g.elements_stack()
    N = stack.shape[0]
    for lo in range(0, N, _CHUNK):
        S = stack[lo:lo + _CHUNK].astype(np.int64)
        result = None
        acc = S.copy()
        k = p
        while k:
            if k & 1:
                result = acc.copy() if result is None else \
                    np.einsum("kij,kjl->kil", result, acc) % p
            k >>= 1
            if k:
                acc = np.einsum("kij,kjl->kil", acc, acc) % p
        is_p = (result == ident).all(axis=(1, 2)) & \
            ~(S == ident).all(axis=(1, 2))
        idx = np.nonzero(is_p)[0]
        if idx.size:
            return g.element(lo + int(idx[0]))
    return None


def class_GG(g: MatGroup) -> GGReport:
    """Classify g against the order-p non-normal-Sylow classes.

    'in_GG' additionally requires automizer order exactly p - 1.
    """
    p = g.p.p
    order = g.order()
    if order % p != 0:
        return GGReport("not_in_G", order, reason="p does not divide |G|")
    if (order // p) % p == 0:
        return GGReport("not_in_G", order, reason="p^2 divides |G|")
    u = _find_order_p_element(g)
    assert u is not None, "Cauchy: order-p element must exist"
    # U is normal iff every generator conjugates u back into U
    upow_keys = {u.pow(k).key() for k in range(1, p)}
    normal = all((gen @ u @ gen.inverse()).key() in upow_keys
                 for gen in g.generators)
    if normal:
        return GGReport("not_in_G", order, reason="Sylow p-subgroup is normal")
    n_idx = g._scan_normalizing(u)
    ngrp = g.subset_group(n_idx)
    c_idx = g._scan_commuting([u])
    cgrp = g.subset_group(c_idx)
    autom = ngrp.order() // cgrp.order()
    assert (p - 1) % autom == 0, "automizer order must divide p-1"
    syl = SylowData(u, ngrp, cgrp, autom)
    status = "in_GG" if autom == p - 1 else "in_G_only"
    return GGReport(status, order, sylow=syl)


def o_pprime(g: MatGroup, syl: SylowData) -> MatGroup:
    """Subgroup generated by all conjugates of u; equals O^{p'}(G)."""
    conj = g.conjugates_of(syl.u)
    conj_keys = {c.key() for c in conj}
    gens = [syl.u]
    while True:
        sub = MatGroup(g.p, gens, cap=g.cap).cache()
        missing = [c for c in conj if c.key() not in sub._keys]
        if not missing:
            sub_keys = set(sub._keys)
            assert conj_keys <= sub_keys
            return sub
        gens.append(missing[0])


def product_covers(g: MatGroup, h: MatGroup, x: MatGroup) -> bool:
    """True iff |h| * |x| / |h meet x| equals |g|, with h, x <= g."""
    gk = set(g.keys())
    hk = set(h.keys())
    xk = set(x.keys())
    if not hk <= gk or not xk <= gk:
        raise SubgroupViolation("h and x must be subgroups of g")
    meet = len(hk & xk)
    return len(hk) * len(xk) == meet * len(gk)


def _subgroups_of_table(mul, e: int, size: int):
    """All subgroups of a finite group given by a Cayley table."""
    full = frozenset(range(size))

    def closure(seed):
        seen = set(seed) | {e}
        frontier = list(seen)
        while frontier:
            nxt = []
            for a in frontier:
                for b in list(seen):
                    for c in (mul[a][b], mul[b][a]):
                        if c not in seen:
                            seen.add(c)
                            nxt.append(c)
            frontier = nxt
        return frozenset(seen)

    subs = {frozenset([e])}
    work = [frozenset([e])]
    while work:
        h = work.pop()
        for x in range(size):
            if x in h:
                continue
            k = closure(h | {x})
            if k not in subs:
                subs.add(k)
                if k != full:
                    work.append(k)
    return subs


def intermediate_subgroups(g0: MatGroup, gbar: MatGroup,
                           max_index: int = 64) -> list[MatGroup]:
    """All subgroups H with g0 <= H <= gbar, for g0 normal of small index."""
    g0.cache()
    gbar.cache()
    if not g0.is_subgroup_of(gbar):
        raise SubgroupViolation("g0 not contained in gbar")
    index = gbar.order() // g0.order()
    if index > max_index:
        raise IndexTooLarge(f"index {index} > {max_index}")
    for gen in gbar.generators:
        for h in g0.generators:
            if not g0.contains(gen @ h @ gen.inverse()):
                raise SubgroupViolation("g0 not normal in gbar")
    p = gbar.p.p
    stack = gbar.elements_stack()
    keys = gbar.keys()
    g0_idx = [keys[k] for k in g0.keys()]
    coset_of = np.full(gbar.order(), -1, dtype=np.int64)
    coset_of[g0_idx] = 0
    reps = [0 if 0 in set(g0_idx) else g0_idx[0]]
    # identity is in g0; rep of coset 0 is the identity index
    ident_key = FpMatrix.identity(gbar.p, gbar.dim).key()
    reps = [keys[ident_key]]
    g0_stack64 = stack[g0_idx].astype(np.int64)
    queue = [0]
    gen64 = [g.a for g in gbar.generators]
    while queue:
        c = queue.pop()
        r64 = stack[reps[c]].astype(np.int64)
        for g in gen64:
            t = (r64 @ g) % p
            ti = keys[t.astype(np.int8).tobytes()]
            if coset_of[ti] == -1:
                new_c = len(reps)
                reps.append(ti)
                members = (t @ g0_stack64) % p
                for j in range(members.shape[0]):
                    coset_of[keys[members[j].astype(np.int8).tobytes()]] = new_c
                queue.append(new_c)
    size = len(reps)
    assert size == index
    mul = [[0] * size for _ in range(size)]
    for i in range(size):
        a = stack[reps[i]].astype(np.int64)
        for j in range(size):
            b = stack[reps[j]].astype(np.int64)
            mul[i][j] = int(coset_of[keys[(a @ b % p).astype(np.int8).tobytes()]])
    subs = _subgroups_of_table(mul, 0, size)
    out = []
    for sub in sorted(subs, key=lambda s: (len(s), sorted(s))):
        idx = [i for i in range(gbar.order()) if coset_of[i] in sub]
        gens = g0.generators + [gbar.element(reps[c]) for c in sorted(sub) if c != 0]
        out.append(gbar.subset_group(idx, generators=gens))
    return out


def scalar_subgroup(g: MatGroup) -> MatGroup:
    """Subgroup of scalar matrices in g."""
    stack = g.elements_stack()
    n = g.dim
    diag = stack[:, np.arange(n), np.arange(n)]
    is_scalar = (diag == diag[:, :1]).all(axis=1)
    off = stack.copy()
    off[:, np.arange(n), np.arange(n)] = 0
    is_scalar &= ~off.any(axis=(1, 2))
    return g.subset_group(np.nonzero(is_scalar)[0].tolist())


# -- Sylow normalizer by orbit-stabilizer (heavy instances) ---------------

def sylow_normalizer_via_orbit(p, dim, generators, u: FpMatrix,
                               max_orbit: int = 10 ** 6):
    """N_G(<u>) for G = <generators> without enumerating G.

    Computes the conjugation orbit of U = <u> with a transversal and closes
    the Schreier generators; returns (N as MatGroup, orbit size).  |G| then
    equals orbit_size * |N| by orbit-stabilizer.
    """
    pp = int(p)

    def subgroup_key(mat64):
        best = None
        cur = mat64
        for _ in range(1, pp):
            k = (cur % pp).astype(np.int8).tobytes()
            if best is None or k < best:
                best = k
            cur = cur @ mat64 % pp
        return best

    gens64 = [g.a for g in generators]
    geninv64 = [g.inverse().a for g in generators]
    u64 = u.a
    k0 = subgroup_key(u64)
    ident = np.eye(dim, dtype=np.int64)
    orbit = {k0: 0}
    trans = [ident]
    trans_inv = [ident]
    reps = [u64]
    n_keys = {}
    n_elems = []

    def add_stab_element(mat64):
        key = (mat64 % pp).astype(np.int8).tobytes()
        if key in n_keys:
            return
        # close the stabilizer-so-far under the new element
        frontier = [mat64 % pp]
        if not n_elems:
            n_keys[ident.astype(np.int8).tobytes()] = 0
            n_elems.append(ident)
        while frontier:
            nxt = []
            for f in frontier:
                fk = f.astype(np.int8).tobytes()
                if fk in n_keys:
                    continue
                n_keys[fk] = len(n_elems)
                n_elems.append(f)
                for h in list(n_elems):
                    for prod in (f @ h % pp, h @ f % pp):
                        pk = prod.astype(np.int8).tobytes()
                        if pk not in n_keys:
                            nxt.append(prod)
            frontier = nxt

    queue = [0]
    while queue:
        i = queue.pop()
        t, ti, r = trans[i], trans_inv[i], reps[i]
        for g, gi in zip(gens64, geninv64):
            conj = gi @ r @ g % pp  # (t g)^-1 u (t g) orbit convention
            k = subgroup_key(conj)
            j = orbit.get(k)
            if j is None:
                if len(orbit) > max_orbit:
                    raise CapExceeded("Sylow orbit exceeds bound")
                orbit[k] = len(trans)
                trans.append(t @ g % pp)
                trans_inv.append(gi @ ti % pp)
                reps.append(conj)
                queue.append(len(trans) - 1)
            else:
                # Schreier generator: (t g) trans[j]^-1 stabilizes U
                s = (t @ g % pp) @ trans_inv[j] % pp
                add_stab_element(s)
    stab_gens = [FpMatrix(p, m) for m in n_elems[1:]] or [FpMatrix.identity(p, dim)]
    stack = np.array(n_elems, dtype=np.int8) if n_elems else \
        np.eye(dim, dtype=np.int8)[None]
    inv_stack = np.zeros_like(stack)
    lookup = {m.astype(np.int8).tobytes(): idx for idx, m in enumerate(n_elems)}
    for idx, m in enumerate(n_elems):
        inv = FpMatrix(p, m).inverse().a.astype(np.int8)
        inv_stack[idx] = inv
    ngrp = MatGroup.from_elements(p, stab_gens, stack, inv_stack, lookup)
    return ngrp, len(orbit)
