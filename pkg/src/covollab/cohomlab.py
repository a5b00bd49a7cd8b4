"""First cohomology of finite matrix groups, conjugacy lifting, and two
finite-field checks (polynomial vanishing on the torus, root-character span).

Cocycle convention, used everywhere here: the module is acted on from the
right by m^h = h^-1 m h, and a 1-cocycle satisfies

    delta(g h) = delta(g)^h + delta(h).

Coboundaries are delta_x(g) = x^g - x. All linear algebra runs over F_p;
an F_q-space of dimension d is an F_p-space of dimension d*e, and
dimensions are reported over F_q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import modp
from .cayley import FiniteGroupTable, enumerate_group, max_elements_default
from .chevorder import group_order
from .fields import get_field
from .localgrp import (GroupModel, PreconditionError, TruncMatrix, TruncRing, mat_identity,
                       mat_inv, mat_key, mat_level, mat_truncate, matmul)
from .rootsys import RootSystem, weight_coords


class InconsistentAction(ValueError):
    """Generator action matrices violate a relation of the group."""


class LiftFailure(ArithmeticError):
    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------------
# modules

@dataclass(eq=False)
class ModuleAction:
    """An F_p-subspace of n x n matrices over F_q with the conjugation action.

    ``basis`` rows are in reduced echelon form, so coordinates of a member
    vector are read off at the pivot columns.
    """

    ring: TruncRing
    n: int
    label: str
    basis: np.ndarray          # (d_p, n*n*e)
    pivots: list
    matrices: np.ndarray       # (k, d_p, d_p): right action of each generator

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def dim_fp(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.dim_fp // self.ring.e

    def coords(self, flat) -> np.ndarray:
        flat = np.asarray(flat) % self.p
        c = flat[..., self.pivots]
        back = (c @ self.basis) % self.p
        if not np.array_equal(back, flat):
            raise ValueError(f"vector is not in the module {self.label}")
        return c

    def vectors(self, coords) -> np.ndarray:
        return (np.asarray(coords) @ self.basis) % self.p


def _subspace_equations(ring: TruncRing, n: int, kind: str) -> np.ndarray | None:
    """F_p-linear conditions cutting ``kind`` out of gl_n(F_q)."""
    e, p = ring.e, ring.p
    nv = n * n * e
    idx = np.arange(nv).reshape(n, n, e)
    if kind == "gl":
        return None
    if kind == "sl":
        eq = np.zeros((e, nv), dtype=np.int64)
        for c in range(e):
            for i in range(n):
                eq[c, idx[i, i, c]] = 1
        return eq
    if kind == "sp":
        J = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            J[a, n - 1 - a] = 1 if a < n // 2 else -1
        rows = []
        # (X^T J + J X)_{ab} = X_{b',a} J_{b',b} + J_{a,a'} X_{a',b}
        for a in range(n):
            for b in range(n):
                for c in range(e):
                    r = np.zeros(nv, dtype=np.int64)
                    bp, ap = n - 1 - b, n - 1 - a
                    r[idx[bp, a, c]] += J[bp, b]
                    r[idx[ap, b, c]] += J[a, ap]
                    rows.append(r % p)
        return np.array(rows)
    raise ValueError(f"unknown module kind {kind!r}; use gl, sl or sp")


def _conjugation_matrix(ring: TruncRing, n: int, basis, pivots, left, right) -> np.ndarray:
    """Matrix of m -> left m right in the module coordinates."""
    e, p = ring.e, ring.p
    mats = np.zeros((basis.shape[0], n, n, ring.D), dtype=np.int64)
    mats[..., :e] = basis.reshape(-1, n, n, e)
    out = matmul(ring, matmul(ring, left, mats), right)[..., :e] % p
    flat = out.reshape(basis.shape[0], -1)
    c = flat[:, pivots]
    if not np.array_equal((c @ basis) % p, flat):
        raise InconsistentAction("conjugation does not preserve the module")
    return c.T.copy()


def adjoint_module(ring: TruncRing, generators, kind: str = "gl") -> ModuleAction:
    """gl_n, sl_n or sp_n over F_q with m^s = s^-1 m s for each generator s.

    ``ring`` must have L = 1; generators are (k, n, n, e) arrays over it.
    """
    if ring.L != 1:
        raise PreconditionError("adjoint modules are built over F_q (L = 1)")
    gens = np.asarray(generators, dtype=np.int64)
    n = gens.shape[1]
    nv = n * n * ring.e
    eqs = _subspace_equations(ring, n, kind)
    if eqs is None:
        basis, pivots = np.eye(nv, dtype=np.int64), list(range(nv))
    else:
        basis, pivots = modp.rref(modp.nullspace(eqs, ring.p), ring.p)
    mats = [_conjugation_matrix(ring, n, basis, pivots, mat_inv(ring, s), s) for s in gens]
    mats = np.array(mats) if mats else np.zeros((0, len(basis), len(basis)), dtype=np.int64)
    return ModuleAction(ring, n, f"{kind}_{n}", basis, pivots, mats)


def module_for_table(table: FiniteGroupTable, kind: str = "gl") -> ModuleAction:
    return adjoint_module(table.ring, table.generators, kind)


# ---------------------------------------------------------------------------
# cocycle systems

@dataclass(eq=False)
class CocycleSystem:
    """Z^1(G, M) as the kernel of Cayley-cycle constraints on generator values.

    ``transport[g]`` is the (d, d*k) matrix sending the generator values
    (delta(s_1), ..., delta(s_k)) to delta(g), built along the BFS tree from
    delta(g s) = A_s delta(g) + delta(s).
    """

    table: FiniteGroupTable
    action: ModuleAction
    transport: np.ndarray
    rank_fp: int
    kernel: np.ndarray
    fixed_dim_fp: int

    @property
    def p(self) -> int:
        return self.action.p

    @property
    def unknowns_fp(self) -> int:
        return self.transport.shape[2]

    @property
    def dim_z1(self) -> int:
        return (self.unknowns_fp - self.rank_fp) // self.action.ring.e

    @property
    def dim_fixed(self) -> int:
        return self.fixed_dim_fp // self.action.ring.e

    @property
    def dim_b1(self) -> int:
        return self.action.dim - self.dim_fixed

    def evaluate(self, values) -> np.ndarray:
        """delta(g) for every element, from the stacked generator values."""
        x = np.asarray(values, dtype=np.int64) % self.p
        return np.einsum("nij,j->ni", self.transport.astype(np.int64), x) % self.p

    def residual(self, values) -> np.ndarray:
        """Cocycle-identity defect on every Cayley edge, shape (N, k, d)."""
        delta = self.evaluate(values)
        t = self.table.right
        A = self.action.matrices
        d = self.action.dim_fp
        x = np.asarray(values, dtype=np.int64).reshape(-1, d)
        out = np.zeros((len(delta), len(A), d), dtype=np.int64)
        for s in range(len(A)):
            out[:, s] = (delta @ A[s].T + x[s] - delta[t[:, s]]) % self.p
        return out

    def is_cocycle(self, values) -> bool:
        return not np.any(self.residual(values))

    def coboundary(self, m) -> np.ndarray:
        """Generator values of delta_m(g) = m^g - m."""
        m = np.asarray(m, dtype=np.int64)
        return np.concatenate([(A @ m - m) % self.p for A in self.action.matrices]) \
            if len(self.action.matrices) else np.zeros(0, dtype=np.int64)


def _transport_along_tree(table, A, d, p, with_rep: bool):
    N, k = table.order, len(A)
    trans = np.zeros((N, d, d * k), dtype=np.uint8)
    rep = np.zeros((N, d, d), dtype=np.uint8) if with_rep else None
    if with_rep:
        rep[0] = np.eye(d, dtype=np.uint8)
    eye = np.eye(d, dtype=np.int64)
    for start, stop in table.layers[1:]:
        idx = np.arange(start, stop)
        par = table.parent[idx]
        gen = table.parent_gen[idx]
        As = A[gen]
        block = np.einsum("nij,njk->nik", As, trans[par].astype(np.int64)) % p
        block = block.reshape(len(idx), d, k, d)
        block[np.arange(len(idx)), :, gen, :] += eye
        trans[idx] = (block.reshape(len(idx), d, d * k) % p).astype(np.uint8)
        if with_rep:
            rep[idx] = (np.einsum("nij,njk->nik", As, rep[par].astype(np.int64)) % p).astype(np.uint8)
    return trans, rep


def build_cocycle_system(table: FiniteGroupTable, action: ModuleAction,
                         check_action: bool = True, chunk_edges: int = 4096) -> CocycleSystem:
    if table.right is None:
        raise ValueError("table was enumerated without its Cayley edges")
    A = action.matrices.astype(np.int64)
    p = action.p
    k = len(A)
    if k != table.num_generators:
        raise ValueError("action has a different number of generators than the table")
    d = action.dim_fp
    trans, rep = _transport_along_tree(table, A, d, p, check_action)
    tree = table.tree_edge_mask()
    src, gen = np.nonzero(~tree)
    reducer = modp.RowReducer(d * k, p)
    for c0 in range(0, len(src), chunk_edges):
        i = src[c0:c0 + chunk_edges]
        s = gen[c0:c0 + chunk_edges]
        t = table.right[i, s]
        if check_action:
            lhs = np.einsum("nij,njk->nik", A[s], rep[i].astype(np.int64)) % p
            bad = np.nonzero(np.any(lhs != rep[t], axis=(1, 2)))[0]
            if bad.size:
                b = int(bad[0])
                raise InconsistentAction(
                    "action violates the relation "
                    f"{table.word(int(i[b])) + [int(s[b])]} == {table.word(int(t[b]))} "
                    "(generator indices)")
        if reducer.full:
            continue
        rows = np.einsum("nij,njk->nik", A[s], trans[i].astype(np.int64))
        rows = rows.reshape(len(i), d, k, d)
        rows[np.arange(len(i)), :, s, :] += np.eye(d, dtype=np.int64)
        rows = (rows.reshape(len(i), d, d * k) - trans[t]) % p
        reducer.add(rows.reshape(-1, d * k))
    fixed = modp.RowReducer(d, p)
    for M in A:
        fixed.add((M - np.eye(d, dtype=np.int64)) % p)
    return CocycleSystem(table, action, trans, reducer.rank, reducer.kernel(), d - fixed.rank)


@dataclass(frozen=True)
class H1Result:
    dim_z1: int
    dim_b1: int
    dim_h1: int
    dim_fixed: int
    module_dim: int


def h1_dimension(table: FiniteGroupTable, action: ModuleAction,
                 system: CocycleSystem | None = None) -> H1Result:
    system = system or build_cocycle_system(table, action)
    z, b = system.dim_z1, system.dim_b1
    assert z >= b, "coboundaries must lie in Z^1"
    return H1Result(z, b, z - b, system.dim_fixed, action.dim)


def torus_indices(table: FiniteGroupTable) -> np.ndarray:
    """Indices of diagonal elements (the split torus of the standard models)."""
    els = table.elements
    n = els.shape[1]
    off = ~np.eye(n, dtype=bool)
    return np.nonzero(~np.any(els[:, off, :] != 0, axis=(1, 2)))[0]


def normalize_cocycle(system: CocycleSystem, values, torus=None) -> tuple[np.ndarray, np.ndarray]:
    """Shift a cocycle by a coboundary so it vanishes on the torus.

    With x = |T|^-1 sum_{t in T} delta(t), the cocycle delta + delta_x is
    zero on T. Returns (new generator values, x).
    """
    p = system.p
    torus = torus_indices(system.table) if torus is None else np.asarray(torus)
    size = len(torus)
    if size % p == 0:
        raise PreconditionError(f"p={p} divides the torus order {size}")
    delta = system.evaluate(values)
    x = (delta[torus].sum(axis=0) * pow(size, -1, p)) % p
    new = (np.asarray(values, dtype=np.int64) + system.coboundary(x)) % p
    return new, x


# ---------------------------------------------------------------------------
# conjugacy lifting

@dataclass(eq=False)
class LiftResult:
    conjugator: TruncMatrix
    rounds: list
    verified: bool
    inside_hypotheses: bool


def _field_embedding(ring: TruncRing, mats) -> np.ndarray:
    """Constant lift of F_q-matrices (..., n, n, e) into the ring."""
    mats = np.asarray(mats)
    out = np.zeros(mats.shape[:-1] + (ring.D,), dtype=np.int64)
    out[..., : ring.e] = mats[..., : ring.e]
    return out


def lift_conjugacy(model: GroupModel, h_generators, allow_outside_hypotheses: bool = False,
                   max_elements: int | None = None) -> LiftResult:
    """Find g in GL_n(F_q[u]/u^L) with g H g^-1 = G(F_q), one u-adic level per round."""
    ring = model.ring
    q, p, L = ring.q, ring.p, ring.L
    inside = q > 9 and p > 3
    if not inside and not allow_outside_hypotheses:
        raise PreconditionError(f"lifting needs q > 9 and p > 3 (got q={q}); "
                                "pass the override to explore outside this range")
    hgens = np.asarray(h_generators, dtype=np.int64) % p
    for h in hgens:
        if not model.is_member(h):
            raise PreconditionError(f"a generator of H is not in {model.name}")
    fring = ring.truncated(1)
    fmodel = model.with_ring(fring)
    std = fmodel.field_generators()
    gtab = enumerate_group(fring, std, max_elements=max_elements, cayley=False)
    htab = enumerate_group(ring, hgens, max_elements=max_elements, cayley=False)
    reduced = htab.elements[..., : ring.e]
    rkeys = {mat_key(r): i for i, r in enumerate(reduced)}
    if htab.order != gtab.order or len(rkeys) != htab.order or set(rkeys) != set(gtab.index):
        raise PreconditionError(
            f"reduction mod u does not map H (order {htab.order}) isomorphically onto "
            f"{model.name}(F_{q}) (order {gtab.order})")
    kind = "gl" if model.kind == "SL" else "sp"
    module = adjoint_module(fring, std, kind)
    e = ring.e
    # x -> s x s^-1 for each standard generator s
    conj = [_conjugation_matrix(fring, model.size, module.basis, module.pivots, s, mat_inv(fring, s))
            for s in std]
    d = module.dim_fp
    system = np.vstack([(C - np.eye(d, dtype=np.int64)) % p for C in conj])
    colspace = modp.RowReducer.from_rows(system.T, p)
    s_ring = _field_embedding(ring, std)
    s_inv = np.array([mat_inv(ring, s) for s in s_ring])
    h_pre = htab.elements[[rkeys[mat_key(s)] for s in std]].astype(np.int64)
    g = mat_identity(ring, model.size)
    rounds = []
    for m in range(1, L):
        ginv = mat_inv(ring, g)
        c = matmul(ring, matmul(ring, g, h_pre), ginv)
        dmat = matmul(ring, c, s_inv)
        level = int(mat_level(ring, dmat).min())
        if level < m:
            raise AssertionError(f"defect at level {level} before round {m}")
        defect = dmat[..., m * e:(m + 1) * e].reshape(len(std), -1)
        coords = np.concatenate([module.coords(v) for v in defect])
        record = {"round": m, "defect_level": level, "defect_zero": not np.any(coords)}
        if record["defect_zero"]:
            rounds.append(record)
            continue
        xbar = modp.solve(system, coords, p)
        if xbar is None:
            residual = colspace.reduce(coords[None])[0]
            record["residual_class"] = residual.tolist()
            rounds.append(record)
            raise LiftFailure(
                f"coboundary equation has no solution at level {m}: the defect cocycle "
                "represents a nonzero class in H^1",
                {"rounds": rounds, "inside_hypotheses": inside})
        step = mat_identity(ring, model.size)
        step[..., m * e:(m + 1) * e] = (step[..., m * e:(m + 1) * e]
                                        + module.vectors(xbar).reshape(model.size, model.size, e)) % p
        g = matmul(ring, step, g)
        rounds.append(record)
    # exact post-check on every element of H
    ginv = mat_inv(ring, g)
    conj_all = matmul(ring, matmul(ring, g, htab.elements.astype(np.int64)), ginv)
    constant = not np.any(conj_all[..., e:])
    keys = {mat_key(x) for x in conj_all[..., :e]}
    if not (constant and keys == set(gtab.index)):
        raise LiftFailure("post-check failed: g H g^-1 differs from G(F_q)",
                          {"rounds": rounds, "inside_hypotheses": inside})
    return LiftResult(TruncMatrix(ring, g), rounds, True, inside)


# ---------------------------------------------------------------------------
# finite-field lemmas

def poly_vanish_check(q: int, n: int, coeffs: dict, max_points: int | None = None) -> dict:
    """Evaluate Q on (F_q^*)^n; Q maps exponent tuples to F_q elements."""
    F = get_field(q)
    bound = max_elements_default() if max_points is None else max_points
    terms = {}
    for exps, c in coeffs.items():
        exps = tuple(int(x) for x in exps)
        if len(exps) != n or min(exps, default=0) < 0:
            raise PreconditionError(f"exponent tuple {exps} does not have {n} nonnegative entries")
        if max(exps, default=0) > q - 2:
            raise PreconditionError(
                f"degree {max(exps)} in some variable exceeds q-2 = {q - 2}; "
                "the vanishing lemma needs every partial degree <= q-2")
        c = int(c) % q if F.is_prime else int(c)
        if not 0 <= c < q:
            raise ValueError(f"coefficient {c} is not an element of F_{q}")
        if c:
            terms[exps] = c
    if (q - 1) ** n > bound:
        raise PreconditionError(f"(q-1)^n = {(q - 1) ** n} points exceeds bound {bound}")
    pts = np.array(list(product(range(1, q), repeat=n)), dtype=np.int64).reshape(-1, n)
    value = np.zeros(len(pts), dtype=np.int64)
    for exps, c in terms.items():
        mono = np.full(len(pts), c, dtype=np.int64)
        for i, k in enumerate(exps):
            if k:
                mono = F.mul(mono, F.power(pts[:, i], k))
        value = F.add(value, mono)
    hits = np.nonzero(value)[0]
    if hits.size:
        j = int(hits[0])
        return {"status": "witness", "point": pts[j].tolist(), "value": int(value[j]),
                "points_checked": len(pts)}
    return {"status": "zero" if not terms else "counterexample", "point": None, "value": 0,
            "points_checked": len(pts), "nonzero_terms": len(terms)}


def root_span_rank(rs: RootSystem, q: int, max_points: int | None = None) -> dict:
    """Rank over F_q of the rows (1, beta(t))_{beta} for t in T(F_q)."""
    F = get_field(q)
    r = rs.rank
    bound = max_elements_default() if max_points is None else max_points
    npts = (q - 1) ** r
    if npts > bound:
        raise PreconditionError(f"(q-1)^r = {npts} torus points exceeds bound {bound}")
    W = np.array([weight_coords(rs, b) for b in rs.roots], dtype=np.int64)  # (|Phi|, r)
    ncols = len(rs.roots) + 1
    reducer = modp.RowReducer(ncols * F.e, F.p)
    chunk = max(1, 65536 // max(1, F.e))
    logs_iter = product(range(q - 1), repeat=r)
    done = 0
    while done < npts:
        block = np.array([next(logs_iter) for _ in range(min(chunk, npts - done))], dtype=np.int64)
        done += len(block)
        vals = F.exp_table[(block @ W.T) % (q - 1)]
        mat = np.hstack([np.ones((len(block), 1), dtype=np.int64), vals])
        reducer.add(F.to_fp_matrix(mat) if F.e > 1 else mat)
        if reducer.full:
            break
    rank = reducer.rank // F.e
    return {"type": str(rs.rstype), "q": q, "rank": rank, "full": rank == ncols,
            "columns": ncols, "points": npts}


def full_group_table(model: GroupModel, max_elements: int | None = None) -> FiniteGroupTable:
    """Cayley table of G(F_q) from u_{+-alpha_i}(w^c); ring must have L = 1."""
    return enumerate_group(model.ring, model.field_generators(), max_elements=max_elements)


def expected_order(model: GroupModel) -> int:
    return group_order(model.rstype, model.ring.q)
