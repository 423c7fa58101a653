"""Exact isomorphism testing and end-to-end verification of catalog claims.

``is_isomorphic`` is sound and complete within its budget: a PASS comes
with a generator-image map whose closure was checked on every product, a
refutation names the distinguishing invariant or reports exhausted
backtracking, and anything past the budget is reported as BUDGET, never
guessed.
"""

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .catalog import CATALOG, get_entry
from .classical import ClassicalSpec, build
from .errors import BudgetExceeded, Inapplicable, SylowkitError
from .ff import ff_from_size
from .groups import DEFAULT_BUDGET, Group, fingerprint
from .sylow import sylow

ISO_ORDER_MAX = 100_000
ISO_GENS_MAX = 6
ISO_NODE_MAX = 500_000


@dataclass
class IsoResult:
    isomorphic: bool | None  # None means the budget was exhausted
    reason: str = ""
    gen_map: list[tuple[int, int]] | None = None  # generator index pairs
    full_map: np.ndarray | None = None  # G index -> H index


def _class_keys(G: Group) -> np.ndarray:
    """Per-element invariant (order, centralizer size), encoded as int64.
    Centralizer sizes are only computed at Cayley-table scale."""
    n = len(G)
    orders = G.orders()
    if G.ensure_cayley():
        tab = G.cayley()
        csize = np.count_nonzero(tab == tab.T, axis=1)
    else:
        csize = np.zeros(n, dtype=np.int64)
    return orders.astype(np.int64) * (n + 1) + csize


class _BacktrackBudget(Exception):
    pass


class _IsoSearch:
    """Backtracking over generator images with incremental closure.

    When a generator pair (g, h) is pushed, the partial map is extended by
    right products: every already-mapped x gets x*g checked/defined, and
    every newly mapped x gets x*g_i for all pushed generators.  Checking
    right products against generators only suffices: a map satisfying
    phi(x g) = phi(x) phi(g) on the closure for every generator g is a
    homomorphism (induction on the word length of the right factor)."""

    def __init__(self, G: Group, H: Group):
        self.G, self.H = G, H
        self.n = len(G)
        self.tabG = G.cayley() if G.ensure_cayley() else None
        self.tabH = H.cayley() if H.ensure_cayley() else None
        self.mapGH = np.full(self.n, -1, dtype=np.int64)
        self.mapHG = np.full(self.n, -1, dtype=np.int64)
        self.mapped: list[int] = []
        self.gen_pairs: list[tuple[int, int]] = []
        self.nodes = 0

    def _mulG(self, a, b):
        if self.tabG is not None:
            return self.tabG[a, b].astype(np.int64)
        return self.G.mul_idx(a, b)

    def _mulH(self, a, b):
        if self.tabH is not None:
            return self.tabH[a, b].astype(np.int64)
        return self.H.mul_idx(a, b)

    def _absorb(self, xs, ys, added, fresh) -> bool:
        """Record phi(xs) = ys; False on any inconsistency."""
        xs, ys = np.atleast_1d(xs), np.atleast_1d(ys)
        cur = self.mapGH[xs]
        if np.any((cur != -1) & (cur != ys)):
            return False
        todo = cur == -1
        for x, y in zip(xs[todo].tolist(), ys[todo].tolist()):
            cx = self.mapGH[x]
            if cx != -1:
                if cx != y:
                    return False
                continue
            if self.mapHG[y] != -1:
                return False
            self.mapGH[x] = y
            self.mapHG[y] = x
            self.mapped.append(x)
            added.append(x)
            fresh.append(x)
        return True

    def _push(self, g: int, h: int):
        """Push the generator pair (g, h); returns the list of newly mapped
        G-indices, or None after full rollback on inconsistency."""
        if self.mapGH[g] != -1 or self.mapHG[h] != -1:
            return None
        prev = np.array(self.mapped, dtype=np.int64)
        added: list[int] = []
        fresh: list[int] = []
        self.gen_pairs.append((g, h))
        ok = self._absorb(g, h, added, fresh)
        if ok and prev.size:
            ok = self._absorb(
                self._mulG(prev, g), self._mulH(self.mapGH[prev], h), added, fresh
            )
        while ok and fresh:
            batch = np.array(fresh, dtype=np.int64)
            fresh = []
            for gg, hh in self.gen_pairs:
                if not self._absorb(
                    self._mulG(batch, gg), self._mulH(self.mapGH[batch], hh),
                    added, fresh,
                ):
                    ok = False
                    break
        if not ok:
            self._rollback(added)
            self.gen_pairs.pop()
            return None
        return added

    def _rollback(self, added):
        for x in added:
            y = self.mapGH[x]
            self.mapGH[x] = -1
            self.mapHG[y] = -1
        if added:
            del self.mapped[len(self.mapped) - len(added):]

    def run(self, gens: list[int], cand_lists: list[np.ndarray]):
        self._push(0, 0)

        def dfs(k: int) -> bool:
            if k == len(gens):
                return len(self.mapped) == self.n
            g = gens[k]
            if self.mapGH[g] != -1:
                return dfs(k + 1)
            for h in cand_lists[k].tolist():
                if self.mapHG[h] != -1:
                    continue
                self.nodes += 1
                if self.nodes > ISO_NODE_MAX:
                    raise _BacktrackBudget
                added = self._push(g, h)
                if added is not None:
                    if dfs(k + 1):
                        return True
                    self._rollback(added)
                    self.gen_pairs.pop()
            return False

        return dfs(0)


def _small_generating_set(G: Group, cap: int) -> list[int]:
    """The construction's generators if small enough, else a greedy set
    picking the highest-order element outside the current closure
    (deterministic: ties break to the earliest enumeration index)."""
    gens = G.gens
    if len(gens) <= cap:
        return gens
    from .groups import IndexClosure

    ords = G.orders()
    clo = IndexClosure(G)
    out: list[int] = []
    inside = np.zeros(len(G), dtype=bool)
    inside[0] = True
    while not inside.all():
        cand = np.nonzero(~inside)[0]
        pick = int(cand[np.argmax(ords[cand])])
        out.append(pick)
        clo.add_gen(pick)
        inside[:] = False
        inside[clo.closed] = True
    return out if len(out) < len(gens) else gens


def is_isomorphic(G: Group, H: Group) -> IsoResult:
    """Decide G ~ H exactly; PASS carries a verified generator-image map."""
    if len(G) != len(H):
        return IsoResult(False, f"order {len(G)} != {len(H)}")
    if len(G) > ISO_ORDER_MAX:
        return IsoResult(None, f"order {len(G)} above the isomorphism budget {ISO_ORDER_MAX}")
    fg, fh = fingerprint(G), fingerprint(H)
    if fg != fh:
        for name in ("order_hist", "center_order", "derived_order", "abelianization", "exponent"):
            if getattr(fg, name) != getattr(fh, name):
                return IsoResult(False, f"fingerprint mismatch: {name} "
                                        f"{getattr(fg, name)} != {getattr(fh, name)}")
    gens = _small_generating_set(G, ISO_GENS_MAX)
    if len(gens) > ISO_GENS_MAX:
        swapped = is_isomorphic_oriented(H, G)
        if swapped.isomorphic is not True:
            return swapped
        inv_map = np.empty(len(G), dtype=np.int64)
        inv_map[swapped.full_map] = np.arange(len(G))
        gen_map = [(int(g), int(h)) for h, g in swapped.gen_map]
        return IsoResult(True, "", gen_map, inv_map)
    return _run_iso(G, H, gens)


def is_isomorphic_oriented(G: Group, H: Group) -> IsoResult:
    gens = _small_generating_set(G, ISO_GENS_MAX)
    if len(gens) > ISO_GENS_MAX:
        return IsoResult(None, f"{len(gens)} generators exceed the budget {ISO_GENS_MAX}")
    return _run_iso(G, H, gens)


def _run_iso(G: Group, H: Group, gens: list[int]) -> IsoResult:
    keyG, keyH = _class_keys(G), _class_keys(H)
    gv, gc = np.unique(keyG, return_counts=True)
    hv, hc = np.unique(keyH, return_counts=True)
    if not (np.array_equal(gv, hv) and np.array_equal(gc, hc)):
        return IsoResult(False, "fingerprint mismatch: centralizer-size classes")
    cand_lists = [np.nonzero(keyH == keyG[g])[0] for g in gens]
    search = _IsoSearch(G, H)
    try:
        found = search.run(gens, cand_lists)
    except _BacktrackBudget:
        return IsoResult(None, f"backtracking exceeded {ISO_NODE_MAX} nodes")
    if not found:
        return IsoResult(False, "exhausted backtracking: no generator map extends")
    gen_map = [(g, int(search.mapGH[g])) for g in gens]
    return IsoResult(True, "", gen_map, search.mapGH.copy())


def witness_replay(G: Group, H: Group, full_map: np.ndarray, samples: int = 1_000_000) -> bool:
    """Re-verify a witness: phi(ab) = phi(a)phi(b), exhaustively when
    |G|^2 is small, on a deterministic stride of pairs otherwise."""
    n = len(G)
    if not np.array_equal(np.sort(full_map), np.arange(n)):
        return False
    if n * n <= samples:
        ii = np.repeat(np.arange(n, dtype=np.int64), n)
        jj = np.tile(np.arange(n, dtype=np.int64), n)
    else:
        ar = np.arange(samples, dtype=np.int64)
        ii = (ar * 7919) % n
        jj = (ar * 104729 + 1) % n
    lhs = full_map[G.mul_idx(ii, jj)]
    rhs = H.mul_idx(full_map[ii], full_map[jj])
    return bool(np.array_equal(lhs, rhs))


# ---------------------------------------------------------------------------
# cases and reports

VERDICTS = ("PASS", "FAIL-ORDER", "FAIL-ISO", "INAPPLICABLE", "BUDGET")


@dataclass(frozen=True)
class Case:
    entry: str
    prime: int
    params: tuple[tuple[str, int | str], ...]  # sorted (name, value) pairs
    quarantined: bool = False

    @staticmethod
    def make(entry: str, prime: int, quarantined: bool = False, **params) -> "Case":
        return Case(entry, prime, tuple(sorted(params.items())), quarantined)

    @property
    def params_dict(self) -> dict:
        return dict(self.params)

    @property
    def case_id(self) -> str:
        ps = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.entry}({ps})@l={self.prime}"


@dataclass
class VerificationReport:
    case: Case
    family: str = ""
    ambient: str = ""
    spec_dim: int | None = None
    spec_q: int | None = None
    spec_sign: str | None = None
    verdict: str = "INAPPLICABLE"
    reason: str = ""
    expected_order: int | None = None
    actual_order: int | None = None
    model_fingerprint: dict | None = None
    sylow_fingerprint: dict | None = None
    witness: list[list[str]] | None = None
    ms: float = 0.0

    def as_dict(self, timings: bool = False) -> dict:
        pd = self.case.params_dict
        spec_params = {
            "n": self.spec_dim,
            "m": pd.get("m"),
            "q": self.spec_q if self.spec_q is not None else pd.get("q"),
            "eps": self.spec_sign if self.spec_sign else pd.get("eps"),
        }
        out = {
            "case": self.case.case_id,
            "family": self.family,
            "params": spec_params,
            "prime": self.case.prime,
            "entry": self.case.entry,
            "expected_order": self.expected_order,
            "actual_order": self.actual_order,
            "verdict": self.verdict,
            "reason": self.reason,
            "quarantined": self.case.quarantined,
            "fingerprints": {
                "model": self.model_fingerprint,
                "sylow": self.sylow_fingerprint,
            },
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if timings:
            out["ms"] = round(self.ms, 3)
        return out


def verify_claim(case: Case, budget: int = DEFAULT_BUDGET, allow_l2: bool = False) -> VerificationReport:
    """Build ambient group, extract the Sylow subgroup, build the model,
    compare orders, then test isomorphism.  All failures are verdicts."""
    entry = get_entry(case.entry)
    params = case.params_dict
    rep = VerificationReport(case=case)
    t0 = time.perf_counter()
    try:
        spec = entry.ambient(params, case.prime)
        rep.family = spec.family
        rep.ambient = str(spec)
        rep.spec_dim = spec.dim
        rep.spec_q = spec.q
        rep.spec_sign = spec.sign or None
    except (Inapplicable, SylowkitError) as e:
        rep.verdict = "INAPPLICABLE"
        rep.reason = str(e)
        rep.ms = 1000 * (time.perf_counter() - t0)
        return rep
    ok, why = entry.applicable(params, case.prime)
    if not ok:
        rep.verdict = "INAPPLICABLE"
        rep.reason = why
        rep.ms = 1000 * (time.perf_counter() - t0)
        return rep
    if entry.provisional(params, case.prime) and not allow_l2:
        rep.verdict = "INAPPLICABLE"
        rep.reason = "provisional regime: run with the l = 2 override"
        rep.ms = 1000 * (time.perf_counter() - t0)
        return rep
    try:
        ambient = build(spec, budget)
        sy = sylow(ambient, case.prime)
        model = entry.model(params, case.prime, budget)
    except BudgetExceeded as e:
        rep.verdict = "BUDGET"
        rep.reason = str(e)
        rep.ms = 1000 * (time.perf_counter() - t0)
        return rep
    except Inapplicable as e:
        rep.verdict = "INAPPLICABLE"
        rep.reason = str(e)
        rep.ms = 1000 * (time.perf_counter() - t0)
        return rep
    rep.expected_order = len(model)
    rep.actual_order = len(sy.subgroup)
    rep.model_fingerprint = fingerprint(model).as_dict()
    rep.sylow_fingerprint = fingerprint(sy.subgroup).as_dict()
    if rep.expected_order != rep.actual_order:
        rep.verdict = "FAIL-ORDER"
        rep.reason = f"model order {rep.expected_order} != Sylow order {rep.actual_order}"
    else:
        iso = is_isomorphic(model, sy.subgroup)
        if iso.isomorphic is True:
            rep.verdict = "PASS"
            rep.witness = [
                [model.element_str(g), sy.subgroup.element_str(h)] for g, h in iso.gen_map
            ]
        elif iso.isomorphic is False:
            rep.verdict = "FAIL-ISO"
            rep.reason = iso.reason
        else:
            rep.verdict = "BUDGET"
            rep.reason = iso.reason
    rep.ms = 1000 * (time.perf_counter() - t0)
    return rep


# ---------------------------------------------------------------------------
# the default suite


def default_suite(allow_l2: bool = False) -> list[Case]:
    mk = Case.make
    cases = [
        # defining-characteristic linear
        *(mk("PSL-p", ff_from_size(q).p, n=n, q=q)
          for n, q in [(2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (2, 9)]),
        # odd-l linear, both the PSL and SL forms
        *(mk(e, l, n=n, q=q)
          for n, q, l in [(2, 4, 3), (2, 7, 3), (3, 4, 3), (2, 16, 5)]
          for e in ("PSL-l", "SL-l")),
        # GL wreath models
        *(mk("GL-l", l, n=n, q=q)
          for n, q, l in [(2, 4, 3), (3, 2, 7), (4, 2, 5), (2, 3, 2)]),
        # symplectic, defining characteristic
        *(mk("PSp-p", ff_from_size(q).p, n=n, q=q) for n, q in [(1, 3), (2, 2), (2, 3)]),
        # symplectic, l = 2 (the (1,5) probe adjudicates the s resolution)
        mk("PSp-2", 2, n=1, q=3),
        mk("PSp-2", 2, n=2, q=3),
        mk("PSp-2", 2, quarantined=True, n=1, q=5),
        # symplectic cross-characteristic reductions (d even either way)
        mk("PSp-l-reduce", 3, n=2, q=2),
        mk("PSp-l-reduce", 5, n=2, q=2),
        # orthogonal, defining characteristic
        mk("Omega-even-p", 3, m=2, q=3, eps="+"),
        mk("Omega-even-p", 3, m=2, q=3, eps="-"),
        mk("Omega-even-2", 2, m=2, q=2, eps="+"),
        mk("Omega-even-2", 2, m=2, q=2, eps="-"),
        mk("Omega-odd-p", 3, m=1, q=3),
        mk("Omega-odd-p", 3, m=2, q=3),
        # orthogonal cross-characteristic reduction (l = 2 row is skipped as
        # inapplicable by the predicate)
        mk("Omega-l-reduce", 5, n=4, q=3, eps="-"),
        mk("Omega-l-reduce", 3, n=4, q=4, eps="+"),
        mk("Omega-l-reduce", 2, n=5, q=3),
        mk("Omega-l-reduce", 3, n=4, q=5, eps="+"),
        # orthogonal Sylow 2-subgroups, odd q
        mk("O-even-2", 2, m=1, q=5, eps="+"),
        mk("O-even-2", 2, m=1, q=3, eps="-"),
        mk("O-even-2", 2, m=1, q=3, eps="+"),
        mk("O-odd-2", 2, m=1, q=3),
        mk("O-odd-2", 2, m=1, q=5),
        # unitary, defining characteristic
        mk("U-even-p", 2, m=1, p=2, r=1),
        mk("U-odd-p", 2, m=1, p=2, r=1),
        mk("U-even-p", 3, m=1, p=3, r=1),
        # unitary cross-characteristic reductions
        mk("PSU-l-reduce", 3, n=2, q=2),
        mk("U-l-reduce", 3, n=2, q=2),
        mk("U-l-reduce", 5, n=4, q=2),
        mk("U-l-reduce", 2, n=3, q=2),
    ]
    if allow_l2:
        cases += [
            mk("PSL-l", 2, quarantined=True, n=2, q=3),
            mk("PSL-l", 2, quarantined=True, n=2, q=5),
            mk("PSL-l", 2, quarantined=True, n=2, q=7),
        ]
    return cases


def _run_case(args) -> VerificationReport:
    case, budget, allow_l2 = args
    return verify_claim(case, budget, allow_l2)


@dataclass
class SuiteResult:
    reports: list[VerificationReport]
    exit_code: int
    summary: dict = field(default_factory=dict)

    def as_dict(self, timings: bool = False) -> dict:
        return {
            "cases": [r.as_dict(timings) for r in self.reports],
            "summary": self.summary,
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.as_dict(timings), sort_keys=True, indent=2) + "\n"


def run_suite(cases: list[Case], budget: int = DEFAULT_BUDGET, jobs: int = 1,
              allow_l2: bool = False, max_order: int | None = None) -> SuiteResult:
    if max_order is not None:
        kept = []
        for c in cases:
            entry = get_entry(c.entry)
            try:
                from .classical import order_formula
                if order_formula(entry.ambient(c.params_dict, c.prime)) <= max_order:
                    kept.append(c)
            except (Inapplicable, SylowkitError):
                kept.append(c)
        cases = kept
    work = [(c, budget, allow_l2) for c in cases]
    if jobs <= 1:
        reports = [_run_case(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_case, work))
    counts = {v: 0 for v in VERDICTS}
    quarantined = {}
    failed = 0
    budget_hit = 0
    for r in reports:
        counts[r.verdict] += 1
        if r.case.quarantined:
            quarantined[r.case.case_id] = r.verdict
        elif r.verdict in ("FAIL-ORDER", "FAIL-ISO"):
            failed += 1
        elif r.verdict == "BUDGET":
            budget_hit += 1
    exit_code = 1 if failed else (3 if budget_hit else 0)
    summary = {
        "total": len(reports),
        "verdicts": counts,
        "quarantined": quarantined,
        "exit_code": exit_code,
    }
    return SuiteResult(reports, exit_code, summary)
