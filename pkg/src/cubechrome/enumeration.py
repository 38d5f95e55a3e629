"""Canonical forms and the search for minimal unavoidable configurations.

Unavoidability of a partial coloring of Q_d with palette d is a covering
question: every proper d-edge coloring ``f`` is *hit* by the colored pair
``(e, phi(e))`` when ``f(e) == phi(e)``, and ``phi`` is unavoidable exactly
when its pairs hit all of them.  Minimal unavoidable colorings are therefore
minimal covers using at most one pair per edge, which we enumerate by
branching on an un-hit coloring with exclusion of earlier siblings.
"""

from __future__ import annotations

import itertools
import json
import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .coloring import PartialColoring, is_proper
from .hypercube import build, edge_permutations
from .solver import Status, all_proper_colorings, avoid_exact

log = logging.getLogger(__name__)

MAX_EXACT_DIM = 4


@dataclass(frozen=True, order=True)
class CanonicalKey:
    data: bytes
    d: int = field(compare=False)
    mod_colors: bool = field(compare=False)

    def hex(self) -> str:
        return self.data.hex()

    def coloring(self) -> PartialColoring:
        """The orbit representative whose serialization is this key."""
        cube = build(self.d)
        colors = tuple(self.data)
        return PartialColoring(cube, max(self.d, max(colors, default=1)), colors)


def _first_occurrence(colors) -> tuple[int, ...]:
    rel: dict[int, int] = {}
    out = []
    for c in colors:
        if c:
            if c not in rel:
                rel[c] = len(rel) + 1
            out.append(rel[c])
        else:
            out.append(0)
    return tuple(out)


def _image(colors, perm) -> list[int]:
    img = [0] * len(colors)
    for i, c in enumerate(colors):
        if c:
            img[perm[i]] = c
    return img


def canonical_tuple(colors, d: int, mod_colors: bool = True) -> tuple[int, ...]:
    best = None
    for perm in edge_permutations(d):
        img = _image(colors, perm)
        t = _first_occurrence(img) if mod_colors else tuple(img)
        if best is None or t < best:
            best = t
    return best


def canonical_key(phi: PartialColoring, mod_colors: bool = True) -> CanonicalKey:
    """Least serialization over the automorphism orbit (and color renamings)."""
    d = getattr(phi.host, "d", None)
    if d is None:
        raise ValueError("canonical keys are defined for hypercube hosts")
    if max(phi.colors, default=0) > 255:
        raise ValueError("colors must fit in a byte")
    return CanonicalKey(bytes(canonical_tuple(phi.colors, d, mod_colors)), d, mod_colors)


def same_orbit(phi: PartialColoring, psi: PartialColoring, mod_colors: bool = True) -> bool:
    """Decide orbit membership by direct search over automorphisms."""
    if phi.host != psi.host:
        return False
    for perm in edge_permutations(phi.host.d):
        img = _image(phi.colors, perm)
        if not mod_colors:
            if tuple(img) == psi.colors:
                return True
            continue
        fwd: dict[int, int] = {}
        back: dict[int, int] = {}
        ok = True
        for a, b in zip(img, psi.colors):
            if bool(a) != bool(b):
                ok = False
                break
            if a:
                if fwd.setdefault(a, b) != b or back.setdefault(b, a) != a:
                    ok = False
                    break
        if ok:
            return True
    return False


def is_minimal_unavoidable(phi: PartialColoring, proper_only: bool = False) -> bool:
    cube = phi.host
    if getattr(cube, "d", MAX_EXACT_DIM + 1) > MAX_EXACT_DIM:
        raise ValueError(f"exact minimality test supports d <= {MAX_EXACT_DIM}")
    if proper_only and not is_proper(phi):
        return False
    d = cube.d
    if avoid_exact(cube, phi, d).status is not Status.NONE:
        return False
    return all(avoid_exact(cube, phi.uncolor(i), d).status is Status.FOUND for i in phi.colored())


# -- catalog ----------------------------------------------------------------

@dataclass
class CatalogEntry:
    key: CanonicalKey
    coloring: PartialColoring

    @property
    def metadata(self) -> dict:
        counts = sorted(self.coloring.color_counts().values(), reverse=True)
        return {
            "edges": len(self.coloring),
            "color_multiset": counts,
            "proper": is_proper(self.coloring),
            "minimal_unavoidable": True,
        }

    def to_json(self) -> dict:
        from .io import coloring_to_json

        return {"key": self.key.hex(), "coloring": coloring_to_json(self.coloring), "meta": self.metadata}


@dataclass
class ConfigurationCatalog:
    d: int
    proper_only: bool
    entries: list[CatalogEntry]
    complete: bool = True
    nodes: int = 0
    # every shard that was run finished inside its budget
    shards_exhausted: bool = True

    def __len__(self) -> int:
        return len(self.entries)

    def keys(self) -> set[CanonicalKey]:
        return {e.key for e in self.entries}

    def colorings(self) -> list[PartialColoring]:
        return [e.coloring for e in self.entries]

    def write_jsonl(self, path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w") as fh:
            for e in self.entries:
                fh.write(json.dumps(e.to_json(), sort_keys=True) + "\n")

    @classmethod
    def read_jsonl(cls, path, d: int, proper_only: bool) -> "ConfigurationCatalog":
        from .io import coloring_from_json

        entries = []
        for line in Path(path).read_text().splitlines():
            if line.strip():
                rec = json.loads(line)
                phi = coloring_from_json(rec["coloring"])
                entries.append(CatalogEntry(CanonicalKey(bytes.fromhex(rec["key"]), d, True), phi))
        return cls(d, proper_only, entries)


@lru_cache(maxsize=4)
def _cover_table(d: int):
    cube = build(d)
    sols = list(all_proper_colorings(cube, d))
    masks = {}
    for e in range(cube.n_edges):
        for c in range(1, d + 1):
            masks[e, c] = sum(1 << k for k, f in enumerate(sols) if f[e] == c)
    return sols, masks


def hit_mask(phi: PartialColoring) -> int:
    """Bitset of the proper colorings that ``phi`` is *not* avoided by."""
    _, masks = _cover_table(phi.host.d)
    out = 0
    for i, c in enumerate(phi.colors):
        if c:
            out |= masks.get((i, c), 0)
    return out


def _search_shard(d: int, proper_only: bool, shard: int, n_shards: int, budget: int | None):
    cube = build(d)
    sols, masks = _cover_table(d)
    full = (1 << len(sols)) - 1
    adj = cube.adjacent
    m = cube.n_edges
    found: dict[bytes, tuple[int, ...]] = {}
    nodes = 0
    complete = True

    class _Stop(Exception):
        pass

    def rec(cols, chosen, covered, banned, depth):
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise _Stop
        for e, c in chosen:
            rest = 0
            for e2, c2 in chosen:
                if e2 != e:
                    rest |= masks[e2, c2]
            if rest | masks[e, c] == rest:
                return
        if covered == full:
            t = canonical_tuple(cols, d)
            found.setdefault(bytes(t), t)
            return
        low = ~covered & full
        f = sols[(low & -low).bit_length() - 1]
        banned = set(banned)
        branch = 0
        for e in range(m):
            c = f[e]
            if cols[e] or (e, c) in banned:
                continue
            if proper_only and any(cols[a] == c for a in adj[e]):
                continue
            if depth == 0:
                branch += 1
                if (branch - 1) % n_shards != shard:
                    banned.add((e, c))
                    continue
            cols[e] = c
            chosen.append((e, c))
            rec(cols, chosen, covered | masks[e, c], banned, depth + 1)
            chosen.pop()
            cols[e] = 0
            banned.add((e, c))

    try:
        rec([0] * m, [], 0, frozenset(), 0)
    except _Stop:
        complete = False
    return found, nodes, complete


def _shard_path(checkpoint_dir, d, proper_only, shard, n_shards) -> Path:
    tag = "proper" if proper_only else "general"
    return Path(checkpoint_dir) / f"q{d}-{tag}-shard{shard}of{n_shards}.json"


def enumerate_minimal_unavoidable(
    d: int,
    proper_only: bool = False,
    *,
    shards: tuple[int, int] | None = None,
    checkpoint_dir=None,
    budget: int | None = None,
    verify: bool = True,
) -> ConfigurationCatalog:
    """All minimal unavoidable partial d-edge colorings of Q_d up to symmetry.

    ``shards=(i, n)`` restricts the search to shard ``i`` of ``n``; with
    ``shards=None`` every shard runs and results are merged by key.  When
    ``checkpoint_dir`` is given, finished shards are stored there and reused.
    d = 4 is only explored under a node budget and flagged incomplete.
    """
    if d not in (1, 2, 3, 4):
        raise ValueError(f"enumeration supports d in 1..4, got {d}")
    if d == 4 and budget is None:
        budget = 200_000
    n_shards = shards[1] if shards else 1
    todo = [shards[0]] if shards else list(range(n_shards))
    if shards and not 0 <= shards[0] < shards[1]:
        raise ValueError(f"bad shard spec {shards}")
    merged: dict[bytes, tuple[int, ...]] = {}
    complete = True
    nodes = 0
    for s in todo:
        path = _shard_path(checkpoint_dir, d, proper_only, s, n_shards) if checkpoint_dir else None
        if path is not None and path.exists():
            rec = json.loads(path.read_text())
            found = {bytes.fromhex(k): tuple(bytes.fromhex(k)) for k in rec["keys"]}
            done, n = rec["complete"], rec["nodes"]
            log.info("reusing shard %d/%d from %s", s, n_shards, path)
        else:
            found, n, done = _search_shard(d, proper_only, s, n_shards, budget)
            if path is not None:
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(json.dumps({"keys": sorted(k.hex() for k in found), "complete": done, "nodes": n}))
        merged.update(found)
        complete &= done
        nodes += n
    cube = build(d)
    entries = []
    for k in sorted(merged):
        phi = PartialColoring(cube, d, merged[k])
        if verify and not is_minimal_unavoidable(phi, proper_only):
            raise AssertionError(f"catalog member {k.hex()} failed re-verification")
        entries.append(CatalogEntry(CanonicalKey(k, d, True), phi))
    # a single shard of several covers only part of the search
    return ConfigurationCatalog(d, proper_only, entries, complete and len(todo) == n_shards, nodes, complete)


def contains_member(phi: PartialColoring, catalog: ConfigurationCatalog) -> bool:
    """Whether some sub-coloring of ``phi`` lies in the catalog, up to symmetry."""
    cube = phi.host
    d = cube.d
    cur = phi
    # greedily shed redundant edges to reach a minimal unavoidable sub-coloring
    if avoid_exact(cube, cur, d).status is not Status.NONE:
        return False
    for i in phi.colored():
        trial = cur.uncolor(i)
        if avoid_exact(cube, trial, d).status is Status.NONE:
            cur = trial
    return canonical_key(cur) in catalog.keys()


# -- forbidden triples -------------------------------------------------------

CLAIM_BOUNDS = {0: 0, 1: 0, 2: 0, 3: 0, 4: 0, 5: 0, 6: 0, 7: 1, 8: 1, 9: 3, 10: 4, 11: 6, 12: 9}


def forbidden_triple_count(phi: PartialColoring, palette_size: int) -> int:
    """Number of 3-subsets ``S`` of the palette for which no proper coloring of
    Q_3 with colors ``S`` avoids ``phi``."""
    cube = phi.host
    if getattr(cube, "d", None) != 3:
        raise ValueError("forbidden triples are defined on Q_3")
    if max(phi.colors, default=0) > palette_size:
        raise ValueError("coloring uses colors outside the palette")
    count = 0
    for triple in itertools.combinations(range(1, palette_size + 1), 3):
        rel = {c: k + 1 for k, c in enumerate(triple)}
        local = PartialColoring(cube, 3, tuple(rel.get(c, 0) for c in phi.colors))
        if avoid_exact(cube, local, 3).status is Status.NONE:
            count += 1
    return count


def proper_partial_orbits(max_edges: int, d: int = 3) -> dict[int, list[tuple[int, ...]]]:
    """Orbit representatives of proper partial colorings of Q_d by edge count.

    Colors are taken up to renaming, so a representative is a partition of
    its colored edges into matchings.  Level ``a + 1`` is generated from
    level ``a`` by coloring one more edge.
    """
    cube = build(d)
    adj = cube.adjacent
    levels = {0: [(0,) * cube.n_edges]}
    for a in range(max_edges):
        nxt: dict[tuple[int, ...], None] = {}
        for rep in levels[a]:
            k = max(rep)
            for e in range(cube.n_edges):
                if rep[e]:
                    continue
                near = {rep[j] for j in adj[e]}
                for c in range(1, k + 2):
                    if c in near:
                        continue
                    cs = list(rep)
                    cs[e] = c
                    nxt.setdefault(canonical_tuple(cs, d), None)
        levels[a + 1] = sorted(nxt)
    return levels


@dataclass
class ClaimRow:
    a: int
    bound: int
    observed: int
    instances: int
    mode: str

    @property
    def ok(self) -> bool:
        return self.observed <= self.bound


@dataclass
class ForbiddenCountReport:
    rows: list[ClaimRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def table(self) -> list[dict]:
        return [dict(a=r.a, bound=r.bound, observed=r.observed, instances=r.instances, mode=r.mode, ok=r.ok) for r in self.rows]


def random_proper_partial(cube, a: int, palette: int, rng: random.Random, tries: int = 1000) -> PartialColoring:
    for _ in range(tries):
        edges = rng.sample(range(cube.n_edges), a)
        cs = [0] * cube.n_edges
        ok = True
        for e in edges:
            near = {cs[j] for j in cube.adjacent[e]}
            choices = [c for c in range(1, palette + 1) if c not in near]
            if not choices:
                ok = False
                break
            cs[e] = rng.choice(choices)
        if ok:
            return PartialColoring(cube, palette, tuple(cs))
    raise RuntimeError(f"could not sample a proper coloring of {a} edges with {palette} colors")


def verify_claim_table(sample_budget: int = 10_000, *, seed: int = 0, enumerate_up_to: int = 8) -> ForbiddenCountReport:
    """Largest observed forbidden-triple count per number of colored edges.

    Rows up to ``enumerate_up_to`` are exact over all orbits of proper partial
    colorings; the remaining rows (through 12) are sampled, and omitted when
    ``sample_budget`` is 0.
    """
    cube = build(3)
    levels = proper_partial_orbits(enumerate_up_to)
    rows = []
    for a in range(0, enumerate_up_to + 1):
        worst = 0
        for rep in levels[a]:
            phi = PartialColoring(cube, max(3, max(rep)), rep)
            # unused palette colors never add a forbidden triple: every minimal
            # unavoidable proper configuration of Q_3 already uses three colors
            worst = max(worst, forbidden_triple_count(phi, phi.palette))
        rows.append(ClaimRow(a, CLAIM_BOUNDS[a], worst, len(levels[a]), "enumerated"))
    if sample_budget:
        rng = random.Random(seed)
        for a in range(enumerate_up_to + 1, 13):
            worst = 0
            for _ in range(sample_budget):
                palette = rng.randint(4, 7)
                phi = random_proper_partial(cube, a, palette, rng)
                worst = max(worst, forbidden_triple_count(phi, palette))
            rows.append(ClaimRow(a, CLAIM_BOUNDS[a], worst, sample_budget, "sampled"))
    return ForbiddenCountReport(rows)
