"""Feynman graphs from half-edges: vertex partitions, leaves, perfect
matchings; brute-force automorphism counting, canonical labeling, and
exhaustive enumeration of isomorphism classes.

Half-edges are integers 0..n-1.  A permutation is admissible when it maps
vertex blocks to vertex blocks and preserves half-edge types; automorphisms
additionally fix the leaf set and the matching.  All searches are exhaustive
over the block-permutation group and fail loudly beyond the configured
half-edge bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, permutations
from math import factorial

from .errors import TooLarge

HALF_EDGE_BOUND = 16

FIELD = "field"
LAGRANGE = "lagrange"
GHOST = "ghost"
ANTIGHOST = "antighost"


class Graph:
    __slots__ = ("n", "vertices", "leaves", "edges", "types")

    def __init__(self, n, vertices, edges, leaves=(), types=None):
        self.n = int(n)
        self.vertices = tuple(
            sorted((tuple(sorted(b)) for b in vertices), key=lambda b: (len(b), b))
        )
        self.leaves = frozenset(int(h) for h in leaves)
        self.edges = frozenset(tuple(sorted((int(a), int(b)))) for a, b in edges)
        self.types = tuple(types) if types is not None else None
        self._validate()

    def _validate(self):
        seen = []
        for b in self.vertices:
            if not b:
                raise ValueError("empty vertex block")
            seen.extend(b)
        if sorted(seen) != list(range(self.n)):
            raise ValueError("vertex blocks must partition the half-edge set")
        matched = [h for e in self.edges for h in e]
        if len(set(matched)) != len(matched):
            raise ValueError("matching pairs must be disjoint")
        expected = set(range(self.n)) - self.leaves
        if set(matched) != expected:
            raise ValueError("matching must cover exactly the non-leaf half-edges")
        if self.types is not None:
            if len(self.types) != self.n:
                raise ValueError("one type tag per half-edge required")
            for a, b in self.edges:
                ta, tb = self.types[a], self.types[b]
                pair = frozenset((ta, tb))
                if GHOST in pair or ANTIGHOST in pair:
                    if pair != frozenset((GHOST, ANTIGHOST)):
                        raise ValueError("ghost half-edges pair only with antighosts")
                if pair == frozenset((LAGRANGE,)):
                    raise ValueError("lagrange half-edges never pair together")

    # -- basic counts --------------------------------------------------------

    @property
    def excess(self) -> int:
        return len(self.edges) - len(self.vertices)

    def component_count(self) -> int:
        if not self.vertices:
            return 0
        parent = list(range(len(self.vertices)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        where = {}
        for vi, b in enumerate(self.vertices):
            for h in b:
                where[h] = vi
        for a, b in self.edges:
            ra, rb = find(where[a]), find(where[b])
            if ra != rb:
                parent[ra] = rb
        return len({find(i) for i in range(len(self.vertices))})

    @property
    def loop_count(self) -> int:
        return self.excess + self.component_count()

    def is_connected(self) -> bool:
        return self.component_count() <= 1

    def vertex_of(self, h: int) -> int:
        for vi, b in enumerate(self.vertices):
            if h in b:
                return vi
        raise KeyError(h)

    def has_tadpole(self) -> bool:
        for a, b in self.edges:
            for block in self.vertices:
                if a in block and b in block:
                    return True
        return False

    def type_of(self, h: int) -> str:
        return self.types[h] if self.types is not None else FIELD

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.vertices == other.vertices
            and self.leaves == other.leaves
            and self.edges == other.edges
            and self.types == other.types
        )

    def __repr__(self):
        return (
            f"Graph(n={self.n}, vertices={self.vertices}, edges={sorted(self.edges)}, "
            f"leaves={sorted(self.leaves)}, types={self.types})"
        )

    # -- JSON exchange format -------------------------------------------------

    def to_json(self) -> dict:
        out = {
            "half_edges": self.n,
            "vertices": [list(b) for b in self.vertices],
            "leaves": sorted(self.leaves),
            "edges": sorted([list(e) for e in self.edges]),
        }
        if self.types is not None:
            out["types"] = {str(h): t for h, t in enumerate(self.types)}
        return out

    @staticmethod
    def from_json(obj: dict) -> "Graph":
        types = None
        if obj.get("types"):
            n = int(obj["half_edges"])
            types = [FIELD] * n
            for k, v in obj["types"].items():
                types[int(k)] = v
        return Graph(
            obj["half_edges"],
            obj["vertices"],
            obj["edges"],
            obj.get("leaves", ()),
            types,
        )


@dataclass(frozen=True)
class GraphClass:
    canonical_key: bytes
    representative: Graph
    aut_order: int
    excess: int
    loop_count: int


# ---------------------------------------------------------------------------
# block-permutation group
# ---------------------------------------------------------------------------


def _block_signature(block, types):
    tags = tuple(sorted(types[h] for h in block)) if types else (FIELD,) * len(block)
    return (len(block), tags)


def _stabilizer_order(vertices, types) -> int:
    groups = {}
    for b in vertices:
        groups.setdefault(_block_signature(b, types), []).append(b)
    order = 1
    for blocks in groups.values():
        order *= factorial(len(blocks))
        for b in blocks:
            counts = {}
            for h in b:
                t = types[h] if types else FIELD
                counts[t] = counts.get(t, 0) + 1
            for c in counts.values():
                order *= factorial(c)
    return order


def _iter_stabilizer(vertices, types):
    """Yield every half-edge permutation mapping vertex blocks to blocks of
    equal signature and preserving half-edge types.  Returned as tuples p with
    p[h] = image of h."""
    n = sum(len(b) for b in vertices)
    groups = {}
    for b in vertices:
        groups.setdefault(_block_signature(b, types), []).append(b)
    sigs = sorted(groups)

    def members_by_type(block):
        out = {}
        for h in sorted(block):
            out.setdefault(types[h] if types else FIELD, []).append(h)
        return out

    group_data = []
    for sig in sigs:
        blocks = groups[sig]
        group_data.append((blocks, [members_by_type(b) for b in blocks]))

    def recurse_groups(gi, perm):
        if gi == len(group_data):
            yield tuple(perm)
            return
        blocks, _ = group_data[gi]
        for sigma in permutations(range(len(blocks))):
            yield from recurse_blocks(gi, sigma, 0, perm)

    def recurse_blocks(gi, sigma, bi, perm):
        blocks, typed_members = group_data[gi]
        if bi == len(blocks):
            yield from recurse_groups(gi + 1, perm)
            return
        src = typed_members[bi]
        dst = typed_members[sigma[bi]]
        # product over types of bijections src[t] -> dst[t]
        type_keys = sorted(src)

        def assign(ti, perm):
            if ti == len(type_keys):
                yield from recurse_blocks(gi, sigma, bi + 1, perm)
                return
            t = type_keys[ti]
            ss, dd = src[t], dst[t]
            for target in permutations(dd):
                for h, img in zip(ss, target):
                    perm[h] = img
                yield from assign(ti + 1, perm)

        yield from assign(0, perm)

    yield from recurse_groups(0, [0] * n)


def _apply_state(perm, leaves, edges):
    new_leaves = frozenset(perm[h] for h in leaves)
    new_edges = frozenset(tuple(sorted((perm[a], perm[b]))) for a, b in edges)
    return new_leaves, new_edges


def _encode_state(header: bytes, leaves, edges) -> bytes:
    body = repr((sorted(leaves), sorted(edges))).encode("ascii")
    return header + b"|" + body


def _header(vertices, types) -> bytes:
    sigs = sorted(_block_signature(b, types) for b in vertices)
    return repr(sigs).encode("ascii")


def _standardize(g: Graph):
    """Relabel half-edges so blocks are consecutive, ordered by signature,
    members ordered by type.  Returns (vertices, types, leaves, edges)."""
    order = sorted(
        range(len(g.vertices)),
        key=lambda vi: (_block_signature(g.vertices[vi], g.types), g.vertices[vi]),
    )
    relabel = {}
    new_vertices = []
    new_types = []
    c = 0
    for vi in order:
        block = sorted(g.vertices[vi], key=lambda h: (g.type_of(h), h))
        new_block = []
        for h in block:
            relabel[h] = c
            new_types.append(g.type_of(h))
            new_block.append(c)
            c += 1
        new_vertices.append(tuple(new_block))
    leaves = frozenset(relabel[h] for h in g.leaves)
    edges = frozenset(tuple(sorted((relabel[a], relabel[b]))) for a, b in g.edges)
    types = tuple(new_types) if g.types is not None else None
    return tuple(new_vertices), types, leaves, edges


def aut_order(g: Graph, bound: int = HALF_EDGE_BOUND) -> int:
    """Order of the subgroup of half-edge permutations preserving vertices,
    edges, leaves, and types, by exhaustive search over the block group."""
    if g.n > bound:
        raise TooLarge(f"{g.n} half-edges exceeds the brute-force bound {bound}")
    if g.n == 0:
        return 1
    count = 0
    for perm in _iter_stabilizer(g.vertices, g.types):
        lv, ed = _apply_state(perm, g.leaves, g.edges)
        if lv == g.leaves and ed == g.edges:
            count += 1
    return count


def canonical_key(g: Graph, bound: int = HALF_EDGE_BOUND) -> bytes:
    """Minimal byte encoding over all admissible relabelings; equal keys iff
    isomorphic.  Stable across runs."""
    if g.n > bound:
        raise TooLarge(f"{g.n} half-edges exceeds the brute-force bound {bound}")
    if g.n == 0:
        return b""
    vertices, types, leaves, edges = _standardize(g)
    header = _header(vertices, types)
    best = None
    for perm in _iter_stabilizer(vertices, types):
        lv, ed = _apply_state(perm, leaves, edges)
        enc = _encode_state(header, lv, ed)
        if best is None or enc < best:
            best = enc
    return best


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TypeSystem:
    """Vertex kinds (multisets of half-edge type tags) and admissible edge
    type pairs for decorated-graph enumeration."""

    vertex_kinds: tuple
    allowed_pairs: frozenset
    leaf_types: frozenset = frozenset((FIELD,))

    @staticmethod
    def untyped(degrees) -> "TypeSystem":
        return TypeSystem(
            vertex_kinds=tuple((FIELD,) * d for d in sorted(degrees)),
            allowed_pairs=frozenset((frozenset((FIELD,)),)),
        )


def _pair_ok(ta, tb, allowed) -> bool:
    return frozenset((ta, tb)) in allowed


def _matchings(slots, types, allowed, block_of, allow_tadpoles):
    """All perfect matchings of `slots` with admissible type pairs, pairing
    the smallest unmatched slot first."""
    if not slots:
        yield frozenset()
        return
    slots = sorted(slots)
    first = slots[0]
    rest = slots[1:]
    for i, partner in enumerate(rest):
        if not _pair_ok(types[first], types[partner], allowed):
            continue
        if not allow_tadpoles and block_of[first] == block_of[partner]:
            continue
        for sub in _matchings(rest[:i] + rest[i + 1 :], types, allowed, block_of, allow_tadpoles):
            yield sub | {(first, partner)}


def _matchings_rev(slots, types, allowed, block_of, allow_tadpoles):
    """Independent matching generator: pairs the largest slot first and walks
    candidate partners in descending order."""
    if not slots:
        yield frozenset()
        return
    slots = sorted(slots, reverse=True)
    first = slots[0]
    rest = slots[1:]
    for i, partner in enumerate(rest):
        if not _pair_ok(types[first], types[partner], allowed):
            continue
        if not allow_tadpoles and block_of[first] == block_of[partner]:
            continue
        for sub in _matchings_rev(rest[:i] + rest[i + 1 :], types, allowed, block_of, allow_tadpoles):
            yield sub | {tuple(sorted((first, partner)))}


def enumerate_graphs(
    max_excess: int,
    degrees=None,
    allow_leaves: bool = False,
    max_leaves: int = 0,
    allow_tadpoles: bool = True,
    typed: TypeSystem | None = None,
    strategy: str = "orbit",
    half_edge_bound: int = HALF_EDGE_BOUND,
):
    """Complete, duplicate-free list of isomorphism classes of nonempty graphs
    with excess |E|-|V| <= max_excess, vertex kinds from `degrees` (untyped)
    or `typed`, leaves and tadpoles filtered per flags.

    strategy="orbit" sweeps block-group orbits; strategy="keys" matches by
    canonical key from an independently ordered backtracking generation.
    """
    if typed is None:
        if not degrees:
            raise ValueError("either degrees or a TypeSystem is required")
        ts = TypeSystem.untyped(degrees)
    else:
        ts = typed
    if not allow_leaves:
        max_leaves = 0

    classes = []
    seen_keys = set()
    kinds = tuple(tuple(sorted(k)) for k in ts.vertex_kinds)
    if kinds and min(len(k) for k in kinds) < 3:
        raise ValueError("vertex valences must be at least 3")
    max_v = 2 * max(max_excess, 0) + max_leaves
    for v_count in range(1, max_v + 1):
        for kind_multiset in combinations_with_replacement(sorted(kinds), v_count):
            h_total = sum(len(k) for k in kind_multiset)
            if h_total > half_edge_bound:
                continue
            vertices = []
            types = []
            c = 0
            for kind in sorted(kind_multiset, key=lambda k: (len(k), k)):
                vertices.append(tuple(range(c, c + len(kind))))
                types.extend(kind)
                c += len(kind)
            vertices = tuple(vertices)
            types = tuple(types)
            block_of = {}
            for vi, b in enumerate(vertices):
                for h in b:
                    block_of[h] = vi
            leaf_candidates = [
                h for h in range(h_total) if types[h] in ts.leaf_types
            ]
            for n_leaves in range(0, min(max_leaves, h_total) + 1):
                if (h_total - n_leaves) % 2:
                    continue
                excess = (h_total - n_leaves) // 2 - v_count
                if excess > max_excess:
                    continue
                gen = _matchings if strategy == "orbit" else _matchings_rev
                states = set()
                for leafset in combinations(leaf_candidates, n_leaves):
                    leaves = frozenset(leafset)
                    rest = [h for h in range(h_total) if h not in leaves]
                    for m in gen(rest, types, ts.allowed_pairs, block_of, allow_tadpoles):
                        states.add((leaves, m))
                if strategy == "orbit":
                    _dedup_orbit(vertices, types, states, classes, seen_keys)
                elif strategy == "keys":
                    _dedup_keys(vertices, types, states, classes, seen_keys, half_edge_bound)
                else:
                    raise ValueError(f"unknown strategy {strategy!r}")
    classes.sort(key=lambda c: (c.excess, c.canonical_key))
    return classes


def _make_graph(vertices, types, leaves, edges):
    n = sum(len(b) for b in vertices)
    any_typed = any(t != FIELD for t in types)
    return Graph(n, vertices, edges, leaves, types if any_typed else None)


def _dedup_orbit(vertices, types, states, classes, seen_keys):
    header = _header(vertices, types)
    group = list(_iter_stabilizer(vertices, types))
    remaining = set(states)
    while remaining:
        state = min(remaining, key=lambda s: _encode_state(header, *s))
        orbit = set()
        best = None
        for perm in group:
            img = _apply_state(perm, state[0], state[1])
            orbit.add(img)
            enc = _encode_state(header, *img)
            if best is None or enc < best:
                best = enc
        if len(group) % len(orbit):
            raise AssertionError("orbit size must divide the group order")
        aut = len(group) // len(orbit)
        remaining -= orbit
        if best in seen_keys:
            continue
        seen_keys.add(best)
        g = _make_graph(vertices, types, state[0], state[1])
        classes.append(
            GraphClass(
                canonical_key=best,
                representative=g,
                aut_order=aut,
                excess=g.excess,
                loop_count=g.loop_count,
            )
        )


def _dedup_keys(vertices, types, states, classes, seen_keys, bound):
    """Alternative dedup: canonical keys and automorphism orders are computed
    by the standalone routines (relabel-and-minimize, direct counting); the
    block group is used only to skip already-covered labeled states."""
    group = None
    covered = set()
    for leaves, edges in sorted(states, key=lambda s: repr((sorted(s[0]), sorted(s[1])))):
        if (leaves, edges) in covered:
            continue
        g = _make_graph(vertices, types, leaves, edges)
        key = canonical_key(g, bound)
        if group is None:
            group = list(_iter_stabilizer(vertices, types))
        for perm in group:
            covered.add(_apply_state(perm, leaves, edges))
        if key in seen_keys:
            continue
        seen_keys.add(key)
        classes.append(
            GraphClass(
                canonical_key=key,
                representative=g,
                aut_order=aut_order(g, bound),
                excess=g.excess,
                loop_count=g.loop_count,
            )
        )
