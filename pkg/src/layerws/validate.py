"""Structural validators.

Every invariant the structures promise is checkable here by plain
traversal (no cursor accounting): search-tree order, label monotonicity,
the layer size schedule, per-layer-subtree red-black validity, recency
queue consistency, header agreement, and the per-node depth bound.  Each
failure is reported with a witness (a key or a layer index) so corruption
can be pinpointed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import Node
from .layered_tree import LayeredTree, capacity, MAX_LAYERS

# depth(x) <= sum_{k=1..layer(x)} (2*2^k + 2), depth in edges from the band root
DEPTH_LIMITS = [0]
for _k in range(1, MAX_LAYERS + 2):
    DEPTH_LIMITS.append(DEPTH_LIMITS[-1] + 2 * (1 << _k) + 2)


@dataclass
class Violation:
    kind: str
    witness: object
    message: str

    def __str__(self):
        return f"{self.kind}[{self.witness}]: {self.message}"


def _check_subtree_rb(root: Node, lab: int, out: list[Violation]) -> int:
    """Red-black validity of one layer-subtree; returns its black height."""
    if root.red:
        out.append(Violation("rb-root-red", root.key, "layer-subtree root is red"))

    def walk(n) -> int:
        if n is None or n.layer != lab:
            return 0
        lbh = walk(n.left)
        rbh = walk(n.right)
        if lbh != rbh:
            out.append(Violation(
                "rb-black-height", n.key,
                f"black heights {lbh} vs {rbh} below key {n.key}"))
        if n.red:
            for c in (n.left, n.right):
                if c is not None and c.layer == lab and c.red:
                    out.append(Violation(
                        "rb-red-red", n.key, f"red {n.key} has red child {c.key}"))
            return lbh
        return lbh + 1

    return walk(root)


def validate_band(root: Node | None, base: int, t: int, last_size: int,
                  expect_node_header: bool = False,
                  rb_upto: int | None = None,
                  complete: bool = False,
                  check_queues: bool = True) -> list[Violation]:
    """Validate the band of labels base+1..base+t rooted at ``root``.

    ``rb_upto`` limits the red-black and queue checks to layers <= that
    index (operations only touch a prefix of the layers); None checks all.
    ``complete`` means no deeper band may hang below this one (a plain
    standalone tree); inside a composition deeper bands are fine and are
    validated separately.
    """
    out: list[Violation] = []
    if root is None:
        if t != 0:
            out.append(Violation("header", "t", f"empty tree but layer count {t}"))
        return out
    if t < 1 or t > MAX_LAYERS:
        out.append(Violation("header", "t", f"layer count {t} outside 1..{MAX_LAYERS}"))
        return out
    if rb_upto is None:
        rb_upto = t

    if root.layer != base + 1:
        out.append(Violation("layer-shape", root.key,
                             f"band root has label {root.layer}, wanted {base + 1}"))

    members: dict[int, dict[int, Node]] = {m: {} for m in range(1, t + 1)}
    subtree_roots: dict[int, list[Node]] = {m: [] for m in range(1, t + 1)}
    limits = [0] + [DEPTH_LIMITS[min(m, MAX_LAYERS + 1)] for m in range(1, t + 1)]
    inf = float("inf")
    # pre-order walk carrying (node, depth, key interval); prune below the band
    stack = [(root, 0, -inf, inf)]
    while stack:
        n, depth, lo, hi = stack.pop()
        rel = n.layer - base
        if rel > t:
            if complete:
                out.append(Violation("layer-size", n.layer,
                                     f"key {n.key} labeled {n.layer} beyond deepest layer {t}"))
            continue  # deeper band: validated by its own tree
        if rel < 1:
            out.append(Violation("layer-monotone", n.key,
                                 f"label {n.layer} above the band base {base}"))
            continue
        key = n.key
        if not lo < key < hi:
            out.append(Violation("bst-order", key,
                                 f"key {key} outside interval ({lo}, {hi})"))
        p = n.parent
        if p is not None and p.layer > n.layer:
            out.append(Violation("layer-monotone", key,
                                 f"label {n.layer} under parent label {p.layer}"))
        if depth > limits[rel]:
            out.append(Violation("depth-bound", key,
                                 f"depth {depth} exceeds limit for layer {rel}"))
        if n.header is not None and n is not root:
            out.append(Violation("header", key, "header fields away from the root"))
        members[rel][key] = n
        if p is None or p.layer != n.layer:
            subtree_roots[rel].append(n)
        if n.left is not None:
            stack.append((n.left, depth + 1, lo, key))
        if n.right is not None:
            stack.append((n.right, depth + 1, key, hi))

    # sizes
    for m in range(1, t + 1):
        got = len(members[m])
        if m < t and got != capacity(m):
            out.append(Violation("layer-size", m,
                                 f"layer {m} holds {got}, schedule wants {capacity(m)}"))
        if m == t and not 1 <= got <= capacity(m):
            out.append(Violation("layer-size", m,
                                 f"deepest layer holds {got}, allowed 1..{capacity(m)}"))
        if m == t and got != last_size:
            out.append(Violation("header", "last_size",
                                 f"deepest layer holds {got}, header says {last_size}"))

    if len(subtree_roots[1]) != 1 or (subtree_roots[1] and subtree_roots[1][0] is not root):
        out.append(Violation("layer-shape", 1, "first layer is not a single subtree at the root"))

    # header residency
    if expect_node_header:
        if root.header is None:
            out.append(Violation("header", root.key, "root carries no header fields"))
        else:
            if root.header.layer_count != t:
                out.append(Violation("header", "t",
                                     f"root header says {root.header.layer_count} layers, tree has {t}"))
            if root.header.last_size != last_size:
                out.append(Violation("header", "last_size",
                                     f"root header says {root.header.last_size}, tracker says {last_size}"))

    # red-black validity, scoped
    for m in range(1, min(rb_upto, t) + 1):
        for sub in subtree_roots[m]:
            _check_subtree_rb(sub, base + m, out)

    # recency queues, scoped
    if check_queues:
        for m in range(1, min(rb_upto, t) + 1):
            _check_queue(members, m, t, out)
    return out


def _check_queue(members: dict[int, dict[int, Node]], m: int, t: int,
                 out: list[Violation]):
    nodes = members[m]
    if not nodes:
        return
    heads = [n for n in nodes.values() if n.older is None]
    tails = [n for n in nodes.values() if n.younger is None]
    if len(heads) != 1 or len(tails) != 1:
        out.append(Violation("queue-chain", m,
                             f"layer {m} has {len(heads)} oldest and {len(tails)} youngest"))
        return
    oldest, youngest = heads[0], tails[0]
    # walk oldest -> youngest
    seen = []
    n = oldest
    while n is not None:
        seen.append(n.key)
        if len(seen) > len(nodes):
            out.append(Violation("queue-chain", m, f"layer {m} queue cycles"))
            return
        nxt = n.younger
        if nxt is None:
            break
        peer = nodes.get(nxt)
        if peer is None:
            out.append(Violation("queue-chain", m,
                                 f"younger link of {n.key} leaves the layer ({nxt})"))
            return
        if peer.older != n.key:
            out.append(Violation("queue-chain", m,
                                 f"older/younger disagree between {n.key} and {peer.key}"))
            return
        n = peer
    if len(seen) != len(nodes):
        out.append(Violation("queue-chain", m,
                             f"layer {m} queue covers {len(seen)} of {len(nodes)}"))
        return
    if n is not youngest:
        out.append(Violation("queue-chain", m, f"layer {m} queue tail mismatch"))
        return
    below = members.get(m + 1, {}) if m < t else {}
    if below:
        b_old = [x for x in below.values() if x.older is None]
        b_young = [x for x in below.values() if x.younger is None]
        want_old = b_old[0].key if len(b_old) == 1 else None
        want_young = b_young[0].key if len(b_young) == 1 else None
        if oldest.next_layer != want_old:
            out.append(Violation("queue-nextlayer", oldest.key,
                                 f"oldest of layer {m} names {oldest.next_layer}, below's oldest is {want_old}"))
        if youngest.next_layer != want_young:
            out.append(Violation("queue-nextlayer", youngest.key,
                                 f"youngest of layer {m} names {youngest.next_layer}, below's youngest is {want_young}"))
    else:
        if oldest.next_layer is not None:
            out.append(Violation("queue-nextlayer", oldest.key,
                                 f"oldest of layer {m} names {oldest.next_layer} but nothing is below"))
        if youngest.next_layer is not None:
            out.append(Violation("queue-nextlayer", youngest.key,
                                 f"youngest of layer {m} names {youngest.next_layer} but nothing is below"))
    for n in nodes.values():
        if n is oldest or n is youngest:
            continue
        if n.next_layer is not None:
            out.append(Violation("queue-nextlayer", n.key,
                                 f"interior member {n.key} carries a next-layer key"))


def validate_tree(tree: LayeredTree, rb_upto: int | None = None,
                  check_queues: bool = True) -> list[Violation]:
    """Full invariant sweep of one layered tree."""
    return validate_band(
        tree.engine.root, tree.base, tree.layer_count, tree.last_size,
        expect_node_header=tree.node_header,
        rb_upto=rb_upto,
        complete=True,
        check_queues=check_queues,
    )
