"""Node storage and the single-cursor access machinery.

Every structure in this package manipulates its tree through one Engine:
a pool of linked nodes, one cursor that moves only along parent/left/right
links, and a monotone counter of node arrivals.  The counter is the cost
model: an operation's cost is the number of nodes the cursor reached while
performing it, including every walk back toward the root.  Entering the
tree at the root costs one arrival.

Nodes carry, besides the three links and the key: one color bit, a layer
label, and three key-valued recency fields (older/younger/next_layer).
The (layer count, deepest-layer size) header lives on the current root
node only and migrates when a rotation or splice changes the root.
"""

from __future__ import annotations

from typing import Optional


class RootHeader:
    """Layer count and deepest-layer size, resident on the root node."""

    __slots__ = ("layer_count", "last_size")

    def __init__(self, layer_count: int, last_size: int):
        self.layer_count = layer_count
        self.last_size = last_size

    def __repr__(self):
        return f"RootHeader(t={self.layer_count}, last={self.last_size})"


class Node:
    __slots__ = (
        "key", "parent", "left", "right",
        "red", "layer",
        "older", "younger", "next_layer",
        "header",
    )

    def __init__(self, key: int, layer: int, red: bool = False):
        self.key = key
        self.parent: Optional[Node] = None
        self.left: Optional[Node] = None
        self.right: Optional[Node] = None
        self.red = red
        self.layer = layer
        self.older: Optional[int] = None
        self.younger: Optional[int] = None
        self.next_layer: Optional[int] = None
        self.header: Optional[RootHeader] = None

    def __repr__(self):
        color = "r" if self.red else "b"
        return f"Node({self.key}:{color}/L{self.layer})"


class Engine:
    """One tree, one cursor, one visit counter.

    ``node`` is the cursor position (None when detached, e.g. before the
    first access or after the tree empties).  ``visits`` never decreases.
    """

    __slots__ = ("root", "node", "visits")

    def __init__(self):
        self.root: Optional[Node] = None
        self.node: Optional[Node] = None
        self.visits = 0

    # -- cursor -----------------------------------------------------------

    def begin_access(self):
        """Start a fresh access: pointer handed in at the root (one arrival)."""
        self.visits += 1
        self.node = self.root
        return self.node

    def arrive(self, nxt: Node):
        """Move the cursor to an adjacent node."""
        assert nxt is not None
        self.node = nxt
        self.visits += 1
        return nxt

    def charge(self, n: int):
        """Account pointer-surgery work as node arrivals."""
        self.visits += n

    def ascend_to_subtree_root(self, base: int) -> Node:
        """Walk parent links until the current node heads its label band.

        A band is the label range (base, ...]; the walk stops at the node
        whose parent is absent or carries a label <= base.  For base 0 this
        is the global root.
        """
        node = self.node
        visits = 0
        while True:
            p = node.parent
            if p is None or p.layer <= base:
                break
            node = p
            visits += 1
        self.node = node
        self.visits += visits
        return node

    def descend_to(self, key: int) -> Optional[Node]:
        """Standard BST descent from the cursor; returns the hit or None.

        On a miss the cursor stays on the last node before the absent
        child.  On an empty tree the cursor stays detached.
        """
        node = self.node
        if node is None:
            return None
        visits = 0
        k = node.key
        while k != key:
            nxt = node.left if key < k else node.right
            if nxt is None:
                self.node = node
                self.visits += visits
                return None
            node = nxt
            k = node.key
            visits += 1
        self.node = node
        self.visits += visits
        return node

    def search_from_root(self, key: int) -> Optional[Node]:
        """Walk the cursor to the root (counting), then descend to ``key``."""
        if self.node is None:
            self.begin_access()
        else:
            self.ascend_to_subtree_root(0)
        return self.descend_to(key)

    # -- structure --------------------------------------------------------

    def rotate(self, x: Node, left: bool):
        """Rotate at ``x``; the pivot child must share ``x``'s layer label.

        The header migrates if ``x`` carried it.  Costs three arrivals for
        the constant number of link updates.
        """
        pivot = x.right if left else x.left
        assert pivot is not None, "rotation needs a child on the pivot side"
        assert pivot.layer == x.layer, "rotations must not cross a layer boundary"
        parent = x.parent
        if left:
            x.right = pivot.left
            if pivot.left is not None:
                pivot.left.parent = x
            pivot.left = x
        else:
            x.left = pivot.right
            if pivot.right is not None:
                pivot.right.parent = x
            pivot.right = x
        pivot.parent = parent
        x.parent = pivot
        if parent is None:
            if self.root is x:  # detached fragments rotate without touching the root
                self.root = pivot
        elif parent.left is x:
            parent.left = pivot
        else:
            parent.right = pivot
        if x.header is not None:
            pivot.header = x.header
            x.header = None
        self.visits += 3

    def replace_subtree(self, old: Node, new: Optional[Node]):
        """Point ``old``'s parent at ``new`` instead (no cost: callers charge)."""
        parent = old.parent
        if new is not None:
            new.parent = parent
        if parent is None:
            if self.root is old:
                self.root = new
                if old.header is not None and new is not None:
                    new.header = old.header
                    old.header = None
        elif parent.left is old:
            parent.left = new
        else:
            parent.right = new

    # -- non-model helpers (bypass the cursor; test/report support only) ---

    def inorder_keys(self) -> list[int]:
        out = []
        stack = []
        node = self.root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            out.append(node.key)
            node = node.right
        return out

    def iter_nodes(self):
        stack = []
        node = self.root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield node
            node = node.right
