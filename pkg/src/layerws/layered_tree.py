"""The layered working-set tree.

One binary search tree whose nodes carry layer labels 1..t, non-decreasing
along every root-to-leaf path.  Layer j holds exactly 2^(2^j) keys for
j < t; the deepest layer holds the remainder.  Each layer is a forest of
independently balanced red-black layer-subtrees, and an implicit recency
queue threads through each layer via the older/younger/next_layer key
fields stored in the nodes.

A search that finds its key in layer j costs O(2^j) cursor visits: the key
is moved up to layer 1 and the oldest resident of each layer 1..j-1 is
pushed down one layer to restore the size schedule.  Because a key only
reaches layer j after 2^(2^(j-1)) distinct newer accesses, the search cost
is logarithmic in the key's working-set number.  Insertion and deletion
run through every layer and cost O(log n).

The tree can also operate as a band inside a larger tree (``base`` label
offset); labels then run base+1..base+t and the machinery anchors at the
band's subtree root instead of the global root.  The skip-splay
composition stacks such bands.
"""

from __future__ import annotations

from .engine import Engine, Node, RootHeader
from .errors import CapacityError, DuplicateKeyError, MissingKeyError
from . import layer_ops as ops

MAX_LAYERS = 5


def capacity(j: int) -> int:
    """Key capacity of layer j: 4, 16, 256, 65536, 2**32."""
    if not 1 <= j <= MAX_LAYERS:
        raise CapacityError(f"layer index {j} outside 1..{MAX_LAYERS}")
    return 1 << (1 << j)


class LayeredTree:
    """Dictionary over integer keys with the worst-case working-set bound.

    ``node_header`` controls whether the (layer count, deepest size) pair
    is mirrored onto the current root node; plain trees do this, bands
    inside a composition keep the pair detached.
    """

    def __init__(self, engine: Engine | None = None, base: int = 0,
                 node_header: bool | None = None):
        self.engine = engine if engine is not None else Engine()
        self.base = base
        self.node_header = node_header if node_header is not None else (base == 0)
        self.layer_count = 0
        self.last_size = 0
        self.header: RootHeader | None = None
        self.sizes: dict[int, int] = {}
        self.size = 0
        self.last_touched = 0

    def __len__(self):
        return self.size

    def __contains__(self, key):
        node = self.engine.root
        while node is not None:
            if node.key == key:
                return True
            node = node.left if key < node.key else node.right
        return False

    def keys(self) -> list[int]:
        return self.engine.inorder_keys()

    # -- header -------------------------------------------------------------

    def _set_header(self, t: int, last: int, node: Node | None = None):
        self.layer_count = t
        self.last_size = last
        if not self.node_header:
            return
        if t == 0:
            self.header = None
            return
        if self.header is None:
            self.header = RootHeader(t, last)
            target = node if node is not None else self.engine.root
            target.header = self.header
        else:
            self.header.layer_count = t
            self.header.last_size = last

    # -- cursor-paid lookups --------------------------------------------------

    def _goto(self, key: int) -> Node:
        eng = self.engine
        eng.ascend_to_subtree_root(self.base)
        node = eng.descend_to(key)
        assert node is not None, f"key {key} vanished from the tree"
        return node

    def _scan_first_layer(self, youngest: bool) -> Node:
        """Find the queue head/tail of layer 1 by walking its few members."""
        eng = self.engine
        eng.ascend_to_subtree_root(self.base)
        root = eng.node
        lab = self.base + 1
        assert root is not None and root.layer == lab, "layer 1 must hold the root"
        stack = [root]
        walked = 0
        found = None
        while stack:
            n = stack.pop()
            walked += 1
            if (n.younger if youngest else n.older) is None:
                found = n
                break
            c = n.left
            if c is not None and c.layer == lab:
                stack.append(c)
            c = n.right
            if c is not None and c.layer == lab:
                stack.append(c)
        eng.charge(2 * walked)
        assert found is not None, "first layer has no recency head"
        eng.node = found
        return found

    def _extreme_in_layer(self, j: int, youngest: bool) -> Node:
        """Youngest/oldest member of layer j, hopping layer to layer."""
        node = self._scan_first_layer(youngest)
        level = 1
        while level < j:
            key = node.next_layer
            assert key is not None, f"missing next-layer link under layer {level}"
            node = self._goto(key)
            level += 1
            assert node.layer - self.base == level, "next-layer link strayed"
        return node

    def youngest_in_layer(self, j: int) -> int:
        assert 1 <= j and self.sizes.get(j, 0) > 0, f"layer {j} is empty"
        self.engine.begin_access()
        return self._extreme_in_layer(j, youngest=True).key

    def oldest_in_layer(self, j: int) -> int:
        assert 1 <= j and self.sizes.get(j, 0) > 0, f"layer {j} is empty"
        self.engine.begin_access()
        return self._extreme_in_layer(j, youngest=False).key

    # -- implicit queue maintenance -------------------------------------------

    def _queue_remove(self, x: Node, j: int):
        """Unlink ``x`` from layer j's recency queue, repairing neighbours
        and the boundary pointers held one layer up."""
        xo, xy, xn = x.older, x.younger, x.next_layer
        x.older = x.younger = x.key  # sentinel: not a queue member right now
        if xo is None and xy is None:
            if j >= 2 and self.sizes.get(j - 1, 0) > 0:
                self._extreme_in_layer(j - 1, youngest=True).next_layer = None
                self._extreme_in_layer(j - 1, youngest=False).next_layer = None
            return
        if xy is None:
            o = self._goto(xo)
            o.younger = None
            o.next_layer = xn
            if j >= 2:
                self._extreme_in_layer(j - 1, youngest=True).next_layer = xo
            return
        if xo is None:
            y = self._goto(xy)
            y.older = None
            y.next_layer = xn
            if j >= 2:
                self._extreme_in_layer(j - 1, youngest=False).next_layer = xy
            return
        self._goto(xo).younger = xy
        self._goto(xy).older = xo

    # -- inter-layer moves ------------------------------------------------------

    def _move_up(self, x: Node):
        """Move ``x`` one layer up; it becomes the youngest there."""
        j = x.layer - self.base
        assert j >= 2, "layer 1 has nothing above it"
        recv = j - 1
        was_sole = x.older is None and x.younger is None
        self._queue_remove(x, j)

        if self.sizes.get(recv, 0) > 0:
            y = self._extreme_in_layer(recv, youngest=True)
            y_key, x_next = y.key, y.next_layer
        else:
            assert was_sole, "non-trivial layer moving into an empty one"
            y_key, x_next = None, None
        above_y_key = above_o_key = None
        if recv >= 2:
            above_y_key = self._extreme_in_layer(recv - 1, youngest=True).key
            if y_key is None:
                above_o_key = self._extreme_in_layer(recv - 1, youngest=False).key

        ops.split(self.engine, x)
        for c in (x.left, x.right):
            if c is not None and c.layer == x.layer and c.red:
                c.red = False  # covers the split-was-a-no-op path
        x.layer -= 1
        p = x.parent
        if p is not None and p.layer == x.layer:
            ops.insert_fixup(self.engine, x)
        else:
            x.red = False

        x.older = y_key
        x.younger = None
        x.next_layer = x_next
        if y_key is not None:
            y2 = self._goto(y_key)
            y2.younger = x.key
            if y2.older is not None:
                y2.next_layer = None
        if above_y_key is not None:
            self._goto(above_y_key).next_layer = x.key
        if above_o_key is not None:
            self._goto(above_o_key).next_layer = x.key
        self.sizes[j] -= 1
        self.sizes[recv] = self.sizes.get(recv, 0) + 1

    def _sink_to_boundary(self, x: Node):
        """Turn ``x`` into a boundary leaf of its layer-subtree, relabel it
        one layer deeper, and repair the vacated black height.

        With two within-layer children the successor is spliced into
        ``x``'s place and ``x`` re-hangs below its predecessor, adopting
        the two deeper-layer subtrees whose keys bracket it.  One-child and
        leaf cases degenerate accordingly.
        """
        eng = self.engine
        lab = x.layer
        left, right = x.left, x.right
        l_in = left is not None and left.layer == lab
        r_in = right is not None and right.layer == lab

        if not l_in and not r_in:
            parent = x.parent
            if parent is None or parent.layer != lab:
                x.layer += 1  # lone layer-subtree: relabel in place
                return
            right_side = parent.right is x
            was_black = not x.red
            x.layer += 1
            eng.charge(1)
            if was_black:
                ops.delete_fixup(eng, parent, right_side)
            return

        if r_in:
            s = right
            eng.arrive(s)
            while s.left is not None and s.left.layer == lab:
                s = s.left
                eng.charge(1)
            hs = s.left
            s_was_black = not s.red
            if s.parent is x:
                fix_parent, fix_right = s, True
            else:
                fix_parent, fix_right = s.parent, False
                s.parent.left = s.right
                if s.right is not None:
                    s.right.parent = s.parent
                s.right = x.right
                x.right.parent = s
            eng.replace_subtree(x, s)
            s.red = x.red
            eng.charge(3)
            if l_in:
                s.left = left
                left.parent = s
                p = left
                eng.arrive(p)
                while p.right is not None and p.right.layer == lab:
                    p = p.right
                    eng.charge(1)
                hp = p.right
                p.right = x
                x.parent = p
                x.left = hp
                if hp is not None:
                    hp.parent = x
            else:
                s.left = x
                x.parent = s
            x.right = hs
            if hs is not None:
                hs.parent = x
            x.layer += 1
            eng.charge(2)
            if s_was_black:
                ops.delete_fixup(eng, fix_parent, fix_right)
            return

        p = left
        eng.arrive(p)
        while p.right is not None and p.right.layer == lab:
            p = p.right
            eng.charge(1)
        hp = p.right
        p_was_black = not p.red
        if p.parent is x:
            fix_parent, fix_right = p, False
        else:
            fix_parent, fix_right = p.parent, True
            p.parent.right = p.left
            if p.left is not None:
                p.left.parent = p.parent
            p.left = x.left
            x.left.parent = p
        eng.replace_subtree(x, p)
        p.red = x.red
        eng.charge(3)
        p.right = x
        x.parent = p
        x.left = hp
        if hp is not None:
            hp.parent = x
        x.layer += 1
        eng.charge(2)
        if p_was_black:
            ops.delete_fixup(eng, fix_parent, fix_right)

    def _move_down(self, x: Node):
        """Move ``x`` one layer down; it becomes the youngest there."""
        j = x.layer - self.base
        recv = j + 1
        if recv > MAX_LAYERS + 1:
            raise CapacityError(f"no layer below {MAX_LAYERS}")
        self._queue_remove(x, j)

        if self.sizes.get(recv, 0) > 0:
            y = self._extreme_in_layer(recv, youngest=True)
            y_key, x_next = y.key, y.next_layer
        else:
            y_key, x_next = None, None
        jy_key = jo_key = None
        if self.sizes[j] > 1:  # layer j keeps members once x is gone
            jy_key = self._extreme_in_layer(j, youngest=True).key
            if y_key is None:
                jo_key = self._extreme_in_layer(j, youngest=False).key

        self._sink_to_boundary(x)
        ops.join_at(self.engine, x)

        x.older = y_key
        x.younger = None
        x.next_layer = x_next
        if y_key is not None:
            y2 = self._goto(y_key)
            y2.younger = x.key
            if y2.older is not None:
                y2.next_layer = None
        if jy_key is not None:
            self._goto(jy_key).next_layer = x.key
        if jo_key is not None:
            self._goto(jo_key).next_layer = x.key
        self.sizes[j] -= 1
        self.sizes[recv] = self.sizes.get(recv, 0) + 1

    def move_up(self, key: int):
        self.engine.begin_access()
        node = self.engine.descend_to(key)
        assert node is not None
        self._move_up(node)

    def move_down(self, key: int):
        self.engine.begin_access()
        node = self.engine.descend_to(key)
        assert node is not None
        self._move_down(node)

    # -- recency re-front for a hit already in layer 1 ---------------------------

    def _refront(self, x: Node):
        y0 = self._scan_first_layer(youngest=True)
        if y0 is x:
            return
        y0_next = y0.next_layer
        self._queue_remove(x, 1)
        x.older = y0.key
        x.younger = None
        x.next_layer = y0_next
        y0.younger = x.key
        if y0.older is not None:
            y0.next_layer = None

    # -- restoring the size schedule ----------------------------------------------

    def _push_down(self, deficit: int):
        for m in range(1, deficit):
            victim = self._extreme_in_layer(m, youngest=False)
            self._move_down(victim)

    # -- public operations -----------------------------------------------------------

    def search(self, key: int, fresh: bool = True) -> int | None:
        """Look up ``key``; on a hit, returns the layer it was found in and
        promotes it to the recency front.  A miss changes nothing."""
        eng = self.engine
        if fresh:
            eng.begin_access()
        else:
            eng.ascend_to_subtree_root(self.base)
        node = eng.descend_to(key)
        if node is None:
            self.last_touched = 0
            return None
        j = node.layer - self.base
        self.last_touched = j
        if j == 1:
            self._refront(node)
        else:
            for _ in range(j - 1):
                self._move_up(node)
            self._push_down(j)
        return j

    def insert(self, key: int):
        """Add ``key``; it enters as the youngest of layer 1 and the size
        schedule is restored by pushing the oldest keys down."""
        eng = self.engine
        eng.begin_access()
        if eng.root is None:
            node = Node(key, self.base + 1, red=False)
            eng.root = node
            eng.node = node
            eng.charge(1)
            self._set_header(1, 1, node)
            self.sizes = {1: 1}
            self.size = 1
            self.last_touched = 1
            return
        if eng.descend_to(key) is not None:
            raise DuplicateKeyError(key)
        t_old = self.layer_count
        if self.last_size == capacity(t_old):
            if t_old >= MAX_LAYERS:
                raise CapacityError(f"tree is full at {MAX_LAYERS} layers")
            self._set_header(t_old + 1, 1)
            self.sizes[t_old + 1] = 0
            deficit = t_old + 1
        else:
            self._set_header(t_old, self.last_size + 1)
            deficit = t_old
        temp = self.layer_count + 1
        self.last_touched = temp

        parent = eng.node
        node = Node(key, self.base + temp, red=False)
        if key < parent.key:
            parent.left = node
        else:
            parent.right = node
        node.parent = parent
        eng.arrive(node)
        self.sizes[temp] = 1
        self.size += 1
        self._extreme_in_layer(t_old, youngest=True).next_layer = key
        self._extreme_in_layer(t_old, youngest=False).next_layer = key

        eng.ascend_to_subtree_root(self.base)
        eng.descend_to(key)
        for _ in range(temp - 1):
            self._move_up(node)
        self._push_down(deficit)
        assert self.sizes[temp] == 0
        del self.sizes[temp]

    def delete(self, key: int):
        """Remove ``key`` by sinking it below the deepest layer, unlinking
        the leaf, then refilling each drained layer with the youngest of
        the layer below."""
        eng = self.engine
        eng.begin_access()
        node = eng.descend_to(key)
        if node is None:
            raise MissingKeyError(key)
        t = self.layer_count
        j = node.layer - self.base
        temp = t + 1
        self.last_touched = temp
        self.sizes[temp] = 0
        for _ in range(t - j + 1):
            self._move_down(node)
        assert node.left is None and node.right is None, "evictee must be a leaf"
        eng.replace_subtree(node, None)
        eng.charge(1)
        eng.node = node.parent
        self.size -= 1
        self.sizes[temp] -= 1
        del self.sizes[temp]
        if self.size == 0:
            self._set_header(0, 0)
            self.sizes = {}
            eng.node = None
            return
        if self.sizes.get(t, 0) > 0:
            self._extreme_in_layer(t, youngest=True).next_layer = None
            self._extreme_in_layer(t, youngest=False).next_layer = None
        for m in range(j, t):
            victim = self._extreme_in_layer(m + 1, youngest=True)
            self._move_up(victim)
        if self.last_size > 1:
            self._set_header(t, self.last_size - 1)
        else:
            self._set_header(t - 1, self.sizes.get(t - 1, 0))

    # -- non-model inspection -----------------------------------------------------

    def layer_snapshot(self) -> dict[int, list[int]]:
        """Recency order (youngest first) of every layer; bypasses the cursor."""
        root = self.engine.root
        if self.base != 0:
            raise ValueError("snapshot of a band needs its subtree root; use band_snapshot")
        return band_snapshot(root, self.base, self.layer_count or MAX_LAYERS + 1)


def band_snapshot(root: Node | None, base: int, t: int) -> dict[int, list[int]]:
    """Recency order (youngest first) per layer for the band rooted at ``root``."""
    members: dict[int, dict[int, Node]] = {}
    if root is not None:
        stack = [root]
        while stack:
            n = stack.pop()
            rel = n.layer - base
            if rel > t:
                continue  # deeper band hanging below: not ours
            members.setdefault(rel, {})[n.key] = n
            if n.left is not None:
                stack.append(n.left)
            if n.right is not None:
                stack.append(n.right)
    out: dict[int, list[int]] = {}
    for rel, nodes in sorted(members.items()):
        heads = [n for n in nodes.values() if n.younger is None]
        if len(heads) != 1:
            raise AssertionError(f"layer {rel}: {len(heads)} queue heads")
        order = []
        n = heads[0]
        seen = set()
        while n is not None:
            if n.key in seen:
                raise AssertionError(f"layer {rel}: recency cycle at {n.key}")
            seen.add(n.key)
            order.append(n.key)
            n = nodes.get(n.older) if n.older is not None else None
        if len(order) != len(nodes):
            raise AssertionError(f"layer {rel}: queue reaches {len(order)} of {len(nodes)}")
        out[rel] = order
    return out
