"""Red-black balance operations scoped to a single layer-subtree.

A layer-subtree is a maximal connected group of nodes sharing one layer
label.  Its boundary positions are absent children and children carrying a
larger label; both count as black leaves.  Every routine here checks the
layer label before moving across a boundary, so deeper subtrees hang off
unharmed while the current layer-subtree is rearranged.

Layer-subtree roots are kept black throughout; this keeps the attach logic
of the inter-layer moves free of color case analysis.
"""

from __future__ import annotations

from .engine import Engine, Node


def in_layer(node, layer: int) -> bool:
    return node is not None and node.layer == layer


def is_subtree_root(x: Node) -> bool:
    p = x.parent
    return p is None or p.layer != x.layer


def subtree_root(x: Node) -> Node:
    while True:
        p = x.parent
        if p is None or p.layer != x.layer:
            return x
        x = p


def black_height(eng: Engine, node, layer: int) -> int:
    """Black count from ``node`` down its within-layer left spine."""
    bh = 0
    steps = 0
    while node is not None and node.layer == layer:
        if not node.red:
            bh += 1
        node = node.left
        steps += 1
    eng.charge(steps)
    return bh


def insert_fixup(eng: Engine, x: Node) -> bool:
    """Repair the layer-subtree after ``x`` arrived as a (boundary) leaf.

    ``x`` is colored red and the usual bottom-up recoloring/rotation pass
    runs, stopping at the layer boundary.  Returns True when the subtree
    root changed from red to black, i.e. the black height grew.
    """
    j = x.layer
    x.red = True
    while True:
        p = x.parent
        if p is None or p.layer != j:
            if x.red:
                x.red = False
                eng.charge(1)
                return True
            return False
        if not p.red:
            return False
        g = p.parent
        assert g is not None and g.layer == j, "red node at a layer-subtree root"
        eng.charge(2)
        uncle = g.right if p is g.left else g.left
        if uncle is not None and uncle.layer == j and uncle.red:
            p.red = False
            uncle.red = False
            g.red = True
            x = g
            continue
        if p is g.left:
            if x is p.right:
                x = p
                eng.rotate(x, left=True)
                p = x.parent
            p.red = False
            g.red = True
            eng.rotate(g, left=False)
        else:
            if x is p.left:
                x = p
                eng.rotate(x, left=False)
                p = x.parent
            p.red = False
            g.red = True
            eng.rotate(g, left=True)
        return False


def delete_fixup(eng: Engine, parent: Node, right_side: bool):
    """Absorb a one-black deficit at the given child slot of ``parent``.

    The slot is addressed by (parent, side) because its occupant may be
    absent or belong to a deeper layer; either way it reads as black.
    """
    j = parent.layer
    while True:
        occ = parent.right if right_side else parent.left
        if occ is not None and occ.layer == j and occ.red:
            occ.red = False
            eng.charge(1)
            return
        w = parent.left if right_side else parent.right
        assert w is not None and w.layer == j, "deficit slot lacks an in-layer sibling"
        eng.charge(1)
        if w.red:
            w.red = False
            parent.red = True
            eng.rotate(parent, left=not right_side)
            continue
        if right_side:
            near, far = w.right, w.left
        else:
            near, far = w.left, w.right
        if not (far is not None and far.layer == j and far.red):
            if not (near is not None and near.layer == j and near.red):
                w.red = True
                eng.charge(1)
                if parent.red:
                    parent.red = False
                    return
                gp = parent.parent
                if gp is None or gp.layer != j:
                    return
                right_side = gp.right is parent
                parent = gp
                continue
            near.red = False
            w.red = True
            eng.rotate(w, left=right_side)
            w = near
            far = w.left if right_side else w.right
        w.red = parent.red
        parent.red = False
        far.red = False
        eng.rotate(parent, left=not right_side)
        return


def join3(eng: Engine, left_root, left_bh: int, mid: Node, right_root, right_bh: int, j: int):
    """Glue left fragment < ``mid`` < right fragment into one valid subtree.

    Fragments are either within-layer red-black trees, deeper-layer
    subtrees (black height 0), or absent.  Returns (root, black height);
    the returned root is detached (parent None) and always black.
    """
    if left_root is None or left_root.layer != j:
        left_bh = 0
    if right_root is None or right_root.layer != j:
        right_bh = 0
    if left_root is not None:
        left_root.parent = None
        if left_root.layer == j and left_root.red:
            left_root.red = False
            left_bh += 1
            eng.charge(1)
    if right_root is not None:
        right_root.parent = None
        if right_root.layer == j and right_root.red:
            right_root.red = False
            right_bh += 1
            eng.charge(1)
    mid.parent = None

    if left_bh == right_bh:
        mid.left = left_root
        if left_root is not None:
            left_root.parent = mid
        mid.right = right_root
        if right_root is not None:
            right_root.parent = mid
        mid.red = False
        eng.charge(3)
        return mid, left_bh + 1

    if left_bh > right_bh:
        # walk the right spine of the taller side down to the matching height
        slot_parent = None
        occ = left_root
        occ_bh = left_bh
        while occ_bh > right_bh or (occ is not None and occ.layer == j and occ.red):
            assert occ is not None and occ.layer == j
            slot_parent = occ
            if not occ.red:
                occ_bh -= 1
            occ = occ.right
            if occ is not None and occ.layer != j:
                occ_bh = 0
            eng.charge(1)
        mid.left = occ
        if occ is not None:
            occ.parent = mid
        mid.right = right_root
        if right_root is not None:
            right_root.parent = mid
        mid.red = True
        mid.parent = slot_parent
        slot_parent.right = mid
        eng.charge(3)
        grew = insert_fixup(eng, mid)
        top = mid
        while top.parent is not None:
            top = top.parent
            eng.charge(1)
        return top, left_bh + (1 if grew else 0)

    slot_parent = None
    occ = right_root
    occ_bh = right_bh
    while occ_bh > left_bh or (occ is not None and occ.layer == j and occ.red):
        assert occ is not None and occ.layer == j
        slot_parent = occ
        if not occ.red:
            occ_bh -= 1
        occ = occ.left
        if occ is not None and occ.layer != j:
            occ_bh = 0
        eng.charge(1)
    mid.right = occ
    if occ is not None:
        occ.parent = mid
    mid.left = left_root
    if left_root is not None:
        left_root.parent = mid
    mid.red = True
    mid.parent = slot_parent
    slot_parent.left = mid
    eng.charge(3)
    grew = insert_fixup(eng, mid)
    top = mid
    while top.parent is not None:
        top = top.parent
        eng.charge(1)
    return top, right_bh + (1 if grew else 0)


def split(eng: Engine, x: Node):
    """Bring ``x`` to the root of its layer-subtree.

    The remaining nodes end up under ``x`` with each side independently
    valid (the subtree as a whole need not balance across ``x``).  Hanging
    deeper-layer subtrees are preserved.  Worst-case cost logarithmic in
    the layer-subtree size: the per-step joins telescope along the path.
    """
    j = x.layer
    if is_subtree_root(x):
        return
    bh = black_height(eng, x, j)

    path = [x]
    top = x
    while True:
        q = top.parent
        if q is None or q.layer != j:
            break
        path.append(q)
        top = q
        eng.charge(1)
    anchor = top.parent
    anchor_left = anchor is not None and anchor.left is top
    was_engine_root = eng.root is top
    header = top.header

    key = x.key
    child_bh = bh - (0 if x.red else 1)
    left_root, left_bh = x.left, child_bh
    right_root, right_bh = x.right, child_bh
    orig_bh = bh
    for v in path[1:]:
        v_was_black = not v.red  # joins recolor v; the old subtree heights need its old color
        if v.key < key:
            left_root, left_bh = join3(eng, v.left, orig_bh, v, left_root, left_bh, j)
        else:
            right_root, right_bh = join3(eng, right_root, right_bh, v, v.right, orig_bh, j)
        if v_was_black:
            orig_bh += 1

    x.left = left_root
    if left_root is not None:
        left_root.parent = x
        if left_root.layer == j and left_root.red:
            left_root.red = False  # side roots head their own layer-subtrees next
            eng.charge(1)
    x.right = right_root
    if right_root is not None:
        right_root.parent = x
        if right_root.layer == j and right_root.red:
            right_root.red = False
            eng.charge(1)
    x.red = False
    x.parent = anchor
    if anchor is None:
        if was_engine_root:
            eng.root = x
    elif anchor_left:
        anchor.left = x
    else:
        anchor.right = x
    if header is not None and top is not x:
        x.header = header
        top.header = None
    eng.charge(2)


def join_at(eng: Engine, x: Node) -> Node:
    """Rebuild one balanced layer-subtree from ``x`` and its two children.

    Children carrying deeper labels just keep hanging; if neither child
    shares ``x``'s label, ``x`` becomes a lone black layer-subtree.  The
    rebuilt subtree replaces ``x``'s old position.  Returns the new root.
    """
    j = x.layer
    left, right = x.left, x.right
    l_in = left is not None and left.layer == j
    r_in = right is not None and right.layer == j
    if not l_in and not r_in:
        x.red = False
        eng.charge(1)
        return x
    parent = x.parent
    was_left = parent is not None and parent.left is x
    was_engine_root = eng.root is x
    header = x.header
    lbh = black_height(eng, left, j) if l_in else 0
    rbh = black_height(eng, right, j) if r_in else 0
    root, _ = join3(eng, left, lbh, x, right, rbh, j)
    root.parent = parent
    if parent is None:
        if was_engine_root:
            eng.root = root
    elif was_left:
        parent.left = root
    else:
        parent.right = root
    if header is not None and root is not x:
        root.header = header
        x.header = None
    eng.charge(1)
    return root
