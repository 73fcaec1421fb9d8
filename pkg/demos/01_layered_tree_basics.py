#!/usr/bin/env python3
"""Layered working-set tree, step by step.

Insert a handful of keys, watch the layers fill on the doubly-exponential
schedule, and see a search promote its key to the recency front while the
oldest keys sink.  Costs are cursor visits: every node the single access
pointer reaches, including its walks back toward the root.
"""

from layerws import LayeredTree


def show(tree, label):
    print(f"\n== {label}")
    print(f"   layers t={tree.layer_count}, deepest holds {tree.last_size}")
    for j, order in sorted(tree.layer_snapshot().items()):
        print(f"   L{j} (youngest->oldest): {order}")


def main():
    tree = LayeredTree()
    print("Inserting 1..5: the first layer holds only four keys, so the")
    print("fifth insert opens a second layer and the oldest key sinks.")
    for k in range(1, 6):
        before = tree.engine.visits
        tree.insert(k)
        print(f"   insert {k}: cost {tree.engine.visits - before} visits")
    show(tree, "after inserts 1..5")

    before = tree.engine.visits
    layer = tree.search(1)
    print(f"\nsearch(1): found in layer {layer}, "
          f"cost {tree.engine.visits - before} visits")
    show(tree, "after search(1): key 1 is young again, key 2 sank")

    before = tree.engine.visits
    assert tree.search(99) is None
    print(f"\nsearch(99): miss, cost {tree.engine.visits - before} visits, "
          "structure untouched")

    tree.delete(2)
    show(tree, "after delete(2): the deepest layer emptied and was retired")

    print("\nScaling up: 300 ascending inserts")
    big = LayeredTree()
    for k in range(300):
        big.insert(k)
    sizes = {j: len(v) for j, v in big.layer_snapshot().items()}
    print(f"   layer sizes: {sizes}  (4, 16, 256-cap schedule)")
    before = big.engine.visits
    big.search(0)   # the oldest key lives in the deepest layer
    deep_cost = big.engine.visits - before
    before = big.engine.visits
    big.search(0)   # now it is the youngest of layer 1
    warm_cost = big.engine.visits - before
    print(f"   search(0) cold: {deep_cost} visits; repeated: {warm_cost} visits")


if __name__ == "__main__":
    main()
