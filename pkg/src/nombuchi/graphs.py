"""Small graph helpers shared by the automaton modules."""

from __future__ import annotations

from collections import deque


def reachable(start, succ):
    """All nodes reachable from start (inclusive) under the successor map."""
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in succ(node):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def sccs(nodes, succ):
    """Strongly connected components of the induced subgraph on `nodes`.

    Iterative Tarjan; components are returned in reverse topological order
    as lists of nodes.
    """
    nodes = set(nodes)
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, None)]
        while work:
            node, it = work[-1]
            if it is None:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
                it = iter([s for s in succ(node) if s in nodes])
                work[-1] = (node, it)
            advanced = False
            for nxt in it:
                if nxt not in index:
                    work.append((nxt, None))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    x = stack.pop()
                    on_stack.discard(x)
                    comp.append(x)
                    if x == node:
                        break
                comps.append(comp)
    return comps


def has_cycle_through(nodes, succ, interesting):
    """Is there a cycle (within `nodes`) containing a node satisfying
    `interesting`?  Self-loops count as cycles."""
    for comp in sccs(nodes, succ):
        if len(comp) == 1:
            n = comp[0]
            if n not in succ(n):
                continue
        if any(interesting(n) for n in comp):
            return True
    return False
