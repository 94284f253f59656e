"""
Decision-respecting isomorphism of ego networks.

Two ego networks are isomorphic with respect to h when a bijection between
their members preserves every label (X, y, h) and maps edges onto edges in
both directions. Ego networks are small, so a backtracking search over
candidates pruned by colour refinement is enough.
"""

from typing import Dict, FrozenSet, Hashable, List, Optional, Set, Tuple

from ..exceptions import ArgumentError
from ..network.graph_core import EgoNet

Mapping = Dict[int, int]


def _label_key(ego: EgoNet, v: int) -> Tuple[Hashable, ...]:
    label = ego.labels[v]
    return (label.protected, label.unprotected, label.outcome, label.decision)


def _check_labels(g1: EgoNet, g2: EgoNet) -> None:
    arities = set()
    for ego in (g1, g2):
        for v in ego.members:
            label = ego.labels.get(v)
            if label is None or label.decision is None:
                raise ArgumentError(f"ego network of {ego.center} lacks decision labels for node {v}")
            arities.add(len(label.unprotected))
    if len(arities) > 1:
        raise ArgumentError(f"attribute vectors of mismatched arity: {sorted(arities)}")


def _adjacency(ego: EgoNet) -> Dict[int, Set[int]]:
    adj: Dict[int, Set[int]] = {v: set() for v in ego.members}
    for a, b in ego.induced_edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def _refine_colours(
    g1: EgoNet, adj1: Dict[int, Set[int]],
    g2: EgoNet, adj2: Dict[int, Set[int]],
    rooted: bool,
) -> Optional[Tuple[Dict[int, int], Dict[int, int]]]:
    """
    Joint colour refinement; colours are comparable across both graphs.

    Returns:
        (colours1, colours2), or None when the colour histograms differ
    """
    palette: Dict[Hashable, int] = {}

    def paint(signature: Hashable) -> int:
        return palette.setdefault(signature, len(palette))

    c1 = {v: paint((_label_key(g1, v), len(adj1[v]), rooted and v == g1.center)) for v in g1.members}
    c2 = {v: paint((_label_key(g2, v), len(adj2[v]), rooted and v == g2.center)) for v in g2.members}

    classes = -1
    for _ in range(len(g1.members) + 1):
        if sorted(c1.values()) != sorted(c2.values()):
            return None
        count = len(set(c1.values()))
        if count == classes:
            break
        classes = count
        palette = {}
        c1, c2 = (
            {v: paint((c1[v], tuple(sorted(c1[u] for u in adj1[v])))) for v in g1.members},
            {v: paint((c2[v], tuple(sorted(c2[u] for u in adj2[v])))) for v in g2.members},
        )
    return c1, c2


def _search_order(ego: EgoNet, adj: Dict[int, Set[int]], colours: Dict[int, int]) -> List[int]:
    """Members in BFS order from the center so mapped neighbours prune early."""
    order: List[int] = []
    seen: Set[int] = set()
    pending = sorted(ego.members, key=lambda v: (v != ego.center, colours[v], v))
    for start in pending:
        if start in seen:
            continue
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(adj[v], key=lambda w: (colours[w], w)):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    return order


def find_decision_isomorphism(g1: EgoNet, g2: EgoNet, rooted: bool = True) -> Optional[Mapping]:
    """
    Find a label- and edge-preserving bijection from g1's members to g2's.

    Args:
        g1: First ego network (must carry decision labels)
        g2: Second ego network (must carry decision labels)
        rooted: Require center -> center

    Returns:
        The bijection as a dict, or None if none exists

    Raises:
        ArgumentError: If labels are missing or attribute vectors differ in arity
    """
    _check_labels(g1, g2)
    if len(g1.members) != len(g2.members) or len(g1.induced_edges) != len(g2.induced_edges):
        return None
    if rooted and _label_key(g1, g1.center) != _label_key(g2, g2.center):
        return None

    adj1, adj2 = _adjacency(g1), _adjacency(g2)
    refined = _refine_colours(g1, adj1, g2, adj2, rooted)
    if refined is None:
        return None
    colours1, colours2 = refined

    candidates: Dict[int, List[int]] = {}
    for v in g2.members:
        candidates.setdefault(colours2[v], []).append(v)
    for bucket in candidates.values():
        bucket.sort()

    order = _search_order(g1, adj1, colours1)
    mapping: Mapping = {}
    used: Set[int] = set()

    def consistent(v: int, w: int) -> bool:
        for x, mx in mapping.items():
            if (x in adj1[v]) != (mx in adj2[w]):
                return False
        return True

    def extend(index: int) -> bool:
        if index == len(order):
            return True
        v = order[index]
        for w in candidates.get(colours1[v], []):
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if extend(index + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return dict(mapping) if extend(0) else None


def decision_isomorphic(g1: EgoNet, g2: EgoNet, rooted: bool = True) -> bool:
    """True iff the two ego networks are isomorphic with respect to the decision function."""
    return find_decision_isomorphism(g1, g2, rooted=rooted) is not None


def relabel(ego: EgoNet, mapping: Dict[int, int]) -> EgoNet:
    """Copy of ego with node ids renamed through mapping."""
    edges: FrozenSet[Tuple[int, int]] = frozenset(
        (min(mapping[a], mapping[b]), max(mapping[a], mapping[b])) for a, b in ego.induced_edges
    )
    return EgoNet(
        center=mapping[ego.center],
        delta=ego.delta,
        members=frozenset(mapping[v] for v in ego.members),
        induced_edges=edges,
        labels={mapping[v]: label for v, label in ego.labels.items()},
    )
