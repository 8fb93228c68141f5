"""Exact minimum set cover by branch and bound over Python-int bitsets.

Sets are indexed in caller order; among all minimum covers the one whose
sorted index list is lexicographically smallest is returned.

Exact reductions keep desk-scale instances tractable. They run to a fixed
point before the search:

* a set contained in an earlier set is dropped (swapping it for the earlier
  one never grows a cover and makes it lexicographically smaller);
* an element with a single candidate forces that set into every cover;
* an element whose candidates include all candidates of another element is
  covered for free and dropped;
* elements split into independent components, solved separately; merging
  per-component lexicographic minima over disjoint index sets gives the
  global lexicographic minimum;
* the lower bound at each node is the larger of ``ceil(|left| / max set)``
  and a greedy packing of elements with pairwise disjoint candidate sets.
"""

from __future__ import annotations


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, nodes: int) -> None:
        super().__init__(f"search expanded more than {nodes} nodes")
        self.nodes = nodes


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def greedy_cover(target: int, masks: list[int]) -> list[int] | None:
    chosen = []
    left = target
    while left:
        best, gain = -1, 0
        for i, m in enumerate(masks):
            g = (m & left).bit_count()
            if g > gain:
                best, gain = i, g
        if best < 0:
            return None
        chosen.append(best)
        left &= ~masks[best]
    return sorted(chosen)


def _undominated(masks: list[int]) -> list[int]:
    """Indices of nonempty sets not contained in any earlier set."""
    keep: list[int] = []
    for i, m in enumerate(masks):
        if m and not any(m & ~masks[j] == 0 for j in keep):
            keep.append(i)
    return keep


def _reduce(target: int, masks: list[int]) -> tuple[list[int], int, list[int]]:
    """Fixed point of forced sets, element dominance and set dominance.

    Returns (forced set indices, elements still to cover, surviving set indices).
    """
    forced: list[int] = []
    left = target
    active = list(range(len(masks)))
    while True:
        active = [active[j] for j in _undominated([masks[i] & left for i in active])]
        cands: dict[int, int] = {}
        for pos, i in enumerate(active):
            for q in _bits(masks[i] & left):
                cands[q] = cands.get(q, 0) | (1 << pos)
        newly = {c.bit_length() - 1 for c in cands.values() if c.bit_count() == 1}
        if newly:
            for pos in newly:
                forced.append(active[pos])
                left &= ~masks[active[pos]]
            active = [i for pos, i in enumerate(active) if pos not in newly]
            continue
        # drop elements implied by an element with a subset of its candidates
        elems = sorted(cands, key=lambda q: (cands[q].bit_count(), q))
        kept: list[int] = []
        dropped = 0
        for q in elems:
            c = cands[q]
            if any(cands[r] & ~c == 0 for r in kept):
                dropped |= 1 << q
            else:
                kept.append(q)
        if not dropped:
            return sorted(forced), left, active
        left &= ~dropped


def _components(target: int, masks: list[int]) -> list[tuple[int, list[int]]]:
    """Split into (element bitset, set indices) groups that share no set."""
    comps: list[tuple[int, list[int]]] = []
    remaining = list(range(len(masks)))
    left = target
    while left:
        frontier = left & -left
        elems = 0
        while frontier:
            elems |= frontier
            grown = 0
            for i in remaining:
                if masks[i] & frontier:
                    grown |= masks[i]
            frontier = grown & ~elems
        members = [i for i in remaining if masks[i] & elems]
        remaining = [i for i in remaining if not masks[i] & elems]
        comps.append((elems, members))
        left &= ~elems
    return comps


class _Search:
    def __init__(self, masks: list[int], node_cap: int, nodes: int = 0) -> None:
        self.masks = masks
        self.node_cap = node_cap
        self.nodes = nodes
        # per element: bitset of the sets containing it
        self.cands: dict[int, int] = {}
        for i, m in enumerate(masks):
            for q in _bits(m):
                self.cands[q] = self.cands.get(q, 0) | (1 << i)
        # elements with few candidates first make the packing bound tighter
        self.order = sorted(self.cands, key=lambda q: self.cands[q].bit_count())
        sizes = [m.bit_count() for m in masks]
        # suffix_max[lo] = largest set among indices >= lo
        self.suffix_max = [0] * (len(masks) + 1)
        for i in range(len(masks) - 1, -1, -1):
            self.suffix_max[i] = max(sizes[i], self.suffix_max[i + 1])
        self.failed: dict[tuple[int, int], int] = {}

    def _packing(self, left: int, allowed: int, budget: int) -> int:
        """Greedy count of elements of ``left`` whose allowed candidates are pairwise disjoint.

        Returns ``budget + 1`` early once the count exceeds ``budget`` or an
        element has no allowed candidate.
        """
        used = 0
        count = 0
        for q in self.order:
            if not (left >> q) & 1:
                continue
            c = self.cands[q] & allowed
            if not c:
                return budget + 1
            if not c & used:
                used |= c
                count += 1
                if count > budget:
                    return count
        return count

    def feasible(self, left: int, budget: int, lo: int) -> bool:
        """Can ``left`` be covered by at most ``budget`` sets with index >= lo?"""
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise SearchBudgetExceeded(self.node_cap)
        if left == 0:
            return True
        if budget <= 0:
            return False
        cap = self.suffix_max[lo]
        if cap == 0 or -(-left.bit_count() // cap) > budget:
            return False
        key = (left, lo)
        if self.failed.get(key, -1) >= budget:
            return False
        allowed = -1 << lo
        if self._packing(left, allowed, budget) > budget:
            self.failed[key] = max(budget, self.failed.get(key, -1))
            return False
        # branch on the element with fewest usable candidates
        pick = None
        for q in _bits(left):
            c = self.cands[q] & allowed
            if pick is None or c.bit_count() < pick.bit_count():
                pick = c
                if c.bit_count() <= 1:
                    break
        for i in _bits(pick):
            if self.feasible(left & ~self.masks[i], budget - 1, lo):
                return True
        self.failed[key] = max(budget, self.failed.get(key, -1))
        return False


def _solve(target: int, masks: list[int], node_cap: int, nodes: int) -> tuple[list[int], int]:
    """Lexicographically smallest minimum cover of one feasible component."""
    upper = greedy_cover(target, masks)
    search = _Search(masks, node_cap, nodes)
    size = len(upper)
    for s in range(1, len(upper)):
        if search.feasible(target, s, 0):
            size = s
            break
    chosen: list[int] = []
    left = target
    lo = 0
    for pos in range(size):
        for i in range(lo, len(masks)):
            if not masks[i] & left:
                continue
            if search.feasible(left & ~masks[i], size - pos - 1, i + 1):
                chosen.append(i)
                left &= ~masks[i]
                lo = i + 1
                break
        else:  # pragma: no cover - size is attainable by construction
            raise AssertionError("lexicographic reconstruction lost the optimum")
    return chosen, search.nodes


def min_cover(target: int, masks: list[int], node_cap: int = 10**7) -> tuple[list[int] | None, int]:
    """Return (lexicographically smallest minimum cover or None if infeasible, nodes expanded)."""
    if target == 0:
        return [], 0
    union = 0
    for m in masks:
        union |= m
    if target & ~union:
        return None, 0
    masks = [m & target for m in masks]
    chosen, left, keep = _reduce(target, masks)
    kept = [masks[i] & left for i in keep]
    nodes = 0
    for elems, members in _components(left, kept):
        local, nodes = _solve(elems, [kept[i] for i in members], node_cap, nodes)
        chosen.extend(keep[members[i]] for i in local)
    return sorted(chosen), nodes
