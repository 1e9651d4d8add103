"""Unique decodability of finite codes (Sardinas-Patterson)."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional, Set, Tuple

Word = Tuple[int, ...]


def _quotient(left: Iterable[Word], right: Iterable[Word]) -> Set[Word]:
    """Nonempty w with u + w == v for u in left, v in right."""
    out = set()
    right = list(right)
    for u in left:
        n = len(u)
        for v in right:
            if len(v) > n and v[:n] == u:
                out.add(v[n:])
    return out


def dangling_suffixes(code: Iterable[Word]):
    """Yield the successive Sardinas-Patterson sets S1, S2, ... until they repeat."""
    c = set(code)
    s = {w for w in _quotient(c, c)}
    seen = set()
    while s:
        key = frozenset(s)
        if key in seen:
            return
        seen.add(key)
        yield s
        s = _quotient(c, s) | _quotient(s, c)


def is_uniquely_decodable(code: Iterable[Word]) -> bool:
    """True iff every concatenation of codewords factors uniquely.

    The empty word is never allowed in a code. Duplicates are ignored; callers
    that care about repeated codewords must check for them first.
    """
    c = set(map(tuple, code))
    if () in c:
        return False
    for s in dangling_suffixes(c):
        if s & c:
            return False
    return True


def ambiguity_witness(code: Iterable[Word]) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Two distinct codeword-index sequences with the same concatenation, or None.

    Searches the dangling-suffix graph breadth first, so the witness uses as
    few codewords as possible. Indices refer to ``sorted(set(code))``.
    """
    words = sorted(set(map(tuple, code)))
    if () in words:
        return (), (words.index(()),)
    index = {w: i for i, w in enumerate(words)}
    # state: (suffix, top, bottom) where top + suffix == bottom as words
    queue = deque()
    seen = set()
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            if i != j and len(v) > len(u) and v[:len(u)] == u:
                queue.append((v[len(u):], (i,), (j,)))
    while queue:
        suffix, top, bottom = queue.popleft()
        if suffix in index:
            return top + (index[suffix],), bottom
        if suffix in seen:
            continue
        seen.add(suffix)
        n = len(suffix)
        for k, w in enumerate(words):
            if len(w) < n and suffix[:len(w)] == w:
                queue.append((suffix[len(w):], top + (k,), bottom))
            elif len(w) > n and w[:n] == suffix:
                # the top row overtakes: swap roles
                queue.append((w[n:], bottom, top + (k,)))
    return None
