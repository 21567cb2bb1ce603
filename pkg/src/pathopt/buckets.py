"""Integer-keyed vertex buckets with O(1) update and uniform sampling inside a bucket."""

from __future__ import annotations


class IndexedBuckets:
    """Vertices grouped by an integer key in ``[lo_key, hi_key]``.

    Each bucket is a plain list; removal swaps the last element into the
    hole, so membership order inside a bucket carries no meaning. ``top`` and
    ``bottom`` are lazily maintained pointers to the extreme nonempty keys.
    """

    def __init__(self, n: int, lo_key: int, hi_key: int):
        self.offset = -lo_key
        self.buckets: list[list[int]] = [[] for _ in range(hi_key - lo_key + 1)]
        self.key = [None] * n
        self.pos = [0] * n
        self.count = 0
        self._top = -1
        self._bottom = len(self.buckets)

    def __len__(self) -> int:
        return self.count

    def __contains__(self, v: int) -> bool:
        return self.key[v] is not None

    def insert(self, v: int, key: int) -> None:
        i = key + self.offset
        b = self.buckets[i]
        self.key[v] = key
        self.pos[v] = len(b)
        b.append(v)
        self.count += 1
        if i > self._top:
            self._top = i
        if i < self._bottom:
            self._bottom = i

    def remove(self, v: int) -> None:
        b = self.buckets[self.key[v] + self.offset]
        p = self.pos[v]
        last = b.pop()
        if last != v:
            b[p] = last
            self.pos[last] = p
        self.key[v] = None
        self.count -= 1

    def update(self, v: int, key: int) -> None:
        if self.key[v] != key:
            self.remove(v)
            self.insert(v, key)

    def top_key(self) -> int:
        if not self.count:
            raise ValueError("empty bucket structure")
        while not self.buckets[self._top]:
            self._top -= 1
        return self._top - self.offset

    def bottom_key(self) -> int:
        if not self.count:
            raise ValueError("empty bucket structure")
        while not self.buckets[self._bottom]:
            self._bottom += 1
        return self._bottom - self.offset

    def bucket(self, key: int) -> list[int]:
        i = key + self.offset
        if 0 <= i < len(self.buckets):
            return self.buckets[i]
        return []

    def descending(self):
        """Yield nonempty (key, bucket) pairs from the highest key down."""
        if not self.count:
            return
        i = self.top_key() + self.offset
        while i >= 0:
            if self.buckets[i]:
                yield i - self.offset, self.buckets[i]
            i -= 1

    def ascending(self):
        if not self.count:
            return
        i = self.bottom_key() + self.offset
        while i < len(self.buckets):
            if self.buckets[i]:
                yield i - self.offset, self.buckets[i]
            i += 1
