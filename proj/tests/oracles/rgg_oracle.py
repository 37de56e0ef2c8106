#!/usr/bin/env python3
"""Independent oracle for the geometric topology generator.

Re-implements mt19937_64 and the 53-bit uniform mapping, places nodes,
brute-forces pairwise distances, retries until connected and prints the
edge list and degree histogram that tests/test_topology.cpp freezes.
"""
import math
import sys

MASK = (1 << 64) - 1


class MT19937_64:
    def __init__(self, seed):
        self.mt = [0] * 312
        self.mt[0] = seed & MASK
        for i in range(1, 312):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & MASK
        self.index = 312

    def _twist(self):
        upper, lower = 0xFFFFFFFF80000000, 0x7FFFFFFF
        for i in range(312):
            x = (self.mt[i] & upper) | (self.mt[(i + 1) % 312] & lower)
            xa = x >> 1
            if x & 1:
                xa ^= 0xB5026F5AA96619E9
            self.mt[i] = self.mt[(i + 156) % 312] ^ xa
        self.index = 0

    def next(self):
        if self.index >= 312:
            self._twist()
        y = self.mt[self.index]
        self.index += 1
        y ^= (y >> 29) & 0x5555555555555555
        y ^= (y << 17) & 0x71D67FFFEDA60000
        y ^= (y << 37) & 0xFFF7EEE000000000
        y ^= y >> 43
        return y & MASK

    def uniform(self):
        return (self.next() >> 11) * 2.0 ** -53


def connected(n, adj):
    seen = {0}
    stack = [0]
    while stack:
        k = stack.pop()
        for l in adj[k]:
            if l not in seen:
                seen.add(l)
                stack.append(l)
    return len(seen) == n


def generate(n, radius, seed):
    rng = MT19937_64(seed)
    for _ in range(1000):
        pos = [(rng.uniform(), rng.uniform()) for _ in range(n)]
        adj = [set() for _ in range(n)]
        for k in range(n):
            for l in range(k + 1, n):
                if math.dist(pos[k], pos[l]) <= radius:
                    adj[k].add(l)
                    adj[l].add(k)
        if connected(n, adj):
            return pos, adj
    raise RuntimeError("no connected graph")


if __name__ == "__main__":
    n, radius, seed = int(sys.argv[1]), float(sys.argv[2]), int(sys.argv[3])
    pos, adj = generate(n, radius, seed)
    edges = sorted((k, l) for k in range(n) for l in adj[k] if k < l)
    degrees = [len(a) for a in adj]
    hist = [degrees.count(d) for d in range(max(degrees) + 1)]
    print("edges", len(edges))
    print("degrees", degrees)
    print("histogram", hist)
    print("first_position", repr(pos[0]))
