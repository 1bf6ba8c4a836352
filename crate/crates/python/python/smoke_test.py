"""Smoke test for the sprofile_py extension.

Build and install first, e.g. `maturin develop` inside crates/python,
then run `python python/smoke_test.py`.
"""

import os
import random
import tempfile

import sprofile_py as sp


def brute_mode(freq):
    top = max(freq)
    return top, [i + 1 for i, f in enumerate(freq) if f == top]


def main():
    p = sp.Profiler(3)
    p.increment(2)
    assert p.blocks() == [(1, 2, 0), (3, 3, 1)], p.blocks()
    assert p.mode() == (1, [2])
    p.decrement(3)
    assert p.frequency(3) == -1
    assert p.min_objects() == (-1, [3])
    p.audit()

    rng = random.Random(5)
    m = 20
    q = sp.Profiler(m)
    freq = [0] * m
    for _ in range(5000):
        x = rng.randint(1, m)
        action = "+" if rng.random() < 0.6 else "-"
        q.apply(x, action)
        freq[x - 1] += 1 if action == "+" else -1
        f, objs = q.mode()
        assert (f, sorted(objs)) == brute_mode(freq)
    ordered = sorted(freq)
    assert q.median()[0] == ordered[(m + 1) // 2 - 1]
    assert [f for _, f in q.top_k(3)] == ordered[::-1][:3]
    q.audit()

    w = sp.WindowedProfiler(5, 2)
    for x in (1, 1, 2):
        w.push(x, "+")
    assert len(w) == 2 and w.frequency(1) == 1 and w.frequency(2) == 1

    events = sp.generate_stream("stream2", 1000, 50, seed=9)
    assert events == sp.generate_stream("stream2", 1000, 50, seed=9)
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "s.txt")
        sp.write_stream(path, events)
        assert sp.read_stream(path) == events

    degeneracy, core, order = sp.degeneracy_order(3, [(1, 2), (2, 3), (1, 3)])
    assert degeneracy == 2 and core == [2, 2, 2] and sorted(order) == [1, 2, 3]

    assert sp.verify("stream3", 2000, 30) is None

    for bad in (lambda: sp.Profiler(0), lambda: p.increment(4), lambda: p.apply(1, "?")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("sprofile_py smoke test passed")


if __name__ == "__main__":
    main()
