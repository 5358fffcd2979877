"""Hand-coded explicit-state BFS for three corpus models.

Written against the model text, not the Rust code, and used to freeze the
reachable-state counts and shortest counterexample lengths in the tests.
"""
from collections import deque
from itertools import permutations, product


def dekker(n, guarded=True):
    # state: (turn, want tuple, crit tuple)
    def init():
        for t in range(n):
            yield (t, (False,) * n, (False,) * n)

    def succ(s):
        turn, want, crit = s
        for p in range(n):
            if not want[p]:
                w = list(want); w[p] = True
                yield (turn, tuple(w), crit)
        for p in range(n):
            if want[p] and (turn == p or not guarded):
                c = list(crit); c[p] = True
                yield (turn, want, tuple(c))
        for p1, p2 in permutations(range(n), 2):
            if crit[p1]:
                w = list(want); w[p1] = False
                c = list(crit); c[p1] = False
                yield (p2, tuple(w), tuple(c))

    def bad(s):
        return sum(s[2]) >= 2

    return init, succ, bad


def mux_sem(n, guarded=True):
    IDLE, WANT, CRIT = range(3)

    def init():
        yield (True, (IDLE,) * n)

    def succ(s):
        sem, st = s
        for p in range(n):
            if st[p] == IDLE:
                x = list(st); x[p] = WANT
                yield (sem, tuple(x))
        for p in range(n):
            if st[p] == WANT and (sem or not guarded):
                x = list(st); x[p] = CRIT
                yield (False, tuple(x))
        for p in range(n):
            if st[p] == CRIT:
                x = list(st); x[p] = IDLE
                yield (True, tuple(x))

    def bad(s):
        return sum(1 for v in s[1] if v == CRIT) >= 2

    return init, succ, bad


def bfs(model):
    init, succ, bad = model
    depth = {}
    q = deque()
    for s in init():
        if s not in depth:
            depth[s] = 0
            q.append(s)
    shortest = None
    while q:
        s = q.popleft()
        if bad(s) and shortest is None:
            shortest = depth[s]
        for t in succ(s):
            if t not in depth:
                depth[t] = depth[s] + 1
                q.append(t)
    return len(depth), shortest


if __name__ == "__main__":
    for name, mk in [("dekker", lambda n: dekker(n)),
                     ("broken_dekker", lambda n: dekker(n, False)),
                     ("mux_sem", lambda n: mux_sem(n)),
                     ("broken_mux_sem", lambda n: mux_sem(n, False))]:
        for n in (2, 3):
            states, shortest = bfs(mk(n))
            print(f"{name} N={n}: states={states} shortest_violation={shortest}")
