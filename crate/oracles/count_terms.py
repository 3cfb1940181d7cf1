"""Independent term counter used to freeze enumeration counts in tests.

Types are nested tuples: a base sort is a string, an arrow is (dom, cod).
Counts well-typed terms with exactly n nodes (Var/Sym/App/Lam), binder and
argument types drawn from the same finite universe as the Rust enumerator.
"""
from functools import lru_cache
import sys


def subtypes(t, out):
    if t in out:
        return
    out.add(t)
    if isinstance(t, tuple):
        subtypes(t[0], out)
        subtypes(t[1], out)


def counter(symbols, variables, target):
    universe = set()
    for t in list(symbols.values()) + list(variables.values()) + [target]:
        subtypes(t, universe)
    atoms = list(symbols.values()) + list(variables.values())

    @lru_cache(maxsize=None)
    def count(ty, n, ctx):
        if n == 1:
            return sum(1 for a in atoms if a == ty) + sum(1 for b in ctx if b == ty)
        total = 0
        if isinstance(ty, tuple):
            total += count(ty[1], n - 1, ctx + (ty[0],))
        for x in universe:
            for k in range(1, n - 1):
                total += count((x, ty), k, ctx) * count(x, n - 1 - k, ctx)
        return total

    return count


def main():
    B = "B"
    sig = {"0": B, "s": (B, B), "m": (B, (B, B))}
    count = counter(sig, {}, B)
    per_size = [count(B, n, ()) for n in range(1, 6)]
    print("{0,s,m} type B sizes 1..5:", per_size, "total", sum(per_size))
    sig2 = {"0": B, "s": (B, B)}
    count2 = counter(sig2, {}, B)
    print("{0,s} type B sizes 1..5:", [count2(B, n, ()) for n in range(1, 6)])
    vars_ = {"x": B}
    count3 = counter(sig, vars_, B)
    per = [count3(B, n, ()) for n in range(1, 6)]
    print("{0,s,m}+x type B sizes 1..5:", per, "total", sum(per))


if __name__ == "__main__":
    sys.exit(main())
