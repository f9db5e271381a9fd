"""Slow, direct re-implementations used as independent test oracles.

Nothing here imports the package's internals: solutions are plain
``(n, sigma, gamma)`` tables and words are tuples.
"""

import itertools


def r_map(n, sigma, gamma):
    return {(x, y): (sigma[x][y], gamma[y][x]) for x in range(n) for y in range(n)}


def naive_ybe(n, sigma, gamma):
    r = r_map(n, sigma, gamma)

    def r12(t):
        return r[t[0], t[1]] + (t[2],)

    def r23(t):
        return (t[0],) + r[t[1], t[2]]

    return all(
        r12(r23(r12(t))) == r23(r12(r23(t))) for t in itertools.product(range(n), repeat=3)
    )


def naive_derived(n, sigma, gamma):
    inv = [[row.index(v) for v in range(n)] for row in sigma]
    # r'(x, y) = (y, sigma_y gamma_{sigma_x^-1(y)}(x))
    return {(x, y): (y, sigma[y][gamma[inv[x][y]][x]]) for x in range(n) for y in range(n)}


def naive_classes(n, rel, d):
    """Partition of length-d words under one-step rewriting by ``rel`` (both directions)."""
    words = list(itertools.product(range(n), repeat=d))
    adj = {w: set() for w in words}
    for w in words:
        for i in range(d - 1):
            v = w[:i] + rel[w[i], w[i + 1]] + w[i + 2:]
            adj[w].add(v)
            adj[v].add(w)
    seen, parts = set(), []
    for w in words:
        if w in seen:
            continue
        comp, stack = set(), [w]
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            stack.extend(adj[u] - comp)
        seen |= comp
        parts.append(sorted(comp))
    return sorted(parts)


def naive_pi(n, sigma, word):
    out, perm = [], list(range(n))
    for x in word:
        out.append(perm[x])
        perm = [perm[sigma[x][y]] for y in range(n)]
    return tuple(out)


def naive_pi_inv(n, sigma, word):
    out, perm = [], list(range(n))
    for z in word:
        x = perm.index(z)
        out.append(x)
        perm = [perm[sigma[x][y]] for y in range(n)]
    return tuple(out)


def naive_lambda(n, sigma, mult_word):
    perm = list(range(n))
    for x in mult_word:
        perm = [perm[sigma[x][y]] for y in range(n)]
    return perm


def _closure(words_by_degree, seed_pairs, rules, top):
    """Least equivalence containing ``seed_pairs`` closed under ``rules``.

    Stored as a set of ordered pairs (full materialisation). Each rule maps the
    current pair set to pairs that must be added.
    """
    pairs = {(w, w) for d in range(top + 1) for w in words_by_degree[d]}
    pairs |= set(seed_pairs)
    pairs |= {(b, a) for a, b in pairs}
    while True:
        new = set()
        for rule in rules:
            new |= rule(pairs)
        # transitivity by scanning
        by_left = {}
        for a, b in pairs:
            by_left.setdefault(a, set()).add(b)
        for a, bs in by_left.items():
            for b in bs:
                for c in by_left.get(b, ()):
                    new.add((a, c))
        new |= {(b, a) for a, b in new}
        new -= pairs
        if not new:
            return pairs
        pairs |= new


def naive_congruence(n, sigma, gamma, kind, D, slack):
    """Partition of additive words of degree <= D for eta, nu or mu, computed
    on raw words of degree <= D + slack with every rule quantifier spelled out."""
    top = D + slack
    words = {d: list(itertools.product(range(n), repeat=d)) for d in range(top + 1)}
    if kind == "nu":
        rel = r_map(n, sigma, gamma)
    else:
        rel = naive_derived(n, sigma, gamma)
    # ground equality of the monoid, by the oracle's own rewriting closure
    cls = {}
    for d in range(top + 1):
        for k, part in enumerate(naive_classes(n, rel, d)):
            for w in part:
                cls[w] = (d, k)

    def eq(u, v):
        return cls[u] == cls[v]

    ground = [(u, v) for d in range(top + 1) for u in words[d] for v in words[d] if eq(u, v)]

    def lam_of_additive(a):
        return naive_lambda(n, sigma, naive_pi_inv(n, sigma, a))

    def circ(a, c):
        if kind == "nu":
            return a + c
        p = lam_of_additive(a)
        return a + tuple(p[v] for v in c)

    def op(a, c):
        return circ(a, c) if kind == "nu" else a + c

    contexts = {
        d: [(c, e) for k in range(top - d + 1) for j in range(k + 1)
            for c in words[j] for e in words[k - j]]
        for d in range(top + 1)
    }
    seeds = []
    for d in range(top + 1):
        for j in range(1, top - d + 1):
            for c in words[j]:
                for a in words[d]:
                    for b in words[d]:
                        if eq(op(c, a), op(c, b)):
                            seeds.append((a, b))

    def translate(pairs):
        out = set()
        for a, b in pairs:
            for c, e in contexts[len(a)]:
                out.add((op(op(c, a), e), op(op(c, b), e)))
        return out

    def cancel(pairs):
        out = set()
        for d in range(top):
            for j in range(1, top - d + 1):
                for c in words[j]:
                    for a in words[d]:
                        for b in words[d]:
                            if (op(c, a), op(c, b)) in pairs:
                                out.add((a, b))
        return out

    perms = []
    if kind == "mu":
        seen = set()
        for k in range(top + 1):
            for z in words[k]:
                p = tuple(naive_lambda(n, sigma, z))
                if p not in seen:
                    seen.add(p)
                    perms.append(p)
        inv = [tuple(p.index(v) for v in range(n)) for p in perms]
        perms = perms + inv

    def lam_rule(pairs):
        out = set()
        for a, b in pairs:
            for k in range(top - len(a) + 1):
                for c in words[k]:
                    ac, bc = circ(a, c), circ(b, c)
                    for p in perms:
                        out.add((tuple(p[v] for v in ac), tuple(p[v] for v in bc)))
        return out

    rules = [translate, cancel] + ([lam_rule] if kind == "mu" else [])
    pairs = _closure(words, seeds + ground, rules, top)

    out = {}
    for d in range(D + 1):
        parts, seen = [], set()
        for w in words[d]:
            if w in seen:
                continue
            block = sorted(v for v in words[d] if (w, v) in pairs)
            seen |= set(block)
            parts.append(block)
        if kind == "nu":
            parts = [sorted(naive_pi(n, sigma, w) for w in block) for block in parts]
        out[d] = sorted(parts)
    return out
