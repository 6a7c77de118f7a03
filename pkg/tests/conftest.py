import itertools

ACCEPTANCE = {}


def record(criterion: int, ok: bool, detail: str = ""):
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def ideals_by_search(p: int, m: int) -> set:
    """Order ideals of size m in N^p minus 0, by unrestricted breadth-first growth.

    Independent of the canonical-augmentation enumerator: every ideal is grown
    from every smaller one and duplicates are merged as frozensets.
    """
    def below(v):
        return [v[:i] + (v[i] - 1,) + v[i + 1:] for i in range(p) if v[i]]

    level = {frozenset()}
    for _ in range(m):
        nxt = set()
        for ideal in level:
            cands = {tuple(int(i == j) for j in range(p)) for i in range(p)}
            for v in ideal:
                for i in range(p):
                    cands.add(v[:i] + (v[i] + 1,) + v[i + 1:])
            for c in cands - ideal:
                if all((not any(d)) or d in ideal for d in below(c)):
                    nxt.add(ideal | {c})
        level = nxt
    return level


def set_partition_counts(u):
    """Faa di Bruno oracle: count set partitions of the labelled letters of u
    by the multiset of block exponent vectors."""
    letters = [i for i, a in enumerate(u) for _ in range(a)]
    p = len(u)
    counts = {}

    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in partitions(rest):
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]
            yield [[first]] + part

    for part in partitions(list(range(len(letters)))):
        blocks = []
        for b in part:
            v = [0] * p
            for pos in b:
                v[letters[pos]] += 1
            blocks.append(tuple(v))
        key = tuple(sorted(blocks))
        counts[key] = counts.get(key, 0) + 1
    return counts
