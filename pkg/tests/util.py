"""Shared builders and independent sign oracles for the test suite.

The oracles recompute assembled operators through flat letter arrangements
with bubble-sort Koszul signs, a code path disjoint from the package's
selection-sign engine.
"""

import itertools
import random
from fractions import Fraction

from blinfty.words import (Generator, GradedSpace, Word, EWord, Element,
                           EElement, UNIT_WORD, normalize_word,
                           normalize_clusters)
from blinfty.structures import OperationTable, BLAlgebra, Bounds


def space(*spec):
    gens = []
    for s in spec:
        if len(s) == 2:
            gens.append(Generator(s[0], s[1]))
        else:
            gens.append(Generator(s[0], s[1], action=s[2]))
    return GradedSpace(gens)


def word(sp, *names):
    w, sign = normalize_word(sp, names)
    assert sign == 1, "test word must be normalized and nonzero"
    return w


def eword(sp, *cluster_names, hbar=0):
    clusters = tuple(word(sp, *names) for names in cluster_names)
    ew, sign = normalize_clusters(sp, clusters, hbar=hbar)
    assert sign == 1
    return ew


def table(sp, parity, entries, complete=True, target=None, **kw):
    """entries: list of (k, l, input names, [(coeff, output names), ...])."""
    rows = []
    for (k, l, in_names, outs) in entries:
        w_in = word(sp, *in_names)
        tsp = target if target is not None else sp
        elem = Element()
        for coeff, out_names in outs:
            w_out, sgn = normalize_word(tsp, out_names)
            assert sgn != 0
            elem = elem + Element.monomial(w_out, Fraction(coeff) * sgn)
        rows.append((k, l, w_in, elem))
    return OperationTable(sp, parity, rows, complete=complete, target=target,
                          **kw)


def algebra(sp, entries, **kw):
    return BLAlgebra(sp, table(sp, 1, entries, **kw))


# ---------------------------------------------------------------------------
# Arrangement calculus: ordered letter lists with brute-force Koszul signs.

def inversion_sign(parities, perm):
    """Sign of rearranging items into perm order, counting odd-odd inversions."""
    sign = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b] and parities[perm[a]] and parities[perm[b]]:
                sign = -sign
    return sign


def bubble_normalize(sp, letters):
    """(sorted letters, sign) via literal adjacent swaps; sign 0 on vanishing."""
    seq = list(letters)
    pars = [sp.parities[i] for i in seq]
    for i, j in itertools.combinations(range(len(seq)), 2):
        if seq[i] == seq[j] and pars[i] and pars[j]:
            return None, 0
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            if seq[i] > seq[i + 1]:
                if pars[i] and pars[i + 1]:
                    sign = -sign
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
                pars[i], pars[i + 1] = pars[i + 1], pars[i]
                changed = True
    return seq, sign


def cluster_sort_sign(sp, clusters):
    """Sort clusters by (length, letters); bubble signs on cluster parities."""
    seq = list(clusters)
    pars = [sum(sp.parities[i] for i in c) % 2 for c in seq]
    keys = [(len(c), tuple(c)) for c in seq]
    for i, j in itertools.combinations(range(len(seq)), 2):
        if keys[i] == keys[j] and pars[i] and pars[j]:
            return None, 0
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(seq) - 1):
            if keys[i] > keys[i + 1]:
                if pars[i] and pars[i + 1]:
                    sign = -sign
                seq[i], seq[i + 1] = seq[i + 1], seq[i]
                pars[i], pars[i + 1] = pars[i + 1], pars[i]
                keys[i], keys[i + 1] = keys[i + 1], keys[i]
                changed = True
    return seq, sign


def add_term(acc, sp, clusters, coeff, hbar=0):
    """Normalize a list of letter-lists into an EWord and accumulate."""
    done = []
    for letters in clusters:
        srt, sgn = bubble_normalize(sp, letters)
        if sgn == 0:
            return
        coeff = coeff * sgn
        done.append(tuple(srt))
    srt_clusters, sgn = cluster_sort_sign(sp, done)
    if sgn == 0:
        return
    coeff = coeff * sgn
    ew = EWord(tuple(Word(c) for c in srt_clusters), hbar=hbar)
    acc[ew] = acc.get(ew, 0) + coeff


def oracle_hat_p(sp, optable, ew):
    """Exhaustive gluing oracle for the coderivation on one outer word.

    Enumerates (cluster subset, one letter per cluster) gluings; every sign
    comes from one global permutation of the flattened letters.
    """
    clusters = ew.clusters
    n = len(clusters)
    flat = []
    owner = []
    for ci, c in enumerate(clusters):
        for l in c.letters:
            flat.append(l)
            owner.append(ci)
    pars = [sp.parities[i] for i in flat]
    acc = {}
    for k in range(1, n + 1):
        for subset in itertools.combinations(range(n), k):
            if any(len(clusters[i]) == 0 for i in subset):
                continue
            pools = [[p for p in range(len(flat)) if owner[p] == i]
                     for i in subset]
            for choice in itertools.product(*pools):
                selected = list(choice)
                leftovers_sel = [p for p in range(len(flat))
                                 if owner[p] in subset and p not in selected]
                untouched = [p for p in range(len(flat))
                             if owner[p] not in subset]
                perm = selected + leftovers_sel + untouched
                sign = inversion_sign(pars, perm)
                picked, n_sign = bubble_normalize(sp, [flat[p] for p in selected])
                if n_sign == 0:
                    continue
                entry = optable.query(k, Word(tuple(picked)))
                for w_out, c_out in entry.terms.items():
                    merged = list(w_out.letters) + [flat[p] for p in leftovers_sel]
                    rest = [list(clusters[i].letters) for i in range(n)
                            if i not in subset]
                    add_term(acc, sp, [merged] + rest,
                             Fraction(1) * sign * n_sign * c_out, hbar=ew.hbar)
    return EElement(acc)


def oracle_two_level(sp, optable, w_in):
    """Two-vertex gluing oracle: ordered entry pairs sharing one edge."""
    letters = list(w_in.letters)
    pars = [sp.parities[i] for i in letters]
    k = len(letters)
    acc = {}
    for j in range(1, k + 1):
        for S in itertools.combinations(range(k), j):
            sign1 = inversion_sign(pars, list(S) + [p for p in range(k)
                                                    if p not in S])
            first, s1 = bubble_normalize(sp, [letters[p] for p in S])
            if s1 == 0:
                continue
            rest = [letters[p] for p in range(k) if p not in S]
            for w_mid, c1 in optable.query(j, Word(tuple(first))).terms.items():
                mid = list(w_mid.letters)
                if not mid:
                    continue  # no output letters: nothing to feed the 2nd vertex
                arr = mid + rest  # current arrangement after the first vertex
                arr_pars = [sp.parities[i] for i in arr]
                for u in range(len(mid)):
                    sel = [u] + list(range(len(mid), len(arr)))
                    perm = sel + [p for p in range(len(arr)) if p not in sel]
                    sign2 = inversion_sign(arr_pars, perm)
                    second, s2 = bubble_normalize(sp, [arr[p] for p in sel])
                    if s2 == 0:
                        continue
                    q2 = optable.query(len(sel), Word(tuple(second)))
                    leftover_mid = [mid[p] for p in range(len(mid)) if p != u]
                    for w_out, c2 in q2.terms.items():
                        final, s3 = bubble_normalize(
                            sp, list(w_out.letters) + leftover_mid)
                        if s3 == 0:
                            continue
                        val = Fraction(1) * sign1 * s1 * c1 * sign2 * s2 * c2 * s3
                        wkey = Word(tuple(final))
                        acc[wkey] = acc.get(wkey, 0) + val
    return Element(acc)


def oracle_hat_phi(sp, tsp, table_, ew, bullet_table=None, bullet_parity=0):
    """Morphism oracle: set partitions of letters, spanning-forest check by
    explicit edge counting, all signs from flat arrangements."""
    clusters = ew.clusters
    n = len(clusters)
    flat, owner = [], []
    for ci, c in enumerate(clusters):
        for l in c.letters:
            flat.append(l)
            owner.append(ci)
    pars = [sp.parities[i] for i in flat]
    acc = {}
    for part in set_partitions_list(list(range(len(flat)))):
        blocks = sorted([sorted(b) for b in part], key=lambda b: b[0])
        edges = [(owner[p], bi) for bi, b in enumerate(blocks) for p in b]
        if not forest_check(n, len(blocks), edges):
            continue
        comp = components(n, len(blocks), edges)
        slots = range(len(blocks)) if bullet_table is not None else [None]
        for bullet_at in slots:
            perm = [p for b in blocks for p in b]
            sign = inversion_sign(pars, perm)
            if bullet_at is not None:
                npass = sum(pars[p] for b in blocks[:bullet_at] for p in b)
                if bullet_parity % 2 and npass % 2:
                    sign = -sign
            factors = []
            ok = True
            for bi, b in enumerate(blocks):
                srt, s = bubble_normalize(sp, [flat[p] for p in b])
                if s == 0:
                    ok = False
                    break
                tab = bullet_table if bi == bullet_at else table_
                ent = tab.query(len(b), Word(tuple(srt)))
                factors.append((s, ent))
            if not ok:
                continue
            for combo in itertools.product(
                    *[list(e.terms.items()) for _, e in factors]):
                coeff = Fraction(1) * sign
                for (s, _), (_, c_out) in zip(factors, combo):
                    coeff = coeff * s * c_out
                if not coeff:
                    continue
                outs = [w for (w, _) in combo]
                out_pars = [sum(tsp.parities[i] for i in w.letters) % 2
                            for w in outs]
                comp_of_block = {bi: comp[("b", bi)] for bi in range(len(blocks))}
                order = sorted(range(len(blocks)),
                               key=lambda bi: (comp_of_block[bi], bi))
                coeff = coeff * inversion_sign(out_pars, order)
                groups = {}
                for bi in order:
                    groups.setdefault(comp_of_block[bi], []).extend(
                        outs[bi].letters)
                out_clusters = [groups[g] for g in sorted(groups)]
                for ci in range(n):
                    if comp[("c", ci)] not in groups and len(clusters[ci]) == 0:
                        out_clusters.append([])
                if not out_clusters:
                    continue
                add_term_t(acc, tsp, out_clusters, coeff, hbar=ew.hbar)
    return EElement(acc)


def add_term_t(acc, tsp, clusters, coeff, hbar=0):
    add_term(acc, tsp, clusters, coeff, hbar=hbar)


def set_partitions_list(items):
    if not items:
        return [[]]
    out = []
    first, rest = items[0], items[1:]
    for part in set_partitions_list(rest):
        for i in range(len(part)):
            out.append(part[:i] + [[first] + part[i]] + part[i + 1:])
        out.append([[first]] + part)
    return out


def forest_check(n_clusters, n_blocks, edges):
    """Acyclic iff every component satisfies V = E + 1 (counted by DFS)."""
    adj = {}
    for (c, b) in edges:
        adj.setdefault(("c", c), []).append(("b", b))
        adj.setdefault(("b", b), []).append(("c", c))
    nodes = ([("c", i) for i in range(n_clusters)] +
             [("b", i) for i in range(n_blocks)])
    seen = set()
    for start in nodes:
        if start in seen:
            continue
        stack, comp_nodes = [start], set()
        while stack:
            v = stack.pop()
            if v in comp_nodes:
                continue
            comp_nodes.add(v)
            stack.extend(adj.get(v, []))
        seen |= comp_nodes
        comp_edges = sum(1 for (c, b) in edges if ("c", c) in comp_nodes)
        if comp_edges != len(comp_nodes) - 1:
            return False
    return True


def components(n_clusters, n_blocks, edges):
    """Map each node to a component id (the smallest node in DFS order)."""
    adj = {}
    for (c, b) in edges:
        adj.setdefault(("c", c), []).append(("b", b))
        adj.setdefault(("b", b), []).append(("c", c))
    nodes = ([("c", i) for i in range(n_clusters)] +
             [("b", i) for i in range(n_blocks)])
    comp = {}
    cid = 0
    for start in nodes:
        if start in comp:
            continue
        stack = [start]
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp[v] = cid
            stack.extend(adj.get(v, []))
        cid += 1
    return comp


def random_table(rng, sp, max_k=3, max_l=3, n_entries=4, parity=1,
                 max_letters=4):
    """A sparse random operation table respecting parity (not a valid
    structure in general; used for two-path agreement tests)."""
    rows = {}
    tries = 0
    while len(rows) < n_entries and tries < 60:
        tries += 1
        k = rng.randint(1, max_k)
        letters = tuple(sorted(rng.randrange(len(sp)) for _ in range(k)))
        w_in, sgn = normalize_word(sp, letters)
        if sgn == 0:
            continue
        in_par = sp.word_parity(w_in.letters)
        l = rng.randint(0, max_l)
        out_terms = {}
        for _ in range(rng.randint(1, 2)):
            out = tuple(sorted(rng.randrange(len(sp)) for _ in range(l)))
            w_out, osgn = normalize_word(sp, out)
            if osgn == 0:
                continue
            if sp.word_parity(w_out.letters) != (in_par + parity) % 2:
                continue
            out_terms[w_out] = Fraction(rng.randint(-3, 3))
        elem = Element(out_terms)
        if not elem:
            continue
        if (k, l, w_in) in rows:
            continue
        rows[(k, l, w_in)] = elem
    entries = [(k, l, w, e) for (k, l, w), e in rows.items()]
    return OperationTable(sp, parity, entries, complete=True)


def random_space(rng, n=None):
    n = n if n is not None else rng.randint(1, 4)
    return GradedSpace([Generator("g%d" % i, rng.randrange(2))
                        for i in range(n)])


def oracle_multi(sp, tables, ew):
    """Independent multi-operation oracle: one global permutation into
    per-component arrangement, entries applied in op order with passing
    signs, a second regroup permutation for the outputs."""
    clusters = ew.clusters
    n = len(clusters)
    flat, owner = [], []
    for ci, c in enumerate(clusters):
        for l in c.letters:
            flat.append(l)
            owner.append(ci)
    pars = [sp.parities[i] for i in flat]
    acc = {}

    def assign(op_idx, used, chosen):
        if op_idx == len(tables):
            emit(used, chosen)
            return
        table_, _ = tables[op_idx]
        ks = sorted({k for (k, l) in table_.cells})
        for k in ks:
            for sel in itertools.combinations(
                    [p for p in range(len(flat)) if p not in used], k):
                owners = [owner[p] for p in sel]
                if len(set(owners)) != len(owners):
                    continue
                assign(op_idx + 1, used | set(sel), chosen + [sel])

    def emit(used, chosen):
        edges = [(owner[p], oi) for oi, sel in enumerate(chosen) for p in sel]
        if not forest_check(n, len(chosen), edges):
            return
        comp = components(n, len(chosen), edges)
        comp_order = sorted({comp[("c", ci)] for ci in range(n)})
        leftovers_by_comp = {cid: [] for cid in comp_order}
        for p in range(len(flat)):
            if p not in used:
                leftovers_by_comp[comp[("c", owner[p])]].append(p)
        perm = [p for sel in chosen for p in sel]
        for cid in comp_order:
            perm += leftovers_by_comp[cid]
        sign = inversion_sign(pars, perm)
        if sign == 0:
            return
        prefix_par = 0
        factors = []
        for oi, sel in enumerate(chosen):
            table_, parity = tables[oi]
            srt, s = bubble_normalize(sp, [flat[p] for p in sel])
            if s == 0:
                return
            if parity % 2 and prefix_par % 2:
                sign_local = -1
            else:
                sign_local = 1
            prefix_par += sum(pars[p] for p in sel)
            ent = table_.query(len(sel), Word(tuple(srt)))
            if not ent:
                return
            factors.append((s * sign_local, ent))
        for combo in itertools.product(
                *[list(e.terms.items()) for _, e in factors]):
            coeff = Fraction(1) * sign
            for (s, _), (_, c_out) in zip(factors, combo):
                coeff = coeff * s * c_out
            outs = [w for (w, _) in combo]
            out_pars = [sum(sp.parities[i] for i in w.letters) % 2
                        for w in outs]
            # regroup outputs in front of their component's leftovers
            items_pars = out_pars + [pars[p] for cid in comp_order
                                     for p in leftovers_by_comp[cid]]
            target = []
            pos_left = {}
            base = len(chosen)
            for cid in comp_order:
                pos_left[cid] = []
                for p in leftovers_by_comp[cid]:
                    pos_left[cid].append(base)
                    base += 1
            out_clusters = []
            for cid in comp_order:
                ops_here = [oi for oi in range(len(chosen))
                            if comp[("b", oi)] == cid]
                letters_here = []
                for oi in ops_here:
                    target.append(oi)
                    letters_here.extend(outs[oi].letters)
                for idx, p in zip(pos_left[cid], leftovers_by_comp[cid]):
                    target.append(idx)
                    letters_here.append(flat[p])
                if ops_here:
                    out_clusters.append(letters_here)
                else:
                    # untouched clusters pass through one by one
                    by_cluster = {}
                    for p in leftovers_by_comp[cid]:
                        by_cluster.setdefault(owner[p], []).append(flat[p])
                    for ci in sorted(by_cluster):
                        out_clusters.append(by_cluster[ci])
                    # unit clusters in this component
                    for ci in range(n):
                        if comp[("c", ci)] == cid and len(clusters[ci]) == 0:
                            out_clusters.append([])
            # unit clusters in op components were consumed into the merge
            for ci in range(n):
                cid = comp[("c", ci)]
                if len(clusters[ci]) == 0 and any(
                        comp[("b", oi)] == cid for oi in range(len(chosen))):
                    raise AssertionError("operations cannot touch units")
            coeff = coeff * inversion_sign(items_pars, target)
            if not coeff:
                continue
            add_term(acc, sp, out_clusters, coeff, hbar=ew.hbar)

    assign(0, frozenset(), [])
    return EElement(acc)
