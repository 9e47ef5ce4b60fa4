"""Graded generators, symmetric words and Koszul sign bookkeeping.

Everything downstream works over a fixed finite list of generators with a
Z/2 parity.  Inner words (elements of the symmetric algebra on the space)
are stored as sorted tuples of generator indices; outer words are sorted
tuples of inner words together with an hbar exponent.  All normalization
signs follow the Koszul-Quillen convention: transposing two odd items
costs a sign, and a repeated odd item kills the monomial.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


class Generator:
    """A named generator with Z/2 parity, optional integer grade and action."""

    __slots__ = ("name", "parity", "zgrade", "action")

    def __init__(self, name, parity, zgrade=None, action=None):
        if parity not in (0, 1):
            raise ValueError("parity must be 0 or 1, got %r" % (parity,))
        if zgrade is not None and zgrade % 2 != parity:
            raise ValueError("generator %s: zgrade %d does not match parity %d"
                             % (name, zgrade, parity))
        if action is not None:
            action = Fraction(action)
            if action <= 0:
                raise ValueError("generator %s: action must be positive" % name)
        self.name = str(name)
        self.parity = parity
        self.zgrade = zgrade
        self.action = action

    def __repr__(self):
        return "Generator(%r, parity=%d)" % (self.name, self.parity)


class GradedSpace:
    """An ordered list of generators; declaration order is the canonical order."""

    def __init__(self, generators):
        gens = tuple(generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        self.generators = gens
        self._index = {g.name: i for i, g in enumerate(gens)}
        self.parities = tuple(g.parity for g in gens)

    def __len__(self):
        return len(self.generators)

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError("unknown generator %r" % (name,)) from None

    def parity_of(self, idx):
        return self.parities[idx]

    def word_parity(self, letters):
        return sum(self.parities[i] for i in letters) % 2

    def word_action(self, letters):
        total = Fraction(0)
        for i in letters:
            a = self.generators[i].action
            if a is None:
                raise ValueError("generator %s has no action" % self.generators[i].name)
            total += a
        return total

    def all_even(self):
        return all(p == 0 for p in self.parities)

    def min_action(self):
        acts = [g.action for g in self.generators]
        if any(a is None for a in acts) or not acts:
            return None
        return min(acts)


class Word:
    """An inner symmetric word: a sorted tuple of generator indices."""

    __slots__ = ("letters",)

    def __init__(self, letters):
        self.letters = tuple(letters)

    def key(self):
        return (len(self.letters), self.letters)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(("W", self.letters))

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        return "Word%r" % (self.letters,)


UNIT_WORD = Word(())


class EWord:
    """An outer word: a sorted tuple of clusters (Words) and an hbar exponent."""

    __slots__ = ("clusters", "hbar")

    def __init__(self, clusters, hbar=0):
        if not clusters:
            raise ValueError("EWord needs at least one cluster")
        if hbar < 0:
            raise ValueError("negative hbar exponent")
        self.clusters = tuple(clusters)
        self.hbar = hbar

    def key(self):
        return (self.hbar, len(self.clusters),
                tuple(c.key() for c in self.clusters))

    def letter_count(self):
        return sum(len(c) for c in self.clusters)

    def __eq__(self, other):
        return (isinstance(other, EWord) and self.clusters == other.clusters
                and self.hbar == other.hbar)

    def __hash__(self):
        return hash(("E", self.clusters, self.hbar))

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        return "EWord(%r, hbar=%d)" % (self.clusters, self.hbar)


UNIT_EWORD = EWord((UNIT_WORD,))


def sort_with_sign(items, parities, keys=None):
    """Stable-sort graded items, returning (sorted, koszul sign).

    sign is +1/-1 from odd-odd crossings, or 0 when two equal odd items
    occur (the monomial vanishes in the graded symmetric algebra).
    """
    n = len(items)
    if keys is None:
        keys = items
    sign = 1
    for i in range(n):
        for j in range(i + 1, n):
            if keys[i] > keys[j]:
                if parities[i] and parities[j]:
                    sign = -sign
            elif keys[i] == keys[j] and parities[i] and parities[j]:
                return None, 0
    order = sorted(range(n), key=lambda t: (keys[t], t))
    return [items[t] for t in order], sign


def selection_sign(parities, selected):
    """Koszul sign for moving the selected positions to the front.

    Both the selected and the unselected items keep their relative order;
    the sign counts odd-odd crossings of (unselected, selected) pairs.
    """
    sign = 1
    odd_unselected_seen = 0
    sel = set(selected)
    for pos, par in enumerate(parities):
        if pos in sel:
            if par and odd_unselected_seen % 2:
                sign = -sign
        elif par:
            odd_unselected_seen += 1
    return sign


def koszul_pass_sign(operator_parity, prefix_parities):
    """Sign for moving an operator of the given parity past a graded prefix."""
    if operator_parity % 2 == 0:
        return 1
    return -1 if sum(prefix_parities) % 2 else 1


def normalize_word(space, letters):
    """Sort a letter sequence into a Word, with the Koszul sign.

    Letters may be generator names or indices.  Returns (word, sign) where
    sign is 0 when a repeated odd generator makes the monomial vanish.
    """
    idx = tuple(space.index(l) if isinstance(l, str) else int(l) for l in letters)
    for i in idx:
        if not 0 <= i < len(space):
            raise KeyError("generator index %d out of range" % i)
    pars = [space.parities[i] for i in idx]
    srt, sign = sort_with_sign(list(idx), pars)
    if sign == 0:
        return Word(tuple(sorted(idx))), 0
    return Word(tuple(srt)), sign


def normalize_clusters(space, clusters, hbar=0):
    """Sort clusters into an EWord, with the Koszul sign (0 if it vanishes)."""
    pars = [space.word_parity(c.letters) for c in clusters]
    keys = [c.key() for c in clusters]
    srt, sign = sort_with_sign(list(clusters), pars, keys=keys)
    if sign == 0:
        return EWord(tuple(sorted(clusters, key=lambda c: c.key())), hbar), 0
    return EWord(tuple(srt), hbar), sign


class Element:
    """A finite Q-linear combination of Words; zero coefficients are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        data = {}
        for w, c in (terms.items() if isinstance(terms, dict) else terms):
            if c:
                data[w] = data.get(w, 0) + c
                if not data[w]:
                    del data[w]
        self.terms = data

    @classmethod
    def monomial(cls, word, coeff=Fraction(1)):
        e = cls()
        if coeff:
            e.terms[word] = coeff
        return e

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, Element) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
            if not out[w]:
                del out[w]
        return Element(out)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        if not scalar:
            return Element()
        return Element({w: scalar * c for w, c in self.terms.items()})

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda t: t[0].key()))

    def __repr__(self):
        return "Element(%r)" % (self.terms,)


class EElement:
    """A finite Q-linear combination of EWords."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        data = {}
        for w, c in (terms.items() if isinstance(terms, dict) else terms):
            if c:
                data[w] = data.get(w, 0) + c
                if not data[w]:
                    del data[w]
        self.terms = data

    @classmethod
    def monomial(cls, eword, coeff=Fraction(1)):
        e = cls()
        if coeff:
            e.terms[eword] = coeff
        return e

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, EElement) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
            if not out[w]:
                del out[w]
        return EElement(out)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        if not scalar:
            return EElement()
        return EElement({w: scalar * c for w, c in self.terms.items()})

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda t: t[0].key()))

    def unit_coefficient(self):
        return self.terms.get(UNIT_EWORD, Fraction(0))

    def __repr__(self):
        return "EElement(%r)" % (self.terms,)


def _words_upto(space, max_letters, max_action, max_len=None):
    limit = max_letters if max_len is None else min(max_letters, max_len)
    out = [UNIT_WORD]
    n = len(space)
    for k in range(1, limit + 1):
        for combo in itertools.combinations_with_replacement(range(n), k):
            w, sign = normalize_word(space, combo)
            if sign == 0:
                continue
            if max_action is not None and space.word_action(combo) > max_action:
                continue
            out.append(w)
    return out


def enumerate_basis(space, max_letters, max_action=None, outer_components=None,
                    allow_units=True, max_cluster_letters=None):
    """All normalized Words, or EWords when outer_components is given.

    Words: every multiset of generators with at most max_letters letters and
    total action at most max_action (the empty word included).  EWords: at
    most outer_components clusters, unit clusters permitted unless
    allow_units is false, optionally capping each cluster's letter count.
    Zero monomials (repeated odd letters or repeated odd clusters) are
    skipped.  Output order is deterministic.
    """
    if max_letters < 0:
        raise ValueError("max_letters must be nonnegative")
    if max_action is not None:
        max_action = Fraction(max_action)
        for g in space.generators:
            if g.action is None:
                raise ValueError("max_action given but generator %s has no action"
                                 % g.name)
    words = _words_upto(space, max_letters, max_action, max_cluster_letters)
    if outer_components is None:
        return sorted(words, key=lambda w: w.key())

    nonunit = [w for w in words if len(w) > 0]
    multisets = [[]]

    def extend(prefix, start, letters_left, action_left):
        for i in range(start, len(nonunit)):
            w = nonunit[i]
            if len(w) > letters_left:
                continue
            act = space.word_action(w.letters) if max_action is not None else None
            if act is not None and act > action_left:
                continue
            prefix.append(w)
            multisets.append(list(prefix))
            if len(prefix) < outer_components:
                extend(prefix, i, letters_left - len(w),
                       action_left - act if act is not None else action_left)
            prefix.pop()

    extend([], 0, max_letters, max_action)
    results = {}
    for ms in multisets:
        max_units = (outer_components - len(ms)) if allow_units else 0
        lo_units = 0 if ms else 1
        for n_units in range(lo_units, max_units + 1):
            ew, sign = normalize_clusters(space, tuple(ms) + (UNIT_WORD,) * n_units)
            if sign != 0:
                results[ew] = None
    return sorted(results, key=lambda e: e.key())


def eword_parity(space, eword):
    return sum(space.word_parity(c.letters) for c in eword.clusters) % 2


def eword_action(space, eword):
    return sum((space.word_action(c.letters) for c in eword.clusters), Fraction(0))
