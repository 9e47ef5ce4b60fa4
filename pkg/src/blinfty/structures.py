"""Operation tables, algebras with a squared-zero coderivation, morphisms,
augmentations, linearization and pointed maps."""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import assembly
from .errors import (IncompleteTableError, InternalInconsistencyError,
                     StructureError)
from .words import (EElement, Element, EWord, GradedSpace, UNIT_WORD, Word,
                    enumerate_basis, normalize_clusters, normalize_word)


class Bounds:
    """A finite search window: letter count, action, outer word length."""

    def __init__(self, max_letters, max_action=None, word_bound=None,
                 hbar_max=None, action_drop=False):
        self.max_letters = int(max_letters)
        self.max_action = Fraction(max_action) if max_action is not None else None
        self.word_bound = int(word_bound) if word_bound is not None else None
        self.hbar_max = int(hbar_max) if hbar_max is not None else None
        self.action_drop = bool(action_drop)

    def outer(self):
        return self.word_bound if self.word_bound is not None else self.max_letters

    def __repr__(self):
        parts = ["max_letters=%d" % self.max_letters]
        if self.max_action is not None:
            parts.append("max_action=%s" % self.max_action)
        if self.word_bound is not None:
            parts.append("word_bound=%d" % self.word_bound)
        if self.hbar_max is not None:
            parts.append("hbar_max=%d" % self.hbar_max)
        if self.action_drop:
            parts.append("action_drop")
        return "Bounds(%s)" % ", ".join(parts)


class OperationTable:
    """A sparse family of maps S^k(source) -> S^l(target), fixed parity.

    entries: iterable of (k, l, input Word, output Element supported in
    length l).  complete=True means absent cells are zero everywhere;
    otherwise cells with k <= max_k are zero when absent and queries beyond
    max_k raise IncompleteTableError.
    """

    def __init__(self, space, parity, entries=(), complete=True, max_k=None,
                 target=None, action_drop=False):
        self.space = space
        self.target = target if target is not None else space
        self.parity = parity % 2
        self.complete = bool(complete)
        self.action_drop = bool(action_drop)
        self.cells = {}
        by_k = {}
        top_k = 0
        for (k, l, w_in, elem) in entries:
            if k < 1:
                raise StructureError("operation arity k must be >= 1")
            if not isinstance(elem, Element):
                raise StructureError("entry output must be an Element")
            if len(w_in) != k:
                raise StructureError("input %r has length != k=%d" % (w_in, k))
            chk, sgn = normalize_word(space, w_in.letters)
            if sgn != 1 or chk != w_in:
                raise StructureError("input %r is not normalized" % (w_in,))
            if not elem:
                continue
            in_par = space.word_parity(w_in.letters)
            for w_out, c in elem.terms.items():
                if len(w_out) != l:
                    raise StructureError(
                        "output %r not of declared length l=%d" % (w_out, l))
                if self.target.word_parity(w_out.letters) != (in_par + self.parity) % 2:
                    raise StructureError(
                        "entry (%d,%d) %r violates parity" % (k, l, w_in))
                if self.action_drop:
                    if self.target.word_action(w_out.letters) > \
                            space.word_action(w_in.letters):
                        raise StructureError(
                            "entry (%d,%d) %r raises action" % (k, l, w_in))
            if (k, l) in self.cells and w_in in self.cells[(k, l)]:
                raise StructureError("duplicate entry (%d,%d) %r" % (k, l, w_in))
            self.cells.setdefault((k, l), {})[w_in] = elem
            cur = by_k.setdefault(k, {}).get(w_in, Element())
            by_k[k][w_in] = cur + elem
            top_k = max(top_k, k)
        self._by_k = by_k
        self.max_k = top_k if max_k is None else max(int(max_k), top_k)
        self.max_l = max((l for (_, l) in self.cells), default=0)

    def input_sizes(self):
        return sorted(self._by_k)

    def covers(self, k):
        return self.complete or k <= self.max_k

    def query(self, k, word):
        if not self.covers(k):
            raise IncompleteTableError(k, word)
        return self._by_k.get(k, {}).get(word, Element())

    def is_zero(self):
        return not self._by_k

    def sub_table(self, keep):
        """A new table from the cells (k,l) selected by the predicate."""
        entries = [(k, l, w, e) for (k, l), cell in self.cells.items()
                   if keep(k, l) for w, e in cell.items()]
        return OperationTable(self.space, self.parity, entries,
                              complete=self.complete, max_k=self.max_k,
                              target=self.target, action_drop=self.action_drop)

    def sorted_entries(self):
        out = []
        for (k, l) in sorted(self.cells):
            for w in sorted(self.cells[(k, l)], key=lambda w: w.key()):
                out.append((k, l, w, self.cells[(k, l)][w]))
        return out

    def __eq__(self, other):
        return (isinstance(other, OperationTable) and self.parity == other.parity
                and self.cells == other.cells)


def identity_table(space):
    entries = [(1, 1, Word((i,)), Element.monomial(Word((i,))))
               for i in range(len(space))]
    return OperationTable(space, 0, entries, complete=True)


TRIVIAL_SPACE = GradedSpace(())


def zero_table(space, parity=1, target=None):
    return OperationTable(space, parity, (), complete=True, target=target)


class VerifyStatus:
    """unchecked / verified-to-bounds / failed(witness)."""

    def __init__(self, ok, bounds=None, witness=None):
        self.ok = ok
        self.bounds = bounds
        self.witness = witness

    def __bool__(self):
        return bool(self.ok)

    def __repr__(self):
        if self.ok:
            return "VerifyStatus(verified, %r)" % (self.bounds,)
        return "VerifyStatus(failed, witness=%r)" % (self.witness,)


class BLAlgebra:
    """A space with a parity-1 operation table assembling to a coderivation."""

    def __init__(self, space, table):
        if table.parity != 1:
            raise StructureError("structure table must have parity 1")
        self.space = space
        self.table = table
        self.verified = None  # cache of the last check_structure result

    def __repr__(self):
        return "BLAlgebra(%d generators, %d cells)" % (
            len(self.space), len(self.table.cells))


TRIVIAL_ALGEBRA = BLAlgebra(TRIVIAL_SPACE, zero_table(TRIVIAL_SPACE))


class BLMorphism:
    def __init__(self, source, target, table):
        if table.parity != 0:
            raise StructureError("morphism table must have parity 0")
        self.source = source
        self.target = target
        self.table = table
        self.verified = None


class Augmentation(BLMorphism):
    """A morphism to the trivial algebra, stored as (k,0) functionals."""

    def __init__(self, algebra, table):
        if any(l != 0 for (_, l) in table.cells):
            raise StructureError("augmentation entries must have l = 0")
        super().__init__(algebra, TRIVIAL_ALGEBRA, table)


class PointedMap:
    def __init__(self, algebra, table):
        self.algebra = algebra
        self.table = table
        self.parity = table.parity
        self.verified = None


def word_to_singletons(word):
    """The inclusion S^kV -> odot^k V: one letter per cluster."""
    return EWord(tuple(Word((i,)) for i in word.letters))


def apply_hat_p(alg, x, bounds=None):
    """Evaluate the assembled coderivation on an outer element."""
    return apply_table_coderivation(alg.space, alg.table, x)


def apply_table_coderivation(space, table, x):
    for ew in x.terms:
        nonempty = sum(1 for c in ew.clusters if len(c) > 0)
        if not table.complete and nonempty > table.max_k:
            raise IncompleteTableError(nonempty)
    return assembly.apply_coderivation(space, table, x)


def apply_hat_phi(mor, x, bounds=None):
    """Evaluate the assembled morphism on an outer element."""
    for ew in x.terms:
        if not mor.table.complete and ew.letter_count() > mor.table.max_k:
            raise IncompleteTableError(ew.letter_count())
    return assembly.apply_morphism(mor.source.space, mor.table, x,
                                   target_space=mor.target.space)


def pi_1l(x, l):
    """Project an outer element to its single-cluster length-l part."""
    out = Element()
    for ew, c in x.terms.items():
        if len(ew.clusters) == 1 and len(ew.clusters[0]) == l and ew.hbar == 0:
            out = out + Element.monomial(ew.clusters[0], c)
    return out


def pi_single_cluster(x):
    """All single-cluster parts, keyed by inner length."""
    out = {}
    for ew, c in x.terms.items():
        if len(ew.clusters) == 1 and ew.hbar == 0:
            out.setdefault(len(ew.clusters[0]), Element())
            out[len(ew.clusters[0])] = \
                out[len(ew.clusters[0])] + Element.monomial(ew.clusters[0], c)
    return {l: e for l, e in out.items() if e}


def two_level(alg, k, l, word, bounds=None):
    """Sum of all connected two-level gluings: pi_{1,l} of p-hat squared."""
    if len(word) != k:
        raise ValueError("input word has length %d, expected k=%d" % (len(word), k))
    x = EElement.monomial(word_to_singletons(word))
    y = apply_hat_p(alg, x)
    z = apply_hat_p(alg, y)
    return pi_1l(z, l)


def _two_level_all(alg, word):
    x = EElement.monomial(word_to_singletons(word))
    z = apply_hat_p(alg, apply_hat_p(alg, x))
    return pi_single_cluster(z)


def _thread_count():
    raw = os.environ.get("BLINFTY_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def check_structure(alg, bounds):
    """Verify every two-level cell within bounds vanishes.

    On failure returns the first witness cell (k, l, word); on success the
    algebra records verified-to-bounds.
    """
    words = [w for w in enumerate_basis(alg.space, bounds.max_letters,
                                        bounds.max_action) if len(w) >= 1]
    words.sort(key=lambda w: w.key())

    def cell(word):
        res = _two_level_all(alg, word)
        if res:
            l = min(res)
            return (len(word), l, word, res[l])
        return None

    nthreads = _thread_count()
    if nthreads > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            results = list(pool.map(cell, words))
    else:
        results = [cell(w) for w in words]
    for res in results:
        if res is not None:
            status = VerifyStatus(False, bounds, witness=res[:3])
            alg.verified = status
            return status
    status = VerifyStatus(True, bounds)
    alg.verified = status
    return status


def _basis_ewords(space, bounds, allow_units=True):
    return enumerate_basis(space, bounds.max_letters, bounds.max_action,
                           outer_components=bounds.outer(),
                           allow_units=allow_units)


def check_morphism(mor, bounds):
    """Verify phi-hat o p-hat = p'-hat o phi-hat on basis outer words."""
    if mor.source.verified is None:
        check_structure(mor.source, bounds)
    if mor.target.verified is None and mor.target is not TRIVIAL_ALGEBRA:
        check_structure(mor.target, bounds)
    for ew in _basis_ewords(mor.source.space, bounds):
        x = EElement.monomial(ew)
        lhs = apply_hat_phi(mor, apply_hat_p(mor.source, x))
        rhs = apply_hat_p(mor.target, apply_hat_phi(mor, x))
        if lhs != rhs:
            status = VerifyStatus(False, bounds, witness=ew)
            mor.verified = status
            return status
    status = VerifyStatus(True, bounds)
    mor.verified = status
    return status


def compose(psi, phi, bounds):
    """The composed morphism table, by the unordered-partition formula.

    For each input word, letters are partitioned into blocks mapped by the
    inner morphism, the blocks' outputs become clusters, and the connected
    part of the outer morphism is applied; summing over unordered
    partitions realizes the 1/a! factor without denominators.
    """
    if phi.target is not psi.source:
        raise StructureError("composition type mismatch")
    src = phi.source.space
    mid = phi.target.space
    tgt = psi.target.space
    entries = []
    for word in enumerate_basis(src, bounds.max_letters, bounds.max_action):
        if len(word) < 1:
            continue
        letters = word.letters
        pars = [src.parities[i] for i in letters]
        total = {}
        for part in assembly._set_partitions(list(range(len(letters)))):
            blocks = [sorted(b) for b in part]
            blocks.sort(key=lambda b: b[0])
            flat = [p for b in blocks for p in b]
            sign = assembly._permutation_sign(pars, flat)
            if sign == 0:
                continue
            factors = []
            ok = True
            for b in blocks:
                w_in, n_sign = normalize_word(src, [letters[p] for p in b])
                if n_sign == 0:
                    ok = False
                    break
                if not phi.table.covers(len(b)):
                    raise IncompleteTableError(len(b), w_in)
                ent = phi.table.query(len(b), w_in)
                if not ent:
                    ok = False
                    break
                factors.append((n_sign, ent))
            if not ok:
                continue
            for combo in itertools.product(
                    *[list(e.terms.items()) for _, e in factors]):
                coeff = Fraction(1) * sign
                for (n_sign, _), (_, c_out) in zip(factors, combo):
                    coeff = coeff * n_sign * c_out
                clusters = tuple(w for (w, _) in combo)
                ew, c_sign = normalize_clusters(mid, clusters)
                if c_sign == 0 or not coeff:
                    continue
                mid_x = EElement.monomial(ew, coeff * c_sign)
                res = assembly.apply_morphism(mid, psi.table, mid_x,
                                              target_space=tgt)
                for out_ew, c in res.terms.items():
                    if len(out_ew.clusters) == 1:
                        w_out = out_ew.clusters[0]
                        total[w_out] = total.get(w_out, 0) + c
        elem = Element(total)
        for l in sorted({len(w) for w in elem.terms}):
            part_l = Element({w: c for w, c in elem.terms.items() if len(w) == l})
            entries.append((len(word), l, word, part_l))
    table = OperationTable(src, 0, entries, complete=False,
                           max_k=bounds.max_letters, target=tgt)
    return BLMorphism(phi.source, psi.target, table)


def is_augmentation(eps, alg, bounds):
    """Check the morphism condition into the trivial algebra.

    Parity shortcut: over an all-even space any parity-1 table vanishes,
    so every functional family verifies.
    """
    if alg.space.all_even():
        status = VerifyStatus(True, bounds)
        eps.verified = status
        return status
    for ew in _basis_ewords(alg.space, bounds):
        x = EElement.monomial(ew)
        y = apply_hat_p(alg, x)
        z = assembly.apply_morphism(alg.space, eps.table, y,
                                    target_space=TRIVIAL_SPACE)
        if z:
            status = VerifyStatus(False, bounds, witness=ew)
            eps.verified = status
            return status
    status = VerifyStatus(True, bounds)
    eps.verified = status
    return status


def f_eps(eps, sign=+1):
    """The linearizing change of coordinates: identity plus +-eps constants."""
    if sign not in (1, -1):
        raise ValueError("sign must be +-1")
    space = eps.source.space
    entries = [(1, 1, Word((i,)), Element.monomial(Word((i,))))
               for i in range(len(space))]
    for (k, l, w, e) in eps.table.sorted_entries():
        coeff = sum(e.terms.values())  # supported on the empty word
        entries.append((k, 0, w, Element.monomial(UNIT_WORD, sign * coeff)))
    table = OperationTable(space, 0, entries, complete=eps.table.complete,
                           max_k=max(eps.table.max_k, 1))
    return BLMorphism(eps.source, eps.source, table)


def _f_hat(alg, eps, sign, x):
    mor = f_eps(eps, sign)
    return apply_hat_phi(mor, x)


def linearize(alg, eps, bounds):
    """The conjugated structure table with all constant terms killed.

    Computes pi_{1,l} o F_eps-hat o p-hat on split words and asserts that
    the l=0 components vanish; a nonzero constant term signals a bad
    augmentation or a bounds leak.
    """
    table = _linearize_table(alg.space, alg.table, eps, bounds, parity=1,
                             forbid_constants=True)
    return table


def _linearize_table(space, optable, eps, bounds, parity, forbid_constants):
    f_mor = f_eps(eps, +1)
    entries = []
    for word in enumerate_basis(space, bounds.max_letters, bounds.max_action):
        if len(word) < 1:
            continue
        x = EElement.monomial(word_to_singletons(word))
        y = assembly.apply_coderivation(space, optable, x)
        z = apply_hat_phi(f_mor, y)
        parts = pi_single_cluster(z)
        for l, elem in sorted(parts.items()):
            if l == 0 and forbid_constants:
                raise InternalInconsistencyError(
                    "nonzero constant term at input %r: %r" % (word, elem))
            entries.append((len(word), l, word, elem))
    return OperationTable(space, parity, entries, complete=False,
                          max_k=bounds.max_letters)


def linearize_pointed(pmap, alg, eps, bounds):
    """Linearize a pointed family; constant terms survive by design."""
    return _linearize_table(alg.space, pmap.table, eps, bounds,
                            parity=pmap.parity, forbid_constants=False)


def ell_table(lin_table):
    """The l=1 part of a linearized table: the induced L-infinity structure."""
    return lin_table.sub_table(lambda k, l: l == 1)


def apply_hat_pointed(pmap, alg, x, bounds=None):
    return apply_table_coderivation(alg.space, pmap.table, x)


def check_pointed(pmap, alg, bounds):
    """Verify the graded commutation of the pointed map with the structure."""
    sgn = -1 if pmap.parity % 2 else 1
    for ew in _basis_ewords(alg.space, bounds):
        x = EElement.monomial(ew)
        lhs = apply_hat_pointed(pmap, alg, apply_hat_p(alg, x))
        rhs = apply_hat_p(alg, apply_hat_pointed(pmap, alg, x))
        if lhs != sgn * rhs:
            status = VerifyStatus(False, bounds, witness=ew)
            pmap.verified = status
            return status
    status = VerifyStatus(True, bounds)
    pmap.verified = status
    return status


def apply_hat_phi_bullet(mor, phi_bullet_table, x, bullet_parity):
    """The pointed-morphism assembly: exactly one marked component."""
    return assembly.apply_morphism(mor.source.space, mor.table, x,
                                   bullet_table=phi_bullet_table,
                                   bullet_parity=bullet_parity,
                                   target_space=mor.target.space)


def check_compatibility(phi, p_bullet, q_bullet, phi_bullet_table, bounds):
    """Verify the four-term homotopy identity on basis outer words.

    phi: morphism between the two algebras; p_bullet / q_bullet pointed
    maps on source / target of equal parity d; phi_bullet has parity d+1.
    """
    d = p_bullet.parity
    if q_bullet.parity != d:
        raise StructureError("pointed maps must share parity")
    bp = (d + 1) % 2
    sq = -1 if d % 2 else 1
    sphi = -1 if bp % 2 else 1
    src, tgt = phi.source, phi.target
    for ew in _basis_ewords(src.space, bounds):
        x = EElement.monomial(ew)
        phix = apply_hat_phi(phi, x)
        lhs = (apply_hat_pointed(q_bullet, tgt, phix)
               - sq * apply_hat_phi(phi, apply_hat_pointed(p_bullet, src, x)))
        bx = apply_hat_phi_bullet(phi, phi_bullet_table, x, bp)
        bpx = apply_hat_phi_bullet(phi, phi_bullet_table,
                                   apply_hat_p(src, x), bp)
        rhs = apply_hat_p(tgt, bx) - sphi * bpx
        if lhs != rhs:
            return VerifyStatus(False, bounds, witness=ew)
    return VerifyStatus(True, bounds)
