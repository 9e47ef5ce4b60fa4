"""Hierarchy invariants: bar complexes, torsion, planarity orders, widths,
multi-point orders, and semi-dilation from a supplied endomorphism."""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import assembly
from .errors import (InconclusiveError, InternalInconsistencyError,
                     NotNilpotentError, PlanarityNotOneError,
                     PlanarityZeroError, StructureError, WindowLeakError)
from .linalg import ChainComplex, kernel_basis, rank, solve_linear
from .structures import (Augmentation, OperationTable, PointedMap,
                         apply_hat_p, apply_hat_phi, apply_table_coderivation,
                         check_structure, compose, ell_table, f_eps,
                         is_augmentation, linearize, linearize_pointed,
                         pi_single_cluster, word_to_singletons)
from .symbolic import SymPoly
from .words import (EElement, Element, GradedSpace, UNIT_EWORD, UNIT_WORD,
                    enumerate_basis, eword_parity, normalize_word)


class TorsionAnswer:
    """value kind: 'exact' | 'at-most' | 'not-found'; level when found."""

    def __init__(self, kind, level=None, certificate=None, bounds=None):
        self.kind = kind
        self.level = level
        self.certificate = certificate
        self.bounds = bounds

    def found(self):
        return self.kind in ("exact", "at-most")

    def __repr__(self):
        if self.found():
            return "TorsionAnswer(%s %d)" % (self.kind, self.level)
        return "TorsionAnswer(not-found-within %r)" % (self.bounds,)


class OrderAnswer:
    def __init__(self, kind, level=None, certificate=None, bounds=None):
        self.kind = kind
        self.level = level
        self.certificate = certificate
        self.bounds = bounds

    def found(self):
        return self.kind in ("exact", "at-most")

    def __repr__(self):
        if self.found():
            return "OrderAnswer(%s %d)" % (self.kind, self.level)
        return "OrderAnswer(not-found-within %r)" % (self.bounds,)


class UModule:
    """A parity-0 endomorphism of the generator space, nilpotent on the
    linearized homology; grade -2 when integer grades are present."""

    def __init__(self, space, table, power_bound=None):
        if table.parity != 0:
            raise StructureError("U must have parity 0")
        for (k, l) in table.cells:
            if (k, l) != (1, 1):
                raise StructureError("U must be a linear endomorphism")
        if all(g.zgrade is not None for g in space.generators):
            for (_, _), cell in table.cells.items():
                for w_in, elem in cell.items():
                    zin = space.generators[w_in.letters[0]].zgrade
                    for w_out in elem.terms:
                        zout = space.generators[w_out.letters[0]].zgrade
                        if zout != zin - 2:
                            raise StructureError(
                                "U entry %r does not have degree -2" % (w_in,))
        self.space = space
        self.table = table
        self.power_bound = power_bound

    def matrix(self):
        n = len(self.space)
        m = [[Fraction(0)] * n for _ in range(n)]
        for (k, l), cell in self.table.cells.items():
            for w_in, elem in cell.items():
                j = w_in.letters[0]
                for w_out, c in elem.terms.items():
                    m[w_out.letters[0]][j] = c
        return m


# ---------------------------------------------------------------------------
# bar complexes and the torsion search

def build_EkV(alg, k, bounds):
    """The outer bar complex with at most k clusters (units allowed).

    Raises WindowLeakError when the differential leaves the enumerated
    window; enlarge max_letters or supply an action bound with action_drop.
    """
    basis = enumerate_basis(alg.space, bounds.max_letters, bounds.max_action,
                            outer_components=k, allow_units=True)
    index = {ew: i for i, ew in enumerate(basis)}
    columns = {}
    for j, ew in enumerate(basis):
        out = apply_hat_p(alg, EElement.monomial(ew))
        col = {}
        for ew2, c in out.terms.items():
            if ew2 not in index:
                raise WindowLeakError(
                    "image %r of %r outside the basis window" % (ew2, ew))
            col[index[ew2]] = c
        columns[j] = col
    parities = [eword_parity(alg.space, ew) for ew in basis]
    return ChainComplex(basis, columns, parities)


def _solve_hat_p_equals(alg, basis, target_key):
    """Solve p-hat(x) = target over the span of basis; image keys may fall
    outside the window and become extra zero rows."""
    keys = {target_key: 0}
    cols = []
    for ew in basis:
        out = apply_hat_p(alg, EElement.monomial(ew))
        col = {}
        for ew2, c in out.terms.items():
            if ew2 not in keys:
                keys[ew2] = len(keys)
            col[keys[ew2]] = c
        cols.append(col)
    nrows = len(keys)
    A = [[Fraction(0)] * len(basis) for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, c in col.items():
            A[i][j] = c
    b = [Fraction(0)] * nrows
    b[0] = Fraction(1)
    sol, _ = solve_linear(A, b)
    if sol is None:
        return None
    cert = EElement({basis[j]: sol[j] for j in range(len(basis)) if sol[j]})
    return cert


def _level_structurally_closed(table, level):
    """No constant cell with few enough inputs: the unit coefficient of the
    assembled operator vanishes identically on words of <= level clusters."""
    return not any(l == 0 and k <= level for (k, l) in table.cells)


def _level_action_closed(alg, level, bounds):
    """The action-filtration closure of the spec's certified-answer rule:
    within the searched action range the level search was exhaustive."""
    if not (alg.table.action_drop and bounds.max_action is not None):
        return False
    delta = alg.space.min_action()
    if delta is None or delta <= 0:
        return False
    constants = [alg.space.word_action(w.letters)
                 for (k, l), cell in alg.table.cells.items() if l == 0
                 for w in cell]
    if constants and bounds.max_action < max(constants):
        return False
    return bounds.max_letters >= bounds.max_action / delta


def torsion(alg, schedule):
    """Search p-hat(x) = 1 through a schedule of (cluster bound, Bounds).

    The first solvable level k yields value k-1; the answer is 'exact' when
    every smaller level is certified unsolvable, either structurally (no
    constant cells reach it) or by the action-filtration argument, and
    'at-most' otherwise.
    """
    if alg.verified is None or not alg.verified.ok:
        status = check_structure(alg, schedule[-1][1])
        if not status.ok:
            raise StructureError("structure fails: witness %r" % (status.witness,))
    certified = {}
    for (k, bounds) in schedule:
        basis = enumerate_basis(alg.space, bounds.max_letters,
                                bounds.max_action, outer_components=k,
                                allow_units=True)
        cert = _solve_hat_p_equals(alg, basis, UNIT_EWORD)
        if cert is not None:
            exact = all(certified.get(j, _level_structurally_closed(
                alg.table, j)) for j in range(1, k))
            return TorsionAnswer("exact" if exact else "at-most",
                                 k - 1, cert, bounds)
        certified[k] = (_level_structurally_closed(alg.table, k)
                        or _level_action_closed(alg, k, bounds))
    return TorsionAnswer("not-found", bounds=schedule[-1][1])


def default_schedule(max_level, bounds):
    return [(k, bounds) for k in range(1, max_level + 1)]


def verify_torsion_certificate(alg, answer):
    if not answer.found():
        return True
    out = apply_hat_p(alg, answer.certificate)
    if out != EElement.monomial(UNIT_EWORD):
        return False
    return all(len(ew.clusters) <= answer.level + 1
               for ew in answer.certificate.terms)


def torsion_monotone_check(phi, src_answer, bounds):
    """Push a source torsion certificate through the morphism and confirm
    it certifies the target at the same or smaller level."""
    if not src_answer.found():
        raise ValueError("no certificate to transport")
    image = apply_hat_phi(phi, src_answer.certificate)
    ok = apply_hat_p(phi.target, image) == EElement.monomial(UNIT_EWORD)
    tgt_level = max(len(ew.clusters) for ew in image.terms) - 1 if image else 0
    return {
        "transported": ok,
        "source_level": src_answer.level,
        "target_level_bound": tgt_level,
        "monotone": ok and tgt_level <= src_answer.level,
        "certificate": image,
    }


# ---------------------------------------------------------------------------
# planarity orders

def bar_B_k(ell, k, bounds):
    """The inner bar complex on words of length 1..k with the linearized
    bar differential."""
    basis = [w for w in enumerate_basis(ell.space, min(k, bounds.max_letters),
                                        bounds.max_action) if len(w) >= 1]
    index = {w: i for i, w in enumerate(basis)}
    columns = {}
    for j, w in enumerate(basis):
        out = assembly.apply_inner_coderivation(ell.space, ell,
                                                Element.monomial(w))
        col = {}
        for w2, c in out.terms.items():
            if w2 not in index:
                raise WindowLeakError("image %r outside window" % (w2,))
            col[index[w2]] = c
        columns[j] = col
    parities = [ell.space.word_parity(w.letters) for w in basis]
    return ChainComplex(basis, columns, parities)


def _functional_from_constants(lin_pointed, word):
    elem = lin_pointed.query(len(word), word)
    return elem.terms.get(UNIT_WORD, Fraction(0))


def _solve_cycle_functional(basis, d_cols, f_vals):
    """Feasibility of d x = 0 and f(x) = 1 over the basis span."""
    keys = {}
    cols = []
    for col in d_cols:
        cc = {}
        for key, c in col.items():
            if key not in keys:
                keys[key] = len(keys)
            cc[keys[key]] = c
        cols.append(cc)
    nrows = len(keys) + 1
    A = [[Fraction(0)] * len(basis) for _ in range(nrows)]
    for j, cc in enumerate(cols):
        for i, c in cc.items():
            A[i][j] = c
    for j, fv in enumerate(f_vals):
        A[-1][j] = fv
    b = [Fraction(0)] * nrows
    b[-1] = Fraction(1)
    sol, _ = solve_linear(A, b)
    if sol is None:
        return None
    return {basis[j]: sol[j] for j in range(len(basis)) if sol[j]}


def _order_kind(lin_pointed, found_k):
    """'exact' when every level below the found one is structurally closed:
    constant cells with at most that many inputs all vanish."""
    if found_k == 1:
        return "exact"
    if _level_structurally_closed(lin_pointed, found_k - 1):
        return "exact"
    return "at-most"


def order_O(alg, eps, pmap, bounds, lin=None, lpt=None):
    """Least word length whose linearized bar homology hits the constant
    functional value 1."""
    if eps is None:
        raise PlanarityZeroError("order requires an augmentation")
    lin = lin if lin is not None else linearize(alg, eps, bounds)
    lpt = lpt if lpt is not None else linearize_pointed(pmap, alg, eps, bounds)
    ell = ell_table(lin)
    top = bounds.outer()
    for k in range(1, top + 1):
        cx = bar_B_k(ell, k, bounds)
        d_cols = [{cx.basis[i]: c for i, c in cx.columns[j].items()}
                  for j in range(len(cx.basis))]
        f_vals = [_functional_from_constants(lpt, w) for w in cx.basis]
        sol = _solve_cycle_functional(cx.basis, d_cols, f_vals)
        if sol is not None:
            cert = Element(sol)
            # the length-j complexes are finite, so an unrestricted
            # enumeration makes the failed smaller levels conclusive
            exhaustive = (bounds.max_action is None
                          and bounds.max_letters >= k)
            kind = "exact" if exhaustive else _order_kind(lpt, k)
            return OrderAnswer(kind, k, cert, bounds)
    return OrderAnswer("not-found", bounds=bounds)


def order_O_tilde(alg, eps, pmap, bounds, lin=None, lpt=None):
    """The unreduced variant: outer words of nonempty clusters, with the
    unit-coefficient functional of the linearized pointed operator."""
    if eps is None:
        raise PlanarityZeroError("order requires an augmentation")
    lin = lin if lin is not None else linearize(alg, eps, bounds)
    lpt = lpt if lpt is not None else linearize_pointed(pmap, alg, eps, bounds)
    sp = alg.space
    top = bounds.outer()
    for k in range(1, top + 1):
        basis = enumerate_basis(sp, bounds.max_letters, bounds.max_action,
                                outer_components=k, allow_units=False)
        d_cols = []
        f_vals = []
        for ew in basis:
            x = EElement.monomial(ew)
            out = apply_table_coderivation(sp, lin, x)
            d_cols.append(dict(out.terms))
            fv = apply_table_coderivation(sp, lpt, x).unit_coefficient()
            f_vals.append(fv)
        sol = _solve_cycle_functional(basis, d_cols, f_vals)
        if sol is not None:
            return OrderAnswer(_order_kind(lpt, k), k, EElement(sol), bounds)
    return OrderAnswer("not-found", bounds=bounds)


def width(eword):
    """Largest m with every cluster cap exceeded: max cluster length - 1."""
    return max(len(c) for c in eword.clusters) - 1


def project_width(x, m):
    """Kill outer words containing a cluster longer than m."""
    return EElement({ew: c for ew, c in x.terms.items()
                     if all(len(cl) <= m for cl in ew.clusters)})


def _multi_linearized(family, alg, eps, bounds):
    """Linearize each constraint-subset table separately."""
    return {frozenset(S): linearize_pointed(PointedMap(alg, tab), alg, eps,
                                            bounds)
            for S, tab in family.items()}


def _set_partitions_of(labels):
    return assembly._set_partitions(sorted(labels))


def apply_multi_pointed_linearized(space, lin_family, m, x):
    """Sum over set partitions of the constraint labels, gluing the
    partition's linearized operators simultaneously."""
    total = EElement()
    for part in _set_partitions_of(range(1, m + 1)):
        tables = []
        missing = False
        for block in sorted(part, key=min):
            key = frozenset(block)
            if key not in lin_family:
                missing = True
                break
            tables.append((lin_family[key], lin_family[key].parity))
        if missing:
            continue
        total = total + assembly.apply_multi_pointed(space, tables, x)
    return total


def order_multi(alg, eps, family, m, bounds):
    """Multi-point order on the width-truncated double bar complex.

    family maps each nonempty subset of {1..m} to its operation table; the
    complex caps every cluster at m letters, and the functional is the unit
    coefficient of the multi-point operator.
    """
    if eps is None:
        raise PlanarityZeroError("order requires an augmentation")
    lin = linearize(alg, eps, bounds)
    lin_family = _multi_linearized(
        {frozenset(S): t for S, t in family.items()}, alg, eps, bounds)
    sp = alg.space
    top = bounds.outer()
    for k in range(1, top + 1):
        basis = enumerate_basis(sp, bounds.max_letters, bounds.max_action,
                                outer_components=k, allow_units=False,
                                max_cluster_letters=m)
        d_cols = []
        f_vals = []
        for ew in basis:
            x = EElement.monomial(ew)
            out = project_width(apply_table_coderivation(sp, lin, x), m)
            d_cols.append(dict(out.terms))
            fv = apply_multi_pointed_linearized(sp, lin_family, m, x) \
                .unit_coefficient()
            f_vals.append(fv)
        sol = _solve_cycle_functional(basis, d_cols, f_vals)
        if sol is not None:
            kind = "exact" if k == 1 else "at-most"
            return OrderAnswer(kind, k, EElement(sol), bounds)
    return OrderAnswer("not-found", bounds=bounds)


def order_multi_tilde(alg, eps, family, m, bounds):
    """The untruncated multi-point variant on outer words."""
    if eps is None:
        raise PlanarityZeroError("order requires an augmentation")
    lin = linearize(alg, eps, bounds)
    lin_family = _multi_linearized(
        {frozenset(S): t for S, t in family.items()}, alg, eps, bounds)
    sp = alg.space
    top = bounds.outer()
    for k in range(1, top + 1):
        basis = enumerate_basis(sp, bounds.max_letters, bounds.max_action,
                                outer_components=k, allow_units=False)
        d_cols = []
        f_vals = []
        for ew in basis:
            x = EElement.monomial(ew)
            out = apply_table_coderivation(sp, lin, x)
            d_cols.append(dict(out.terms))
            fv = apply_multi_pointed_linearized(sp, lin_family, m, x) \
                .unit_coefficient()
            f_vals.append(fv)
        sol = _solve_cycle_functional(basis, d_cols, f_vals)
        if sol is not None:
            kind = "exact" if k == 1 else "at-most"
            return OrderAnswer(kind, k, EElement(sol), bounds)
    return OrderAnswer("not-found", bounds=bounds)


def order_functoriality_check(phi, p_bullet, q_bullet, eps_target, bounds,
                              src_answer=None):
    """Transport a source order certificate through the linearized morphism
    and confirm it certifies the target order at the same level.

    eps_target is an augmentation of phi.target; the source augmentation is
    its pullback along phi.
    """
    eps_src_mor = compose(eps_target, phi, bounds)
    eps_src = Augmentation(phi.source, eps_src_mor.table)
    if not is_augmentation(eps_src, phi.source, bounds).ok:
        raise StructureError("pulled-back augmentation fails to verify")
    if src_answer is None:
        src_answer = order_O(phi.source, eps_src, p_bullet, bounds)
    if not src_answer.found():
        return {"source": src_answer, "transported": None, "holds": True}
    # phi_eps^{k,l} = pi_{1,l} o F_eps o phi-hat o F_{-eps o phi}
    f_minus_src = f_eps(eps_src, -1)
    f_plus_tgt = f_eps(eps_target, +1)
    sp_src, sp_tgt = phi.source.space, phi.target.space
    phi_eps_entries = {}
    for w in enumerate_basis(sp_src, bounds.max_letters, bounds.max_action):
        if len(w) < 1:
            continue
        x = EElement.monomial(word_to_singletons(w))
        y = apply_hat_phi(f_plus_tgt,
                          apply_hat_phi(phi, apply_hat_phi(f_minus_src, x)))
        for l, elem in pi_single_cluster(y).items():
            if l == 0:
                raise InternalInconsistencyError(
                    "linearized morphism has a constant term at %r" % (w,))
            phi_eps_entries[(len(w), l, w)] = elem
    rows = [(k, l, w, e) for (k, l, w), e in phi_eps_entries.items() if l == 1]
    phi1_eps = OperationTable(sp_src, 0, rows, complete=False,
                              max_k=bounds.max_letters, target=sp_tgt)
    transported = _apply_inner_morphism(sp_src, sp_tgt, phi1_eps,
                                        src_answer.certificate)
    lin_tgt = linearize(phi.target, eps_target, bounds)
    lpt_tgt = linearize_pointed(q_bullet, phi.target, eps_target, bounds)
    ell_tgt = ell_table(lin_tgt)
    closed = not assembly.apply_inner_coderivation(sp_tgt, ell_tgt, transported)
    f_val = sum((_functional_from_constants(lpt_tgt, w) * c
                 for w, c in transported.terms.items()), Fraction(0))
    tgt_level = max((len(w) for w in transported.terms), default=0)
    holds = closed and f_val == 1 and tgt_level <= src_answer.level
    return {
        "source": src_answer,
        "transported": transported,
        "closed": closed,
        "functional_value": f_val,
        "target_level_bound": tgt_level,
        "holds": holds,
    }


def _apply_inner_morphism(src, tgt, table_k1, element):
    """The bar-complex morphism assembled from single-output components:
    sum over letter partitions, one component per block."""
    acc = {}
    for word, coeff in element.terms.items():
        letters = word.letters
        pars = [src.parities[i] for i in letters]
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
                w_in, s = normalize_word(src, [letters[p] for p in b])
                if s == 0:
                    ok = False
                    break
                ent = table_k1.query(len(b), w_in)
                if not ent:
                    ok = False
                    break
                factors.append((s, ent))
            if not ok:
                continue
            for combo in itertools.product(
                    *[list(e.terms.items()) for _, e in factors]):
                c = coeff * sign
                letters_out = []
                for (s, _), (w_out, c_out) in zip(factors, combo):
                    c = c * s * c_out
                    letters_out.extend(w_out.letters)
                w_new, s2 = normalize_word(tgt, letters_out)
                if s2 == 0 or not c:
                    continue
                acc[w_new] = acc.get(w_new, 0) + c * s2
    return Element(acc)


# ---------------------------------------------------------------------------
# semi-dilation

def sd_order(ell1, umod, ell_point, bounds=None):
    """Least k with a linearized homology class of functional value 1
    annihilated by U^(k+1).

    ell1: the (1,1) linear differential table on the generator space;
    ell_point: the (1,0) functional table.  U must commute with the
    differential exactly and be nilpotent on homology.
    """
    sp = umod.space
    n = len(sp)
    D = [[Fraction(0)] * n for _ in range(n)]
    for (k, l), cell in ell1.cells.items():
        if (k, l) != (1, 1):
            raise StructureError("ell1 must be a linear differential")
        for w_in, elem in cell.items():
            for w_out, c in elem.terms.items():
                D[w_out.letters[0]][w_in.letters[0]] = c
    U = umod.matrix()
    f = [Fraction(0)] * n
    for (k, l), cell in ell_point.cells.items():
        if (k, l) != (1, 0):
            raise StructureError("ell_point must be a linear functional")
        for w_in, elem in cell.items():
            f[w_in.letters[0]] = elem.terms.get(UNIT_WORD, Fraction(0))
    if _mat_mul(U, D) != _mat_mul(D, U):
        raise StructureError("U does not commute with the differential")
    if any(x != 0 for x in _vec_mat(f, D)):
        raise StructureError("the functional is not a chain map")
    cycles = kernel_basis(D, n)
    nz = len(cycles)
    # nilpotence of the induced map within dim H steps
    power_bound = umod.power_bound if umod.power_bound is not None else \
        max(1, nz - rank(D))
    Upow = _mat_power(U, power_bound)
    for z in cycles:
        v = _mat_vec(Upow, z)
        sol, _ = solve_linear(D, v)
        if sol is None:
            raise NotNilpotentError(
                "U^%d is nonzero on homology" % power_bound)
    # feasibility of the functional alone
    if _sd_feasible(D, U, f, cycles, power_bound, n) is None:
        raise PlanarityNotOneError("no class with functional value 1")
    for k in range(0, power_bound):
        sol = _sd_feasible(D, U, f, cycles, k + 1, n)
        if sol is not None:
            return k
    raise NotNilpotentError("exhausted the declared power bound")


def _sd_feasible(D, U, f, cycles, upower, n):
    """Exists z in span(cycles), y with f(z) = 1 and U^upower z = D y."""
    ncols = len(cycles) + n
    Upow = _mat_power(U, upower)
    rows = []
    rhs = []
    for i in range(n):
        row = [sum(Upow[i][t] * cycles[j][t] for t in range(n))
               for j in range(len(cycles))]
        row += [-D[i][j] for j in range(n)]
        rows.append(row)
        rhs.append(Fraction(0))
    rows.append([sum(f[t] * cycles[j][t] for t in range(n))
                 for j in range(len(cycles))] + [Fraction(0)] * n)
    rhs.append(Fraction(1))
    sol, _ = solve_linear(rows, rhs)
    return sol


def _mat_mul(A, B):
    n = len(A)
    return [[sum(A[i][t] * B[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)]


def _mat_power(A, p):
    n = len(A)
    out = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
           for i in range(n)]
    for _ in range(p):
        out = _mat_mul(out, A)
    return out


def _mat_vec(A, v):
    return [sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(A))]


def _vec_mat(v, A):
    return [sum(v[i] * A[i][j] for i in range(len(A))) for j in range(len(A))]


# ---------------------------------------------------------------------------
# planarity over a supplied augmentation set

def planarity(alg, augmentations, pmap, bounds, torsion_schedule=None):
    """Max of the order over the supplied augmentations.

    An empty augmentation set is only conclusive when finite torsion
    certifies that no augmentation exists (the empty maximum is zero), or
    when the space is all-even and the symbolic generic-augmentation probe
    shows the order does not depend on the augmentation at all.
    """
    for eps in augmentations:
        if eps.verified is None:
            is_augmentation(eps, alg, bounds)
        if not eps.verified.ok:
            raise StructureError("supplied augmentation fails to verify")
    if not augmentations:
        schedule = torsion_schedule or default_schedule(bounds.outer(), bounds)
        t = torsion(alg, schedule)
        if t.found():
            return OrderAnswer("exact", 0, None, bounds)
        if alg.space.all_even():
            return _planarity_generic_even(alg, pmap, bounds)
        raise InconclusiveError(
            "no augmentations supplied and torsion not certified finite")
    best = None
    for eps in augmentations:
        ans = order_O(alg, eps, pmap, bounds)
        if not ans.found():
            return OrderAnswer("not-found", bounds=bounds)
        if best is None or ans.level > best.level:
            best = ans
    return best


def _symbolic_generic_aug(alg, bounds):
    entries = []
    counter = [0]
    for w in enumerate_basis(alg.space, bounds.max_letters, bounds.max_action):
        if len(w) < 1 or alg.space.word_parity(w.letters) != 0:
            continue
        var = SymPoly.var("e%d" % counter[0])
        counter[0] += 1
        entries.append((len(w), 0, w,
                        Element.monomial(UNIT_WORD, var)))
    tab = OperationTable(alg.space, 0, entries, complete=False,
                         max_k=bounds.max_letters, target=GradedSpace(()))
    return Augmentation(alg, tab)


def _planarity_generic_even(alg, pmap, bounds):
    """All-even shortcut: every functional family is an augmentation, so
    probe with symbolic values; if no assembled coefficient depends on
    them, the zero-augmentation answer is the answer for all of them."""
    from .errors import IncompleteTableError
    eps_sym = _symbolic_generic_aug(alg, bounds)
    try:
        lin = linearize(alg, eps_sym, bounds)
        lpt = linearize_pointed(pmap, alg, eps_sym, bounds)
    except IncompleteTableError as e:
        raise InconclusiveError(
            "generic-augmentation probe exceeded the symbolic window: %s"
            % e) from None
    for tab in (lin, lpt):
        for (k, l), cell in tab.cells.items():
            for w, elem in cell.items():
                for c in elem.terms.values():
                    if isinstance(c, SymPoly) and not c.is_constant():
                        raise InconclusiveError(
                            "order depends on the augmentation at cell "
                            "(%d,%d) %r" % (k, l, w))
    eps0 = Augmentation(alg, OperationTable(alg.space, 0, (),
                                            target=GradedSpace(())))
    return order_O(alg, eps0, pmap, bounds)
