"""Bit-exact text serialization for spaces, tables, chains and bounds.

Grammar (line oriented, '#' comments):

    format blinfty 1
    gen <name> parity <0|1> [zdeg <int>] [action <p>/<q>]
    table <kind> <name> parity <0|1> [hbar]
    op <k> <l> [genus <g>] : <word> -> <coef> <word> [+ <coef> <word> ...]
    chain <name> : <coef> [h<n>] <eword> [+ ...]
    bounds max_letters <n> [max_action <p>/<q>] [hbar_max <n>] [action_drop]

Words are middle-dot-joined generator names or 1; outer words join clusters
with a circled dot.  Canonical serialization sorts ops by (k, l, g, input)
and round-trips byte-identically.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError, StructureError
from .ibl import IBLAlgebra, IBLTable
from .invariants import UModule
from .structures import (Augmentation, BLAlgebra, Bounds, OperationTable,
                         PointedMap)
from .words import (EElement, Element, EWord, Generator, GradedSpace,
                    UNIT_WORD, normalize_clusters, normalize_word)

FORMAT_LINE = "format blinfty 1"
KINDS = ("structure", "morphism", "augmentation", "pointed", "umodule", "ibl")
INNER_SEP = "·"   # middle dot between letters
OUTER_SEP = "⊙"   # circled dot between clusters

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")


class TableBlock:
    def __init__(self, kind, name, parity, is_hbar, ops):
        self.kind = kind
        self.name = name
        self.parity = parity
        self.is_hbar = is_hbar
        self.ops = ops  # list of (k, l, g, input Word, Element)


class ChainBlock:
    def __init__(self, name, element):
        self.name = name
        self.element = element  # EElement


class Document:
    def __init__(self, space, tables=(), chains=(), bounds=None):
        self.space = space
        self.tables = list(tables)
        self.chains = list(chains)
        self.bounds = bounds

    def table(self, kind=None, name=None):
        for t in self.tables:
            if (kind is None or t.kind == kind) and \
                    (name is None or t.name == name):
                return t
        return None


def _format_rational(x):
    return str(Fraction(x))


def _parse_rational(tok, line_no):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(line_no, "malformed rational %r" % tok)


def _format_word(space, word):
    if len(word) == 0:
        return "1"
    return INNER_SEP.join(space.generators[i].name for i in word.letters)


def _parse_word(space, text, line_no):
    if text == "1":
        return UNIT_WORD
    names = text.split(INNER_SEP)
    try:
        w, sign = normalize_word(space, names)
    except KeyError:
        raise ParseError(line_no, "unknown generator in %r" % text) from None
    if sign == 0:
        raise ParseError(line_no, "word %r vanishes (repeated odd letter)" % text)
    canonical = [space.generators[i].name for i in w.letters]
    if sign != 1 or names != canonical:
        raise ParseError(line_no, "word %r is not in canonical order" % text)
    return w


def _format_eword(space, ew):
    body = OUTER_SEP.join(_format_word(space, c) for c in ew.clusters)
    return body


def _parse_eword(space, text, line_no):
    clusters = tuple(_parse_word(space, part, line_no)
                     for part in text.split(OUTER_SEP))
    ew, sign = normalize_clusters(space, clusters)
    if sign == 0:
        raise ParseError(line_no, "outer word %r vanishes" % text)
    if sign != 1 or ew.clusters != clusters:
        raise ParseError(line_no, "outer word %r not in canonical order" % text)
    return ew


def serialize(doc):
    """Canonical text: gens in order, ops sorted by (k, l, g, input)."""
    sp = doc.space
    lines = [FORMAT_LINE]
    for g in sp.generators:
        bits = ["gen", g.name, "parity", str(g.parity)]
        if g.zgrade is not None:
            bits += ["zdeg", str(g.zgrade)]
        if g.action is not None:
            bits += ["action", _format_rational(g.action)]
        lines.append(" ".join(bits))
    for t in doc.tables:
        head = ["table", t.kind, t.name, "parity", str(t.parity)]
        if t.is_hbar:
            head.append("hbar")
        lines.append(" ".join(head))
        for (k, l, g, w_in, elem) in sorted(
                t.ops, key=lambda op: (op[0], op[1], op[2], op[3].key())):
            head = ["op", str(k), str(l)]
            if t.is_hbar:
                head += ["genus", str(g)]
            terms = []
            for w_out, c in sorted(elem.terms.items(),
                                   key=lambda kv: kv[0].key()):
                terms.append("%s %s" % (_format_rational(c),
                                        _format_word(sp, w_out)))
            lines.append("%s : %s -> %s" % (" ".join(head),
                                            _format_word(sp, w_in),
                                            " + ".join(terms)))
    for ch in doc.chains:
        terms = []
        for ew, c in sorted(ch.element.terms.items(),
                            key=lambda kv: kv[0].key()):
            bit = _format_rational(c)
            if ew.hbar:
                bit += " h%d" % ew.hbar
            terms.append("%s %s" % (bit, _format_eword(sp, ew)))
        lines.append("chain %s : %s" % (ch.name, " + ".join(terms)))
    if doc.bounds is not None:
        b = doc.bounds
        bits = ["bounds", "max_letters", str(b.max_letters)]
        if b.max_action is not None:
            bits += ["max_action", _format_rational(b.max_action)]
        if b.hbar_max is not None:
            bits += ["hbar_max", str(b.hbar_max)]
        if b.action_drop:
            bits.append("action_drop")
        lines.append(" ".join(bits))
    return "\n".join(lines) + "\n"


def parse(text):
    """Parse a document; errors carry the offending line number."""
    gens = []
    tables = []
    chains_raw = []
    bounds = None
    current = None
    saw_format = False
    space = None

    def close_space(line_no):
        nonlocal space
        if space is None:
            try:
                space = GradedSpace(gens)
            except ValueError as e:
                raise ParseError(line_no, str(e)) from None
        return space

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if head == "format":
            if line != FORMAT_LINE:
                raise ParseError(line_no, "unsupported format line %r" % line)
            saw_format = True
        elif head == "gen":
            if space is not None:
                raise ParseError(line_no, "gen after tables began")
            if len(toks) < 4 or toks[2] != "parity":
                raise ParseError(line_no, "expected: gen NAME parity P ...")
            name = toks[1]
            if not _NAME_RE.match(name):
                raise ParseError(line_no, "bad generator name %r" % name)
            parity = _parse_int(toks[3], line_no)
            opts = _keyed(toks[4:], line_no, {"zdeg", "action"}, flags=set())
            try:
                gens.append(Generator(
                    name, parity,
                    zgrade=(_parse_int(opts["zdeg"], line_no)
                            if "zdeg" in opts else None),
                    action=(_parse_rational(opts["action"], line_no)
                            if "action" in opts else None)))
            except ValueError as e:
                raise ParseError(line_no, str(e)) from None
        elif head == "table":
            sp = close_space(line_no)
            if len(toks) < 5 or toks[3] != "parity":
                raise ParseError(line_no,
                                 "expected: table KIND NAME parity P [hbar]")
            kind, name = toks[1], toks[2]
            if kind not in KINDS:
                raise ParseError(line_no, "unknown table kind %r" % kind)
            parity = _parse_int(toks[4], line_no)
            is_hbar = False
            if len(toks) == 6:
                if toks[5] != "hbar":
                    raise ParseError(line_no, "trailing junk %r" % toks[5])
                is_hbar = True
            elif len(toks) > 6:
                raise ParseError(line_no, "trailing junk")
            if kind == "ibl" and not is_hbar:
                raise ParseError(line_no, "ibl tables must declare hbar")
            current = TableBlock(kind, name, parity, is_hbar, [])
            tables.append(current)
        elif head == "op":
            if current is None:
                raise ParseError(line_no, "op outside a table block")
            sp = close_space(line_no)
            _parse_op(sp, current, toks, line, line_no)
        elif head == "chain":
            sp = close_space(line_no)
            if ":" not in toks:
                raise ParseError(line_no, "chain needs a ':'")
            name = toks[1]
            body = line.split(":", 1)[1].strip()
            chains_raw.append((name, body, line_no))
            current = None
        elif head == "bounds":
            close_space(line_no)
            opts = _keyed(toks[1:], line_no,
                          {"max_letters", "max_action", "hbar_max"},
                          flags={"action_drop"})
            if "max_letters" not in opts:
                raise ParseError(line_no, "bounds requires max_letters")
            bounds = Bounds(
                _parse_int(opts["max_letters"], line_no),
                max_action=(_parse_rational(opts["max_action"], line_no)
                            if "max_action" in opts else None),
                hbar_max=(_parse_int(opts["hbar_max"], line_no)
                          if "hbar_max" in opts else None),
                action_drop="action_drop" in opts)
            current = None
        else:
            raise ParseError(line_no, "unknown directive %r" % head)
    if not saw_format:
        raise ParseError(1, "missing format line")
    sp = close_space(1)
    chains = [ChainBlock(name, _parse_chain_body(sp, body, line_no))
              for (name, body, line_no) in chains_raw]
    return Document(sp, tables, chains, bounds)


def _parse_int(tok, line_no):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(line_no, "expected integer, got %r" % tok) from None


def _keyed(toks, line_no, keys, flags):
    out = {}
    i = 0
    while i < len(toks):
        t = toks[i]
        if t in flags:
            out[t] = True
            i += 1
        elif t in keys:
            if i + 1 >= len(toks):
                raise ParseError(line_no, "%s needs a value" % t)
            out[t] = toks[i + 1]
            i += 2
        else:
            raise ParseError(line_no, "unexpected token %r" % t)
    return out


def _parse_op(sp, block, toks, line, line_no):
    if ":" not in line or "->" not in line:
        raise ParseError(line_no, "expected: op K L [genus G] : IN -> TERMS")
    head, rest = line.split(":", 1)
    htoks = head.split()
    k = _parse_int(htoks[1], line_no)
    l = _parse_int(htoks[2], line_no)
    g = 0
    if len(htoks) == 5 and htoks[3] == "genus":
        g = _parse_int(htoks[4], line_no)
        if not block.is_hbar:
            raise ParseError(line_no, "genus outside an hbar table")
    elif len(htoks) != 3:
        raise ParseError(line_no, "bad op header")
    in_text, out_text = rest.split("->", 1)
    w_in = _parse_word(sp, in_text.strip(), line_no)
    if len(w_in) != k:
        raise ParseError(line_no, "input %r has %d letters, expected %d"
                         % (in_text.strip(), len(w_in), k))
    elem = Element()
    for term in out_text.strip().split(" + "):
        bits = term.strip().split()
        if len(bits) != 2:
            raise ParseError(line_no, "bad term %r" % term)
        coeff = _parse_rational(bits[0], line_no)
        w_out = _parse_word(sp, bits[1], line_no)
        if len(w_out) != l:
            raise ParseError(line_no, "output %r has %d letters, expected %d"
                             % (bits[1], len(w_out), l))
        elem = elem + Element.monomial(w_out, coeff)
    for (k2, l2, g2, w2, _) in block.ops:
        if (k2, l2, g2, w2) == (k, l, g, w_in):
            raise ParseError(line_no, "duplicate op cell (%d,%d) %r"
                             % (k, l, in_text.strip()))
    in_par = sp.word_parity(w_in.letters)
    for w_out in elem.terms:
        if sp.word_parity(w_out.letters) != (in_par + block.parity) % 2:
            raise ParseError(line_no, "entry violates the declared parity")
    block.ops.append((k, l, g, w_in, elem))


def _parse_chain_body(sp, body, line_no):
    elem = EElement()
    for term in body.split(" + "):
        bits = term.strip().split()
        if len(bits) == 2:
            coeff_tok, ew_tok = bits
            hbar = 0
        elif len(bits) == 3 and re.match(r"^h\d+$", bits[1]):
            coeff_tok, ew_tok = bits[0], bits[2]
            hbar = int(bits[1][1:])
        else:
            raise ParseError(line_no, "bad chain term %r" % term)
        coeff = _parse_rational(coeff_tok, line_no)
        ew = _parse_eword(sp, ew_tok, line_no)
        elem = elem + EElement.monomial(EWord(ew.clusters, hbar=hbar), coeff)
    return elem


# ---------------------------------------------------------------------------
# documents <-> typed objects

def document_of_algebra(alg, kind="structure", name="p", bounds=None,
                        chains=()):
    ops = [(k, l, 0, w, e) for (k, l, w, e) in alg.table.sorted_entries()]
    block = TableBlock(kind, name, alg.table.parity, False, ops)
    return Document(alg.space, [block], chains, bounds)


def document_of_ibl(ialg, name="p", bounds=None):
    ops = list(ialg.table.sorted_entries())
    block = TableBlock("ibl", name, 1, True, ops)
    return Document(ialg.space, [block], (), bounds)


def table_from_block(space, block, action_drop=False, target=None):
    entries = [(k, l, w, e) for (k, l, g, w, e) in block.ops]
    return OperationTable(space, block.parity, entries, complete=True,
                          target=target, action_drop=action_drop)


def algebra_from_document(doc, name=None):
    block = doc.table("structure", name)
    if block is None:
        raise StructureError("document has no structure table")
    drop = doc.bounds.action_drop if doc.bounds else False
    return BLAlgebra(doc.space, table_from_block(doc.space, block,
                                                 action_drop=drop))


def ibl_from_document(doc, name=None):
    block = doc.table("ibl", name)
    if block is None:
        raise StructureError("document has no ibl table")
    return IBLAlgebra(doc.space, IBLTable(doc.space, block.ops))


def augmentation_from_document(doc, alg, name=None):
    block = doc.table("augmentation", name)
    if block is None:
        raise StructureError("document has no augmentation table")
    entries = [(k, l, w, e) for (k, l, g, w, e) in block.ops]
    tab = OperationTable(alg.space, block.parity, entries, complete=True,
                         target=GradedSpace(()))
    return Augmentation(alg, tab)


def pointed_from_document(doc, alg, name=None):
    block = doc.table("pointed", name)
    if block is None:
        raise StructureError("document has no pointed table")
    return PointedMap(alg, table_from_block(alg.space, block))


def umodule_from_document(doc, space, name=None):
    block = doc.table("umodule", name)
    if block is None:
        raise StructureError("document has no umodule table")
    return UModule(space, table_from_block(space, block))


def spaces_compatible(a, b):
    return (len(a) == len(b) and
            all(x.name == y.name and x.parity == y.parity
                for x, y in zip(a.generators, b.generators)))
