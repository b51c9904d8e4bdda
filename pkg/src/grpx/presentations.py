"""Finite presentations, coset enumeration and low-index subgroups.

Words are tuples of ``(generator index, +1/-1)`` pairs.  Inside the coset
table, generator ``i`` uses column ``2*i`` and its inverse column ``2*i + 1``.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field

import numpy as np

from .gf import FieldSpec, array_matmul

DEFAULT_COSET_CAP = 10 ** 6


class PresentationError(ValueError):
    pass


class SyntaxErrorAt(PresentationError):
    def __init__(self, msg, line, col):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class EnumerationError(RuntimeError):
    """Coset enumeration did not close within its cap."""


class BudgetExceeded(RuntimeError):
    def __init__(self, msg, progress=None):
        super().__init__(msg)
        self.progress = progress or {}


def reduce_word(word) -> tuple:
    out = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def invert_word(word) -> tuple:
    return tuple((g, -e) for g, e in reversed(word))


def word_power(word, n: int) -> tuple:
    if n < 0:
        word, n = invert_word(word), -n
    return reduce_word(tuple(word) * n)


def cyclically_reduce(word) -> tuple:
    w = list(reduce_word(word))
    while len(w) > 1 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


@dataclass
class Presentation:
    gens: list
    relators: list
    name: str = ""
    order: int | None = None

    def __post_init__(self):
        if len(set(self.gens)) != len(self.gens):
            raise PresentationError("generator names must be unique")
        self.relators = [reduce_word(r) for r in self.relators]
        if any(len(r) == 0 for r in self.relators):
            raise PresentationError("relators must be nonempty after free reduction")

    @property
    def ngens(self) -> int:
        return len(self.gens)

    def word(self, text: str) -> tuple:
        return parse_word(text, self.gens)

    def format_word(self, word) -> str:
        return format_word(word, self.gens)

    def to_text(self) -> str:
        lines = []
        if self.name:
            lines.append(f"group {self.name}")
        lines.append("gens " + " ".join(self.gens))
        lines += ["rel " + self.format_word(r) for r in self.relators]
        if self.order is not None:
            lines.append(f"order {self.order}")
        return "\n".join(lines) + "\n"


# -- parsing ------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<num>-?\d+)|(?P<op>[()\[\],^-]))")


class _WordParser:
    def __init__(self, text, gens, line=1, col0=0):
        self.text = text
        self.gens = {g: i for i, g in enumerate(gens)}
        self.line = line
        self.col0 = col0
        self.toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise SyntaxErrorAt(f"unexpected character {text[pos]!r}", line, col0 + pos + 1)
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), col0 + m.start(kind) + 1))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, self.col0 + len(self.text) + 1)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg):
        raise SyntaxErrorAt(msg, self.line, self.peek()[2])

    def parse(self):
        w = self.product()
        if self.peek()[0] is not None:
            self.error(f"unexpected token {self.peek()[1]!r}")
        return reduce_word(w)

    def product(self):
        out = ()
        while True:
            kind, val, _ = self.peek()
            if kind == "name" or (kind == "op" and val in "(["):
                out = out + self.factor()
            else:
                return out

    def factor(self):
        kind, val, col = self.take()
        if kind == "name":
            if val not in self.gens:
                raise SyntaxErrorAt(f"unknown generator {val!r}", self.line, col)
            base = ((self.gens[val], 1),)
        elif val == "(":
            base = self.product()
            if self.take()[1] != ")":
                self.i -= 1
                self.error("expected ')'")
        elif val == "[":
            a = self.product()
            if self.take()[1] != ",":
                self.i -= 1
                self.error("expected ','")
            b = self.product()
            if self.take()[1] != "]":
                self.i -= 1
                self.error("expected ']'")
            base = invert_word(a) + invert_word(b) + a + b
        else:
            raise SyntaxErrorAt(f"unexpected token {val!r}", self.line, col)
        while True:
            kind, val, col = self.peek()
            if kind == "op" and val == "-":
                self.take()
                base = invert_word(base)
            elif kind == "op" and val == "^":
                self.take()
                k2, v2, c2 = self.take()
                if k2 == "op" and v2 == "-":
                    k2, v2, c2 = self.take()
                    v2 = "-" + (v2 or "")
                if k2 != "num" and not (v2 and v2.lstrip("-").isdigit()):
                    raise SyntaxErrorAt("expected exponent", self.line, c2)
                base = word_power(base, int(v2))
            else:
                return tuple(base)


def parse_word(text: str, gens, line: int = 1, col0: int = 0) -> tuple:
    return _WordParser(text, gens, line, col0).parse()


def format_word(word, gens) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    word = list(word)
    while i < len(word):
        g, e = word[i]
        j = i
        while j < len(word) and word[j] == (g, e):
            j += 1
        n = j - i
        name = gens[g]
        if e == 1:
            parts.append(name if n == 1 else f"{name}^{n}")
        else:
            parts.append(f"{name}-" if n == 1 else f"{name}^-{n}")
        i = j
    return " ".join(parts)


def parse_presentation(text: str) -> Presentation:
    """Parse the line-oriented ``.pres`` format (``/`` also separates lines)."""
    name = ""
    gens = None
    rel_texts = []
    order = None
    raw_lines = text.splitlines()
    entries = []
    for ln_no, ln in enumerate(raw_lines, 1):
        col = 0
        for part in ln.split("/"):
            entries.append((ln_no, col, part))
            col += len(part) + 1
    for ln_no, col, part in entries:
        s = part.split("#", 1)[0]
        stripped = s.strip()
        if not stripped:
            continue
        lead = len(s) - len(s.lstrip())
        kw, _, rest = stripped.partition(" ")
        rest_col = col + lead + len(kw) + 1
        if kw == "group":
            name = rest.strip()
        elif kw == "gens":
            gens = rest.split()
            if not gens:
                raise SyntaxErrorAt("empty generator list", ln_no, rest_col)
            for g in gens:
                if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", g):
                    raise SyntaxErrorAt(f"bad generator name {g!r}", ln_no, rest_col)
        elif kw == "rel":
            if gens is None:
                raise SyntaxErrorAt("'rel' before 'gens'", ln_no, col + lead + 1)
            rel_texts.append((ln_no, rest_col, rest))
        elif kw == "order":
            try:
                order = int(rest.strip())
            except ValueError:
                raise SyntaxErrorAt("order must be an integer", ln_no, rest_col) from None
        else:
            raise SyntaxErrorAt(f"unknown keyword {kw!r}", ln_no, col + lead + 1)
    if gens is None:
        raise SyntaxErrorAt("missing 'gens' line", 1, 1)
    rels = []
    for ln_no, col, t in rel_texts:
        w = parse_word(t, gens, ln_no, col)
        if not w:
            raise SyntaxErrorAt("relator is trivial after free reduction", ln_no, col + 1)
        rels.append(w)
    return Presentation(gens, rels, name, order)


# -- coset tables ---------------------------------------------------------------------

def _col(g, e):
    return 2 * g + (0 if e == 1 else 1)


@dataclass
class CosetTable:
    """Complete coset table: ``table[c][col]`` for col = 2*gen (+1 for inverse)."""
    presentation: Presentation
    subgroup: list
    table: list = field(repr=False)

    @property
    def index(self) -> int:
        return len(self.table)

    def perm_images(self, gen: int) -> list:
        return [row[2 * gen] for row in self.table]

    def act(self, coset: int, word) -> int:
        for g, e in word:
            coset = self.table[coset][_col(g, e)]
        return coset

    def check(self) -> bool:
        """Relators fix every coset; subgroup generators fix coset 0."""
        n = self.index
        t = np.asarray(self.table, dtype=np.int64).reshape(n, -1)
        if t.size and (t.min() < 0 or t.max() >= n):
            return False
        ident = np.arange(n)
        for col in range(t.shape[1]):
            if not np.array_equal(t[t[:, col], col ^ 1], ident):
                return False
        for r in self.presentation.relators:
            img = ident
            for g, e in r:
                img = t[img, _col(g, e)]
            if not np.array_equal(img, ident):
                return False
        return all(self.act(0, w) == 0 for w in self.subgroup)

    def permutation_group(self):
        from .groupcore import Group, Perm, PermKind
        gens = [Perm(self.perm_images(i)) for i in range(self.presentation.ngens)]
        return Group(PermKind(self.index), gens, (self.presentation.name or "G") + "_cosets")


class _Enumerator:
    """HLT coset enumeration with lookahead and coincidence processing."""

    def __init__(self, pres: Presentation, sub, cap: int):
        self.pres = pres
        self.ngens = pres.ngens
        self.ncols = 2 * self.ngens
        self.inv_col = [c ^ 1 for c in range(self.ncols)]
        self.rels = [[_col(g, e) for g, e in r] for r in pres.relators]
        self.subs = [[_col(g, e) for g, e in w] for w in sub]
        self.cap = cap
        self.table = [[-1] * self.ncols]
        self.fwd = [0]            # forwarding for coincidences (self = alive)
        self.alive = [True]
        self.n_alive = 1
        self.deductions = None      # list when running the Felsch strategy
        conj = {c: [] for c in range(self.ncols)}
        seen = set()
        for r in self.rels:
            r = tuple(r)
            for w in (r, tuple(self.inv_col[c] for c in reversed(r))):
                for i in range(len(w)):
                    cw = w[i:] + w[:i]
                    if cw not in seen:
                        seen.add(cw)
                        conj[cw[0]].append(list(cw))
        self.conj = conj

    def new_coset(self):
        if self.n_alive >= self.cap:
            raise EnumerationError(f"coset cap {self.cap} exceeded")
        # dead rows are never reused: both strategies sweep rows in index order
        c = len(self.table)
        self.table.append([-1] * self.ncols)
        self.alive.append(True)
        self.fwd.append(c)
        self.n_alive += 1
        return c

    def rep(self, c):
        root = c
        fwd = self.fwd
        while fwd[root] != root:
            root = fwd[root]
        while fwd[c] != root:
            fwd[c], c = root, fwd[c]
        return root

    def define(self, c, col):
        d = self.new_coset()
        self.table[c][col] = d
        self.table[d][self.inv_col[col]] = c
        return d

    def coincidence(self, a, b):
        queue = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            row = self.table[e]
            for col in range(self.ncols):
                f = row[col]
                if f < 0:
                    continue
                ic = self.inv_col[col]
                if self.table[f][ic] == e:
                    self.table[f][ic] = -1
                e1 = self.rep(e)
                f1 = self.rep(f)
                t1 = self.table[e1][col]
                if t1 >= 0:
                    self._merge(f1, t1, queue)
                else:
                    t2 = self.table[f1][ic]
                    if t2 >= 0:
                        self._merge(e1, t2, queue)
                    else:
                        self.table[e1][col] = f1
                        self.table[f1][ic] = e1
                        if self.deductions is not None:
                            self.deductions.append((e1, col))

    def _merge(self, a, b, queue):
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.fwd[b] = a
        self.alive[b] = False
        self.n_alive -= 1
        queue.append(b)

    def scan_and_fill(self, c, word, fill=True):
        """Scan word at coset c; define cosets to complete it when fill is set."""
        table = self.table
        n = len(word)
        while True:
            f, i = c, 0
            b, j = c, n - 1
            while i <= j and table[f][word[i]] >= 0:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != c:
                    self.coincidence(f, c)
                return
            while j >= i and table[b][self.inv_col[word[j]]] >= 0:
                b = table[b][self.inv_col[word[j]]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][self.inv_col[word[i]]] = f
                if self.deductions is not None:
                    self.deductions.append((f, word[i]))
                return
            if not fill:
                return
            self.define(f, word[i])

    def run(self):
        for w in self.subs:
            self.scan_and_fill(0, w)
        c = 0
        while c < len(self.table):
            if self.alive[c]:
                for r in self.rels:
                    if not self.alive[c]:
                        break
                    try:
                        self.scan_and_fill(c, r)
                    except EnumerationError:
                        self.lookahead()
                        if not self.alive[c]:
                            break
                        self.scan_and_fill(c, r)
                if self.alive[c]:
                    row = self.table[c]
                    for col in range(self.ncols):
                        if row[col] < 0:
                            try:
                                self.define(c, col)
                            except EnumerationError:
                                self.lookahead()
                                if not self.alive[c]:
                                    break
                                if self.table[c][col] < 0:
                                    self.define(c, col)
            c += 1
        return self.compact()

    def run_felsch(self):
        self.deductions = []
        for w in self.subs:
            self.scan_and_fill(0, w)
        self.process_deductions()
        c = 0
        while c < len(self.table):
            if not self.alive[c]:
                c += 1
                continue
            row = self.table[c]
            col = next((k for k in range(self.ncols) if row[k] < 0), None)
            if col is None:
                c += 1
                continue
            d = self.define(c, col)
            self.deductions.append((c, col))
            self.deductions.append((d, self.inv_col[col]))
            self.process_deductions()
        return self.compact()

    def process_deductions(self):
        stack = self.deductions
        while stack:
            c, col = stack.pop()
            if not self.alive[c]:
                continue
            for w in self.conj[col]:
                if not self.alive[c]:
                    break
                self.scan_and_fill(c, w, fill=False)
            if not stack:
                for w in self.subs:
                    self.scan_and_fill(0, w, fill=False)

    def lookahead(self):
        before = self.n_alive
        for c in range(len(self.table)):
            if not self.alive[c]:
                continue
            for r in self.rels:
                if not self.alive[c]:
                    break
                self.scan_and_fill(c, r, fill=False)
        if self.n_alive >= before and self.n_alive >= self.cap:
            raise EnumerationError(f"coset cap {self.cap} exceeded")

    def compact(self):
        live = [c for c in range(len(self.table)) if self.alive[c]]
        # standardize by BFS from coset 0
        seen = {live[0]: 0} if live else {}
        out_order = [live[0]]
        k = 0
        while k < len(out_order):
            c = out_order[k]
            for col in range(self.ncols):
                d = self.table[c][col]
                if d not in seen:
                    seen[d] = len(out_order)
                    out_order.append(d)
            k += 1
        return [[seen[self.table[c][col]] for col in range(self.ncols)] for c in out_order]


def todd_coxeter(pres: Presentation, sub=(), cap: int = DEFAULT_COSET_CAP,
                 strategy: str = "hlt") -> CosetTable:
    """Enumerate cosets of the subgroup generated by ``sub`` (words).

    ``strategy`` is "hlt" (relator scanning with lookahead) or "felsch"
    (fill the first gap, then chase all deductions).
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    sub = [reduce_word(w) for w in sub]
    en = _Enumerator(pres, sub, cap)
    if strategy == "hlt":
        table = en.run()
    elif strategy == "felsch":
        table = en.run_felsch()
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    out = CosetTable(pres, list(sub), table)
    if not out.check():
        raise EnumerationError("enumeration produced an inconsistent table")
    return out


# -- word evaluation and Fox derivatives ------------------------------------------------

def evaluate_word(word, images, mul, inv, identity):
    """Product of generator images along a word."""
    acc = identity
    inverses = {}
    for g, e in word:
        if g >= len(images):
            raise IndexError(f"word uses generator {g} but only {len(images)} images given")
        if e == 1:
            x = images[g]
        else:
            if g not in inverses:
                inverses[g] = inv(images[g])
            x = inverses[g]
        acc = mul(acc, x)
    return acc


def evaluate_in_group(word, group, images=None):
    images = group.gens if images is None else images
    return evaluate_word(word, images, group.kind.mul, group.kind.inv, group.identity())


def fox_coefficients(word, mats, field: FieldSpec):
    """Linear maps C_x with  r(g_x k_x) = r(g) * prod of k_x . C_x  (additively).

    ``mats[x]`` is the matrix of generator x acting on the module from the
    right (row vectors).  A perturbation g_x -> g_x k_x changes the relator
    value by sum_x delta_x @ C_x.
    """
    d = mats[0].shape[0] if mats else 0
    ngens = len(mats)
    inv_cache = {}

    def minv(g):
        if g not in inv_cache:
            from .gf import Matrix, mat_inv
            inv_cache[g] = mat_inv(Matrix._wrap(field, mats[g])).a
        return inv_cache[g]

    coeffs = [np.zeros((d, d), dtype=np.int64) for _ in range(ngens)]
    suffix = np.eye(d, dtype=np.int64)
    for g, e in reversed(word):
        if e == 1:
            coeffs[g] = field.add(coeffs[g], suffix)
            suffix = array_matmul(field, mats[g], suffix)
        else:
            suffix = array_matmul(field, minv(g), suffix)
            coeffs[g] = field.sub(coeffs[g], suffix)
    return coeffs


# -- presentation verification ------------------------------------------------------------

def verify_presentation(pres: Presentation, reference, cap: int = DEFAULT_COSET_CAP,
                        sub=None) -> bool:
    """True iff the relators hold on the reference generators and coset
    enumeration gives the reference order.

    With ``sub`` a list of words generating a cyclic subgroup ``<w>`` whose
    power ``w^k`` is a relator consequence, the enumeration is over that
    subgroup and the order is index * |<w>| computed in the reference.
    """
    if len(reference.gens) != pres.ngens:
        return False
    for r in pres.relators:
        if not reference.is_identity(evaluate_in_group(r, reference)):
            return False
    ref_order = reference.order()
    if sub:
        table = todd_coxeter(pres, sub, cap)
        elt = evaluate_in_group(sub[0], reference)
        k = reference.element_order(elt)
        if len(sub) != 1 or not any(_is_power_relator(r, sub[0], k) for r in pres.relators):
            raise PresentationError("subgroup shortcut needs a single word w with w^k among the relators")
        return table.index * k == ref_order
    table = todd_coxeter(pres, (), cap)
    return table.index == ref_order


def _is_power_relator(rel, w, k):
    return cyclically_reduce(rel) == cyclically_reduce(word_power(w, k)) or \
        cyclically_reduce(rel) == cyclically_reduce(word_power(w, -k))


# -- low index subgroups ------------------------------------------------------------------

class _LowIndex:
    """Backtrack over partial coset tables with first-in-orbit pruning."""

    def __init__(self, pres: Presentation, bound: int, budget_secs=None, max_results=None):
        self.pres = pres
        self.n = bound
        self.ngens = pres.ngens
        self.ncols = 2 * self.ngens
        rels = [tuple(_col(g, e) for g, e in cyclically_reduce(r)) for r in pres.relators]
        # involutions: generator x with x^2 a relator acts as its own inverse
        self.invol = set()
        for r in rels:
            if len(r) == 2 and r[0] == r[1]:
                self.invol.add(r[0] // 2)
        inv_col = list(range(self.ncols))
        for c in range(self.ncols):
            inv_col[c] = c ^ 1
        self.inv_col = inv_col
        # all cyclic conjugates of relators and inverses, bucketed by first letter
        conj = {c: [] for c in range(self.ncols)}
        seen = set()
        for r in rels:
            for w in (r, tuple(inv_col[c] for c in reversed(r))):
                for i in range(len(w)):
                    cw = w[i:] + w[:i]
                    if cw not in seen:
                        seen.add(cw)
                        conj[cw[0]].append(cw)
        for g in self.invol:
            merged = conj[2 * g] + conj[2 * g + 1]
            conj[2 * g] = merged
            conj[2 * g + 1] = merged
        self.conj = conj
        self.rels = rels
        self.deadline = None if budget_secs is None else time.monotonic() + budget_secs
        self.max_results = max_results
        self.nodes = 0
        self.results = []

    def _cols(self):
        # columns to fill: skip inverse columns of involutions (kept identical)
        return [c for c in range(self.ncols) if not (c & 1 and (c // 2) in self.invol)]

    def run(self):
        n = self.n
        T = [[-1] * self.ncols for _ in range(n)]
        self.T = T
        self.num = 1
        self.fill_cols = self._cols()
        self._search()
        return self.results

    def _set(self, c, col, d, trail):
        T = self.T
        T[c][col] = d
        trail.append((c, col))
        ic = self.inv_col[col]
        if (col // 2) in self.invol:
            ic = col
            if T[c][col ^ 1] < 0:
                T[c][col ^ 1] = d
                trail.append((c, col ^ 1))
            if T[d][ic] < 0:
                T[d][ic] = c
                trail.append((d, ic))
            if T[d][ic ^ 1] < 0:
                T[d][ic ^ 1] = c
                trail.append((d, ic ^ 1))
            return T[d][ic] == c
        if T[d][ic] < 0:
            T[d][ic] = c
            trail.append((d, ic))
            return True
        return T[d][ic] == c

    def _deduce(self, queue, trail):
        """Process deductions; False on contradiction."""
        T = self.T
        inv_col = self.inv_col
        while queue:
            c, col = queue.pop()
            for w in self.conj[col]:
                # scan w at coset c forwards and backwards
                f = c
                i = 0
                L = len(w)
                while i < L:
                    nf = T[f][w[i]]
                    if nf < 0:
                        break
                    f = nf
                    i += 1
                if i == L:
                    if f != c:
                        return False
                    continue
                b = c
                j = L - 1
                while j >= i:
                    nb = T[b][inv_col[w[j]]]
                    if nb < 0:
                        break
                    b = nb
                    j -= 1
                if j < i:
                    if f != b:
                        return False
                    continue
                if i == j:
                    # deduction: f --w[i]--> b
                    x = w[i]
                    if T[f][x] >= 0:
                        if T[f][x] != b:
                            return False
                        continue
                    ix = inv_col[x]
                    if (x // 2) in self.invol:
                        ix = x
                    if T[b][ix] >= 0 and T[b][ix] != f:
                        return False
                    if not self._set(f, x, b, trail):
                        return False
                    queue.append((f, x))
                    queue.append((b, ix if (x // 2) not in self.invol else x))
        return True

    def _first_undefined(self):
        T = self.T
        for c in range(self.num):
            row = T[c]
            for col in self.fill_cols:
                if row[col] < 0:
                    return c, col
        return None

    def _is_canonical(self):
        """Reject the table if renumbering from another coset gives a smaller one."""
        T = self.T
        num = self.num
        cols = self.fill_cols
        for start in range(1, num):
            # BFS renumbering from `start`; compare to identity numbering from 0
            new = {start: 0}
            old = [start]
            nxt = 1
            k = 0
            decided = False
            while k < num and not decided:
                c_new = old[k] if k < len(old) else None
                if c_new is None:
                    break
                for col in cols:
                    a = T[k][col]              # entry in current table, row k
                    b = T[c_new][col]          # entry in renumbered table, row k
                    if b < 0 or a < 0:
                        decided = True         # cannot compare further
                        break
                    if b in new:
                        bn = new[b]
                    else:
                        new[b] = nxt
                        old.append(b)
                        bn = nxt
                        nxt += 1
                    if bn < a:
                        return False
                    if bn > a:
                        decided = True
                        break
                k += 1
        return True

    def _search(self):
        self.nodes += 1
        if self.deadline is not None and (self.nodes & 255) == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("low-index search exceeded its time budget",
                                 {"nodes": self.nodes, "found": len(self.results)})
        pos = self._first_undefined()
        if pos is None:
            self.results.append([row[:] for row in self.T[:self.num]])
            if self.max_results is not None and len(self.results) >= self.max_results:
                raise StopIteration
            return
        c, col = pos
        T = self.T
        ic = col if (col // 2) in self.invol else self.inv_col[col]
        candidates = list(range(self.num))
        if self.num < self.n:
            candidates.append(self.num)
        for d in candidates:
            if T[d][ic] >= 0 and d < self.num:
                continue
            trail = []
            grew = d == self.num
            if grew:
                self.num += 1
            ok = self._set(c, col, d, trail)
            if ok:
                queue = [(c, col), (d, ic)]
                ok = self._deduce(queue, trail)
            if ok and self._is_canonical():
                self._search()
            for (x, y) in reversed(trail):
                T[x][y] = -1
            if grew:
                self.num -= 1


def low_index_subgroups(pres: Presentation, bound: int, budget_secs=None, max_results=None):
    """All subgroups of index <= bound up to conjugacy, as coset tables."""
    if bound < 1:
        raise ValueError("bound must be positive")
    li = _LowIndex(pres, bound, budget_secs, max_results)
    try:
        tables = li.run()
    except StopIteration:
        tables = li.results
    out = []
    for t in tables:
        out.append(CosetTable(pres, [], t))
    return out
