"""Graded free E-modules and homogeneous matrices between them.

A free module F = (+) E(a_i) is stored through its generator degrees
g_i = -a_i.  A GradedMap is a matrix of homogeneous exterior elements with
deg(entry[r][c]) = srcGenDeg[c] - tgtGenDeg[r]; slots whose required degree
is positive or below -(n+1) are identically zero.  Free modules are right
E-modules: a map sends gen_c to sum_r gen_r * entry[r][c], so composition
is the usual matrix product with entries multiplied on the left of module
coefficients.

Slice-level data (cokernels, kernels) is held in VectorizedModule: graded
dimensions plus one GF(p) matrix per variable mapping slice d to d-1.
"""

import numpy as np

from . import gfp
from .errors import DomainError, ParseError
from .extalg import (Algebra, ExtElement, format_element, from_coeff_vector,
                     mask_degree, parse_element)


class FreeEModule:

    def __init__(self, alg, gen_degrees):
        self.alg = alg
        self.gen_degrees = tuple(int(g) for g in gen_degrees)
        self._offsets = {}
        self._actions = {}

    @property
    def rank(self):
        return len(self.gen_degrees)

    def twist_summands(self):
        """The module as a sorted list of (twist a, multiplicity): E(a)^m."""
        counts = {}
        for g in self.gen_degrees:
            counts[-g] = counts.get(-g, 0) + 1
        return sorted(counts.items(), reverse=True)

    def degree_range(self):
        if not self.gen_degrees:
            return (0, -1)
        return (min(self.gen_degrees) - self.alg.nvars, max(self.gen_degrees))

    def slice_dim(self, d):
        return sum(self.alg.dim(d - g) for g in self.gen_degrees)

    def offsets(self, d):
        """Start offset of each generator's block in the slice-d basis."""
        if d not in self._offsets:
            offs = []
            pos = 0
            for g in self.gen_degrees:
                offs.append(pos)
                pos += self.alg.dim(d - g)
            self._offsets[d] = tuple(offs)
        return self._offsets[d]

    def slice_basis(self, d):
        """Basis of the slice as (generator index, monomial mask) pairs."""
        out = []
        for r, g in enumerate(self.gen_degrees):
            for m in self.alg.basis(d - g):
                out.append((r, m))
        return out

    def action_matrix(self, i, d):
        """Right multiplication by e_i from slice d to slice d-1."""
        key = (i, d)
        if key not in self._actions:
            blocks = [self.alg.right_mul_matrix(i, d - g) for g in self.gen_degrees]
            out = gfp.zeros(self.slice_dim(d - 1), self.slice_dim(d))
            ro = self.offsets(d - 1)
            co = self.offsets(d)
            for r, b in enumerate(blocks):
                out[ro[r]:ro[r] + b.shape[0], co[r]:co[r] + b.shape[1]] = b
            self._actions[key] = out
        return self._actions[key]

    def monomial_action(self, mask, d):
        """Right multiplication by the monomial `mask` from slice d down."""
        idx = [i for i in range(self.alg.nvars) if mask & (1 << i)]
        dim = self.slice_dim(d)
        out = gfp.eye(dim)
        cur = d
        for i in idx:
            out = gfp.matmul(self.action_matrix(i, cur), out, self.alg.p)
            cur -= 1
        return out

    def element_from_vector(self, d, vec):
        """Slice-d coordinate vector -> list of exterior entries per generator."""
        out = []
        for r, g in enumerate(self.gen_degrees):
            off = self.offsets(d)[r]
            w = self.alg.dim(d - g)
            out.append(from_coeff_vector(self.alg, d - g, vec[off:off + w]))
        return out

    def __eq__(self, other):
        return (isinstance(other, FreeEModule) and self.alg == other.alg
                and self.gen_degrees == other.gen_degrees)

    def __repr__(self):
        if not self.gen_degrees:
            return "0"
        return " + ".join("E(%d)^%d" % (a, m) for a, m in self.twist_summands())


def dual_module(f):
    return FreeEModule(f.alg, tuple(-g for g in f.gen_degrees))


class GradedMap:
    """Homogeneous matrix between graded free E-modules."""

    def __init__(self, source, target, entries):
        if source.alg != target.alg:
            raise DomainError("source and target over different algebras")
        self.alg = source.alg
        self.source = source
        self.target = target
        clean = {}
        for (r, c), e in entries.items():
            if e.is_zero:
                continue
            need = source.gen_degrees[c] - target.gen_degrees[r]
            if e.degree != need:
                raise DomainError(
                    "entry (%d,%d) has degree %s, slot requires %d"
                    % (r, c, e.degree, need))
            if need > 0 or need < -self.alg.nvars:
                raise DomainError(
                    "nonzero entry (%d,%d) in impossible degree %d" % (r, c, need))
            clean[(r, c)] = e
        self.entries = clean

    def entry(self, r, c):
        return self.entries.get((r, c), ExtElement.zero(self.alg))

    @property
    def is_zero(self):
        return not self.entries

    def slice_matrix(self, d):
        """The induced GF(p) map from source slice d to target slice d."""
        out = gfp.zeros(self.target.slice_dim(d), self.source.slice_dim(d))
        ro = self.target.offsets(d)
        co = self.source.offsets(d)
        for (r, c), e in self.entries.items():
            gs = self.source.gen_degrees[c]
            gt = self.target.gen_degrees[r]
            sd = d - gs
            if self.alg.dim(sd) == 0 or self.alg.dim(d - gt) == 0:
                continue
            block = gfp.zeros(self.alg.dim(d - gt), self.alg.dim(sd))
            for mask, coeff in e.terms.items():
                block += self.alg.left_mul_matrix(mask, sd) * coeff
            out[ro[r]:ro[r] + block.shape[0], co[c]:co[c] + block.shape[1]] = \
                np.mod(block, self.alg.p)
        return out

    def dual(self):
        """Transpose with generator degrees negated and swapped."""
        ent = {(c, r): e for (r, c), e in self.entries.items()}
        return GradedMap(dual_module(self.target), dual_module(self.source), ent)

    def compose(self, other):
        """self o other."""
        if other.target != self.source:
            raise DomainError("composition shape mismatch")
        ent = {}
        for (r, m), e1 in self.entries.items():
            for (m2, c), e2 in other.entries.items():
                if m2 != m:
                    continue
                prod = e1 * e2
                if prod.is_zero:
                    continue
                key = (r, c)
                ent[key] = ent[key] + prod if key in ent else prod
        return GradedMap(other.source, self.target, ent)

    def is_minimal(self):
        """True iff every degree-0 entry is zero (no units in the matrix)."""
        return all(e.degree != 0 for e in self.entries.values())

    def is_linear(self):
        """True iff every nonzero entry has degree exactly -1."""
        return all(e.degree == -1 for e in self.entries.values())

    def variable_support(self):
        """Mask of all e_i appearing in some entry."""
        mask = 0
        for e in self.entries.values():
            for m in e.terms:
                mask |= m
        return mask

    def __repr__(self):
        return "GradedMap(%r <- %r, %d entries)" % (
            self.target, self.source, len(self.entries))


def zero_map(source, target):
    return GradedMap(source, target, {})


class VectorizedModule:
    """A finite graded E-module: dims per degree plus e_i-action matrices.

    actions[(i, d)] maps slice d to slice d-1 (right multiplication by e_i).
    Degrees with dim 0 are dropped from `dims`.
    """

    def __init__(self, alg, dims, actions):
        self.alg = alg
        self.dims = {d: int(v) for d, v in dims.items() if v}
        self.actions = {}
        for (i, d), mat in actions.items():
            if self.dims.get(d) and self.dims.get(d - 1):
                self.actions[(i, d)] = mat

    @property
    def is_zero(self):
        return not self.dims

    def dim(self, d):
        return self.dims.get(d, 0)

    def total_dim(self):
        return sum(self.dims.values())

    def support(self):
        if not self.dims:
            return (0, -1)
        return (min(self.dims), max(self.dims))

    def action(self, i, d):
        key = (i, d)
        if key in self.actions:
            return self.actions[key]
        return gfp.zeros(self.dim(d - 1), self.dim(d))

    def monomial_action(self, mask, d):
        out = gfp.eye(self.dim(d))
        cur = d
        for i in range(self.alg.nvars):
            if mask & (1 << i):
                out = gfp.matmul(self.action(i, cur), out, self.alg.p)
                cur -= 1
        return out

    def radical_dim(self, d):
        """dim of (m*M)_d, the span of all e_i images landing in slice d."""
        cols = [self.action(i, d + 1) for i in range(self.alg.nvars)]
        if not self.dim(d) or not self.dim(d + 1):
            return 0
        return gfp.rank(np.hstack(cols), self.alg.p)

    def check(self):
        """Verify the action maps anticommute and square to zero."""
        p = self.alg.p
        lo, hi = self.support()
        for d in range(hi, lo, -1):
            for i in range(self.alg.nvars):
                for j in range(i, self.alg.nvars):
                    ab = gfp.matmul(self.action(i, d - 1), self.action(j, d), p)
                    ba = gfp.matmul(self.action(j, d - 1), self.action(i, d), p)
                    if not np.array_equal(np.mod(ab + ba, p), np.zeros_like(ab)):
                        raise DomainError(
                            "actions e_%d, e_%d fail to anticommute at degree %d"
                            % (i, j, d))
        return True

    def hilbert(self):
        lo, hi = self.support()
        return [self.dim(d) for d in range(lo, hi + 1)]


def free_as_vectorized(f):
    """A free module's own slice data."""
    lo, hi = f.degree_range()
    dims = {d: f.slice_dim(d) for d in range(lo, hi + 1)}
    actions = {}
    for d in range(lo + 1, hi + 1):
        for i in range(f.alg.nvars):
            actions[(i, d)] = f.action_matrix(i, d)
    return VectorizedModule(f.alg, dims, actions)


class QuotientData:
    """Projection/section pair describing one slice of a quotient."""

    def __init__(self, proj, section):
        self.proj = proj
        self.section = section


def _quotient_slice(image_cols, amb_dim, p):
    """Quotient of k^amb by the column space: returns QuotientData."""
    if image_cols.shape[1] == 0:
        return QuotientData(gfp.eye(amb_dim), gfp.eye(amb_dim))
    R, piv = gfp.rref(image_cols.T, p)
    pivset = set(piv)
    free = np.array([c for c in range(amb_dim) if c not in pivset], dtype=np.intp)
    proj = gfp.zeros(len(free), amb_dim)
    section = gfp.zeros(amb_dim, len(free))
    if len(free):
        proj[np.arange(len(free)), free] = 1.0
        section[free, np.arange(len(free))] = 1.0
        if piv:
            proj[:, np.array(piv, dtype=np.intp)] = np.mod(-R[:len(piv)][:, free].T, p)
    return QuotientData(proj, section)


def vectorize_coker(f):
    """coker(f) as a VectorizedModule, computed slice by slice.

    The quotient basis in each degree is the set of non-pivot coordinates
    of the image's row echelon form, so generators are reproducible.
    """
    p = f.alg.p
    tgt = f.target
    lo, hi = tgt.degree_range()
    quot = {}
    dims = {}
    for d in range(lo, hi + 1):
        amb = tgt.slice_dim(d)
        if amb == 0:
            continue
        q = _quotient_slice(f.slice_matrix(d), amb, p)
        quot[d] = q
        dims[d] = q.proj.shape[0]
    actions = {}
    for d in range(lo + 1, hi + 1):
        if not dims.get(d) or not dims.get(d - 1):
            continue
        for i in range(f.alg.nvars):
            act = gfp.matmul(quot[d - 1].proj,
                             gfp.matmul(tgt.action_matrix(i, d), quot[d].section, p), p)
            actions[(i, d)] = act
    return VectorizedModule(f.alg, dims, actions)


class KernelModule:
    """Graded kernel of a map of free modules, with the inclusion recorded.

    `basis[d]` has the kernel basis vectors as columns in the source free
    module's slice-d coordinates; `module` carries the induced actions.
    """

    def __init__(self, ambient, basis, module):
        self.ambient = ambient
        self.basis = basis
        self.module = module

    def dim(self, d):
        return self.module.dim(d)


def kernel_module(f):
    """Kernel of f computed slice by slice (deterministic nullspace bases)."""
    p = f.alg.p
    src = f.source
    lo, hi = src.degree_range()
    basis = {}
    dims = {}
    for d in range(lo, hi + 1):
        if src.slice_dim(d) == 0:
            continue
        N = gfp.nullspace(f.slice_matrix(d), p)
        if N.shape[1]:
            basis[d] = N
            dims[d] = N.shape[1]
    actions = {}
    for d in range(lo + 1, hi + 1):
        if not dims.get(d) or not dims.get(d - 1):
            continue
        for i in range(f.alg.nvars):
            img = gfp.matmul(src.action_matrix(i, d), basis[d], p)
            actions[(i, d)] = gfp.solve(basis[d - 1], img, p)
    mod = VectorizedModule(f.alg, dims, actions)
    return KernelModule(src, basis, mod)


def _submodule_span(target, columns, degree, p, skip=None):
    """Span at `degree` of the right E-submodule generated by the columns.

    `columns` is a list of (gen_degree, ambient_vector); `skip` omits one.
    """
    vecs = []
    amb = target.slice_dim(degree)
    for idx, (g, w) in enumerate(columns):
        if idx == skip:
            continue
        need = degree - g
        for mask in target.alg.basis(need):
            act = target.monomial_action(mask, g)
            vecs.append(gfp.matmul(act, w.reshape(-1, 1), p))
    if not vecs:
        return gfp.zeros(amb, 0)
    return np.hstack(vecs)


def minimize_presentation(f):
    """Prune rows of f whose dual column lies in the span of the others.

    Interpreting the columns of f-dual as relations, a column that is an
    E-combination of the remaining ones is removed; the cokernel of the
    dual is unchanged.  Requires f to have no nonzero degree-0 entries.
    """
    if not f.is_minimal():
        raise DomainError("minimize_presentation needs a matrix without unit entries")
    p = f.alg.p
    fd = f.dual()
    keep = list(range(fd.source.rank))
    changed = True
    while changed and len(keep) > 1:
        changed = False
        cols = []
        for c in keep:
            g = fd.source.gen_degrees[c]
            vec = gfp.zeros(fd.target.slice_dim(g), 1)
            for (r, cc), e in fd.entries.items():
                if cc != c:
                    continue
                off = fd.target.offsets(g)[r]
                v = e.coeff_vector()
                vec[off:off + v.size, 0] = v
            cols.append((g, vec[:, 0]))
        for local, c in enumerate(keep):
            g, v = cols[local]
            span = _submodule_span(fd.target, cols, g, p, skip=local)
            r0 = gfp.rank(span, p)
            r1 = gfp.rank(np.hstack([span, v.reshape(-1, 1)]), p)
            if r1 == r0:
                keep.pop(local)
                changed = True
                break
    new_tgt = FreeEModule(f.alg, tuple(f.target.gen_degrees[r] for r in keep))
    ent = {}
    for new_r, r in enumerate(keep):
        for c in range(f.source.rank):
            e = f.entry(r, c)
            if not e.is_zero:
                ent[(new_r, c)] = e
    return GradedMap(f.source, new_tgt, ent)


# ---------------------------------------------------------------------------
# E-matrix text format


def format_ematrix(f):
    lines = ["ealg n=%d p=%d" % (f.alg.n, f.alg.p)]
    lines.append("rowdegs=%s coldegs=%s" % (
        list(f.target.gen_degrees), list(f.source.gen_degrees)))
    for (r, c) in sorted(f.entries):
        lines.append("entry %d %d : %s" % (r, c, format_element(f.entries[(r, c)])))
    return "\n".join(lines) + "\n"


def _parse_int_list(text, lineno):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError("expected [..] list, got %r" % text, line=lineno)
    inner = text[1:-1].strip()
    if not inner:
        return []
    try:
        return [int(t.strip()) for t in inner.split(",")]
    except ValueError:
        raise ParseError("bad integer list %r" % text, line=lineno)


def parse_ematrix(text, p=None):
    """Parse the E-matrix format; omitted entries are zero."""
    lines = text.splitlines()
    alg = None
    rowdegs = coldegs = None
    entries = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("ealg"):
            fields = dict(tok.split("=", 1) for tok in line.split()[1:] if "=" in tok)
            try:
                n = int(fields["n"])
                fp = int(fields.get("p", p if p is not None else 0) or fields["p"])
            except (KeyError, ValueError):
                raise ParseError("malformed header %r" % line, line=lineno)
            if p is not None:
                fp = p
            alg = Algebra(n, fp)
        elif line.startswith("rowdegs="):
            try:
                rpart, cpart = line.split("coldegs=")
            except ValueError:
                raise ParseError("expected 'rowdegs=[..] coldegs=[..]'", line=lineno)
            rowdegs = _parse_int_list(rpart.split("=", 1)[1], lineno)
            coldegs = _parse_int_list(cpart, lineno)
        elif line.startswith("entry"):
            if alg is None or rowdegs is None:
                raise ParseError("entry before header", line=lineno)
            head, _, expr = line.partition(":")
            toks = head.split()
            if len(toks) != 3:
                raise ParseError("expected 'entry r c : <element>'", line=lineno)
            try:
                r, c = int(toks[1]), int(toks[2])
            except ValueError:
                raise ParseError("bad entry indices %r" % head, line=lineno)
            if not (0 <= r < len(rowdegs) and 0 <= c < len(coldegs)):
                raise ParseError("entry (%d,%d) outside %dx%d matrix"
                                 % (r, c, len(rowdegs), len(coldegs)), line=lineno)
            try:
                el = parse_element(alg, expr)
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno)
            if not el.is_zero:
                entries[(r, c)] = el
        else:
            raise ParseError("unrecognized line %r" % line, line=lineno)
    if alg is None or rowdegs is None or coldegs is None:
        raise ParseError("missing ealg header or degree lists", line=len(lines))
    try:
        return GradedMap(FreeEModule(alg, coldegs), FreeEModule(alg, rowdegs), entries)
    except DomainError as exc:
        raise ParseError(str(exc), line=len(lines))
