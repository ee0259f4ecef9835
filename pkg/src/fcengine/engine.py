"""Derivation steps on FCs and script replay.

Each step consumes a node's FC, checks the hypotheses that make the move
meaning-preserving, and produces child FCs.  A script is a JSON-lines
record: a header naming the initial FC, then one record per step.
Replay is deterministic, including the names of parameters introduced by
family expansions (a1, a2, ... in step order).
"""

import json

import sympy

from . import coeffs as cf
from .coeffs import cdiv, cmul, cneg, is_zero, parse_coeff
from .fc import (FC, FCError, build_orbit_fc, classify, classify_ordered,
                 convolution_build, lie_bracket_vec, rref, vec_sub_scaled)
from .lattice import (UnipElem, WeylPerm, check_root, conj_vec, conj_vec_upper,
                      elem_from_payload, LowerTriangularImage,
                      UnrepresentableDomain)
from .orbits import dominance_cmp, fmt_partition, gk_dim, strip_ones


class EngineError(Exception):
    pass


class AlreadyInDomain(EngineError):
    pass


class NotInvariant(EngineError):
    pass


class XNotAbelian(EngineError):
    pass


class YNotAbelian(EngineError):
    pass


class XNotInDomain(EngineError):
    pass


class CharacterNontrivialOnX(EngineError):
    pass


class YMeetsDomain(EngineError):
    pass


class DomainNotSemidirect(EngineError):
    pass


class YNotNormalizing(EngineError):
    pass


class XNotFixingCharacter(EngineError):
    pass


class YNotFixingCharacter(EngineError):
    pass


class BracketEscapesCore(EngineError):
    pass


class DegeneratePairing(EngineError):
    pass


class NoOpenOrbit(EngineError):
    pass


class NotASubgroup(EngineError):
    pass


class BlockMismatch(EngineError):
    pass


class DomainOverlap(EngineError):
    pass


class WitnessFails(EngineError):
    pass


class CasesDontCover(EngineError):
    pass


_PROBE = sympy.Symbol("_t")


# -- steps -------------------------------------------------------------


def conjugate(fc, elems):
    """Sequential conjugation; domain rows map to g v g^-1 keeping their
    character values (the transported character is l(g^-1 w g))."""
    for g in elems:
        strict = LowerTriangularImage if isinstance(g, WeylPerm) else UnrepresentableDomain
        pairs = [(conj_vec_upper(g, row, strict), cv) for row, cv in fc.pairs()]
        fc = FC.make(fc.n, pairs, fc.param_excl).validate()
    return fc


def expand(fc, root, param_name):
    """Adjoin an invariant direction; constant and family children."""
    root = check_root(root, fc.n)
    if fc.contains({root: 1}):
        raise AlreadyInDomain(f"{root} already lies in the domain")
    probe = UnipElem(root, _PROBE)
    for row, cv in fc.pairs():
        img = conj_vec(probe, row)
        residual, ell = fc.reduce(img)
        if residual:
            raise NotInvariant(
                f"conjugation along {root} moves the row at {min(row)} "
                f"off the domain (at {sorted(residual)})")
        if not is_zero(cf.csub(ell, cv)):
            raise NotInvariant(
                f"conjugation along {root} shifts the character on the "
                f"row at {min(row)}")
    const = FC.make(fc.n, fc.pairs() + [({root: 1}, 0)], fc.param_excl).validate()
    excl = dict(fc.param_excl)
    excl[param_name] = ()
    family = FC.make(fc.n, fc.pairs() + [({root: 1}, cf.param(param_name))],
                     excl).validate()
    return const, family


def _strip_positions(fc, positions):
    """Pairs of fc with the given pure-position components removed.

    Valid only when the character vanishes on those positions, so the
    values are unchanged.
    """
    out = []
    for row, cv in fc.pairs():
        vec = {p: v for p, v in row.items() if p not in positions}
        if vec:
            out.append((vec, cv))
    return out


def exchange(fc, Y, X):
    """Root exchange: swap the abelian X inside the domain for Y outside.

    The domain must split as X x L0 with L0 normalized by X and Y, both
    fixing the restricted character, the character trivial on X, [X, Y]
    inside L0, and the pairing psi([x, y]) nondegenerate.
    """
    from .lattice import bracket
    Y = [check_root(r, fc.n) for r in Y]
    X = [check_root(r, fc.n) for r in X]
    for i in range(len(X)):
        for j in range(i + 1, len(X)):
            if bracket(X[i], X[j]) is not None:
                raise XNotAbelian(f"[{X[i]}, {X[j]}] != 0")
    for i in range(len(Y)):
        for j in range(i + 1, len(Y)):
            if bracket(Y[i], Y[j]) is not None:
                raise YNotAbelian(f"[{Y[i]}, {Y[j]}] != 0")
    for x in X:
        if not fc.contains({x: 1}):
            raise XNotInDomain(f"{x} is not in the domain")
        if not is_zero(fc.ell({x: 1})):
            raise CharacterNontrivialOnX(f"character is nonzero on {x}")
    grown = rref(fc.pairs() + [({y: 1}, 0) for y in Y])
    if len(grown) != fc.domain_dim() + len(Y):
        raise YMeetsDomain("Y intersects the domain span")

    core = FC.make(fc.n, _strip_positions(fc, set(X)), fc.param_excl)
    if core.domain_dim() != fc.domain_dim() - len(X):
        raise DomainNotSemidirect(
            "domain does not split as X plus an X-free core")
    for a in range(core.domain_dim()):
        for b in range(a + 1, core.domain_dim()):
            br = lie_bracket_vec(core.rows[a], core.rows[b])
            if br and not core.contains(br):
                raise DomainNotSemidirect("core is not bracket-closed")
    for x in X:
        for row in core.rows:
            br = lie_bracket_vec({x: 1}, row)
            if br and not core.contains(br):
                raise DomainNotSemidirect(f"[{x}, core] escapes the core")
    for y in Y:
        for row in core.rows:
            br = lie_bracket_vec({y: 1}, row)
            if br and not core.contains(br):
                raise YNotNormalizing(f"[{y}, core] escapes the core")

    def char_fixed(root):
        probe = UnipElem(root, _PROBE)
        for row, cv in core.pairs():
            img = conj_vec(probe, row)
            residual, ell = core.reduce(img)
            if residual or not is_zero(cf.csub(ell, cv)):
                return False
        return True

    for x in X:
        if not char_fixed(x):
            raise XNotFixingCharacter(f"conjugation by {x} moves the core character")
    for y in Y:
        if not char_fixed(y):
            raise YNotFixingCharacter(f"conjugation by {y} moves the core character")
    for x in X:
        for y in Y:
            br = lie_bracket_vec({x: 1}, {y: 1})
            if br and not core.contains(br):
                raise BracketEscapesCore(f"[{x}, {y}] is outside the core")
    if len(X) != len(Y):
        raise DegeneratePairing(f"|X| = {len(X)} != |Y| = {len(Y)}")
    M = [[core.ell(lie_bracket_vec({x: 1}, {y: 1}) or {}) if
          lie_bracket_vec({x: 1}, {y: 1}) else 0 for y in Y] for x in X]
    if is_zero(_det(M)):
        raise DegeneratePairing("pairing matrix is singular")
    out = FC.make(fc.n, core.pairs() + [({y: 1}, 0) for y in Y], fc.param_excl)
    return out.validate()


def _det(M):
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        if is_zero(M[0][j]):
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = cmul(M[0][j], _det(minor))
        total = cf.cadd(total, term if j % 2 == 0 else cneg(term))
    return total


def cts(fc, roots, cochars, mode="adjoin"):
    """Adjoin (or consume) a torus-spread complement at character zero.

    The listed cocharacters must act on the complement coordinates with
    full rank (an open torus orbit).  Returns the new FC and a flag
    telling whether those cocharacters also fix the character; callers
    record the flag, nothing here depends on it.
    """
    from .lattice import bracket
    roots = [check_root(r, fc.n) for r in roots]
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if bracket(roots[i], roots[j]) is not None:
                raise NotInvariant(f"cts block not abelian: {roots[i]}, {roots[j]}")
    W = [[v[j - 1] - v[i - 1] for (i, j) in roots] for v in cochars]
    from .orbits import _sparse_rank
    rank = _sparse_rank([{c: x for c, x in enumerate(row) if x} for row in W])
    if rank != len(roots):
        raise NoOpenOrbit(
            f"cocharacter weights have rank {rank} < {len(roots)}")
    fixes = True
    for v in cochars:
        for row, cv in zip(fc.rows, fc.char):
            if is_zero(cv):
                continue
            if any(v[i - 1] != v[j - 1] for (i, j) in row):
                fixes = False
    if mode == "adjoin":
        for r in roots:
            if fc.contains({r: 1}):
                raise AlreadyInDomain(f"{r} already lies in the domain")
        try:
            out = FC.make(fc.n, fc.pairs() + [({r: 1}, 0) for r in roots],
                          fc.param_excl).validate()
        except FCError as e:
            raise NotInvariant(f"cts block does not extend the FC: {e}") from e
        return out, fixes
    if mode == "drop":
        for r in roots:
            if not fc.contains({r: 1}):
                raise NotInvariant(f"{r} is not in the domain")
            if not is_zero(fc.ell({r: 1})):
                raise NotInvariant(f"character is nonzero on {r}")
        try:
            out = FC.make(fc.n, _strip_positions(fc, set(roots)),
                          fc.param_excl).validate()
        except FCError as e:
            raise NotInvariant(f"domain without the cts block fails: {e}") from e
        if out.domain_dim() != fc.domain_dim() - len(roots):
            raise NotInvariant("cts block does not split off the domain")
        back = FC.make(fc.n, out.pairs() + [({r: 1}, 0) for r in roots],
                       fc.param_excl)
        if not back.equal(fc):
            raise NotInvariant("re-adjoining the cts block does not restore the FC")
        return out, fixes
    raise EngineError(f"unknown cts mode: {mode}")


def restrict(fc, rows):
    """Sub-FC spanned by the selected basis rows (0-based indices)."""
    try:
        picked = [(dict(fc.rows[i]), fc.char[i]) for i in rows]
    except IndexError as e:
        raise EngineError(f"row index out of range: {rows}") from e
    try:
        return FC.make(fc.n, picked, fc.param_excl).validate()
    except FCError as e:
        raise NotASubgroup(str(e)) from e


def compose(fc, offset, head):
    """Stack a head FC over this one shifted into the lower-right block."""
    if head.n != offset + fc.n:
        raise BlockMismatch(
            f"head rank {head.n} != offset {offset} + inner rank {fc.n}")
    for row in head.rows:
        if any(i > offset for (i, j) in row):
            raise BlockMismatch(
                f"head row at {min(row)} reaches below row {offset}")
    shifted = [({(i + offset, j + offset): v for (i, j), v in row.items()}, cv)
               for row, cv in fc.pairs()]
    pairs = head.pairs() + shifted
    merged = rref(pairs)
    if len(merged) != head.domain_dim() + fc.domain_dim():
        raise DomainOverlap("head and shifted domains intersect")
    excl = dict(fc.param_excl)
    excl.update(head.param_excl)
    return FC.make(head.n, pairs, excl).validate()


def split_cases(fc, name, cases):
    """Case split on a live parameter: named special values plus one
    generic branch that excludes them."""
    if name not in fc.param_excl:
        raise EngineError(f"{name} is not a live parameter")
    generic = [c for c in cases if c.get("generic")]
    specials = [c for c in cases if not c.get("generic")]
    if len(generic) != 1 or not specials:
        raise CasesDontCover("need named special values and exactly one generic case")
    vals = [parse_coeff(c["value"]) for c in specials]
    for v in vals:
        if is_zero(v):
            raise CasesDontCover("special value 0 duplicates the constant branch")
        for e in fc.param_excl[name]:
            if is_zero(cf.csub(v, e)):
                raise CasesDontCover(f"special value {cf.to_str(v)} already excluded")
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if is_zero(cf.csub(vals[i], vals[j])):
                raise CasesDontCover(f"duplicate special value {cf.to_str(vals[i])}")
    out = []
    for case, v in zip(specials, vals):
        excl = {k: e for k, e in fc.param_excl.items() if k != name}
        pairs = [({p: cf.subs_params(c, {name: v}) for p, c in row.items()},
                  cf.subs_params(cv, {name: v})) for row, cv in fc.pairs()]
        pairs = [(dict((p, c) for p, c in row.items() if not is_zero(c)), cv)
                 for row, cv in pairs]
        pairs = [(row, cv) for row, cv in pairs if row]
        child = FC.make(fc.n, pairs, excl).validate()
        if case.get("witness"):
            elems = [elem_from_payload(e, fc.n) for e in case["witness"]]
            probe = conjugate(child, elems)
            if len(probe.live_params()) >= len(child.live_params()) and child.live_params():
                raise WitnessFails(f"witness does not simplify the {cf.to_str(v)} case")
        out.append((case["as"], child, v))
    excl = dict(fc.param_excl)
    excl[name] = tuple(excl[name]) + tuple(vals)
    out.append((generic[0]["as"], FC(fc.n, fc.rows, fc.char, excl), None))
    return out


def collapse(fc, elems):
    """Conjugate a parameter family onto a single representative."""
    if not fc.live_params():
        raise EngineError("collapse needs live parameters")
    result = conjugate(fc, elems)
    if result.live_params():
        raise WitnessFails(
            f"witness leaves parameters {result.live_params()} alive")
    return result


# -- trees and replay --------------------------------------------------


class Node:
    def __init__(self, name, fc, parent=None):
        self.name = name
        self.fc = fc
        self.parent = parent
        self.children = []
        self.pruned = False
        self.infinite = False  # set by collapse or carried by live params
        self.step = None  # record of the step applied AT this node
        self.notes = []

    def is_leaf(self):
        return not self.children


class Tree:
    def __init__(self, header):
        self.header = dict(header)
        self.n = header["n"]
        self.label = header.get("label", "")
        self.Q = header.get("Q")
        init = build_init(header["init"])
        if init.n != self.n:
            raise EngineError(f"init rank {init.n} != header n {self.n}")
        self.root = Node("root", init.validate())
        self.nodes = {"root": self.root}
        self.params = []
        self.assumptions = set()
        self.records = [dict(header)]

    def next_param(self):
        name = f"a{len(self.params) + 1}"
        self.params.append(name)
        return name

    def add_child(self, parent, name, fc, infinite=False):
        if name in self.nodes:
            raise EngineError(f"duplicate node name: {name}")
        node = Node(name, fc, parent)
        node.infinite = infinite or parent.infinite
        parent.children.append(node)
        self.nodes[name] = node
        return node

    def leaves(self):
        out = []

        def walk(node):
            if node.is_leaf():
                out.append(node)
            for ch in node.children:
                walk(ch)

        walk(self.root)
        return out


def build_init(spec):
    kind = spec["kind"]
    if kind == "orbit":
        return build_orbit_fc(spec["partition"], spec.get("variant", "down"),
                              spec.get("blocks"))
    if kind == "convolution":
        inner = build_orbit_fc(spec["partition"], spec.get("variant", "down"),
                               spec.get("blocks"))
        return convolution_build(spec["outer"], inner)
    if kind == "explicit":
        n = spec["n"]
        pairs = []
        for gen in spec["generators"]:
            vec = {tuple(pos): parse_coeff(c) for pos, c in gen["terms"]}
            pairs.append((vec, parse_coeff(gen.get("char", "0"))))
        return FC.make(n, pairs)
    raise EngineError(f"unknown init kind: {kind}")


def apply_step(tree, rec):
    at = rec["at"]
    node = tree.nodes.get(at)
    if node is None:
        raise EngineError(f"no such node: {at}")
    if node.step is not None:
        raise EngineError(f"node {at} already has a step")
    op = rec["op"]
    fc = node.fc
    if op == "conjugate":
        elems = [elem_from_payload(e, tree.n) for e in rec["g"]]
        tree.add_child(node, rec["as"], conjugate(fc, elems))
    elif op == "expand":
        pname = tree.next_param()
        const, family = expand(fc, tuple(rec["root"]), pname)
        c_name, f_name = rec["as"]
        tree.add_child(node, c_name, const)
        tree.add_child(node, f_name, family)
    elif op == "exchange":
        out = exchange(fc, [tuple(r) for r in rec["Y"]],
                       [tuple(r) for r in rec["X"]])
        tree.add_child(node, rec["as"], out)
    elif op == "cts":
        out, fixes = cts(fc, [tuple(r) for r in rec["roots"]],
                         rec.get("cochars", []), rec.get("mode", "adjoin"))
        child = tree.add_child(node, rec["as"], out)
        if not fixes:
            child.notes.append("cts torus does not fix the character")
    elif op == "restrict":
        tree.add_child(node, rec["as"], restrict(fc, rec["rows"]))
    elif op == "compose":
        head = build_init(rec["init"])
        tree.add_child(node, rec["as"], compose(fc, rec["offset"], head))
    elif op == "split":
        for name, child, _ in split_cases(fc, rec["param"], rec["cases"]):
            tree.add_child(node, name, child)
    elif op == "collapse":
        elems = [elem_from_payload(e, tree.n) for e in rec["witness"]]
        out = collapse(fc, elems)
        tree.add_child(node, rec["as"], out, infinite=True)
    elif op == "prune":
        if fc.domain_dim() <= tree.root.fc.domain_dim():
            raise EngineError(
                f"prune at {at} unjustified: dim {fc.domain_dim()} <= "
                f"root dim {tree.root.fc.domain_dim()}")
        node.pruned = True
        node.step = rec
        tree.assumptions.add("GC2")
        tree.records.append(dict(rec))
        return
    else:
        raise EngineError(f"unknown op: {op}")
    node.step = rec
    tree.records.append(dict(rec))


def replay(records):
    """Run a parsed script; returns the finished tree with classified leaves."""
    tree = Tree(records[0])
    for rec in records[1:]:
        apply_step(tree, rec)
    for leaf in tree.leaves():
        if leaf.pruned:
            continue
        leaf.classification = classify(leaf.fc)
        leaf.ordered = (classify_ordered(leaf.fc, tree.Q)
                        if tree.Q is not None else None)
        leaf.tag = ("infinite-family"
                    if leaf.infinite or leaf.fc.live_params() else "one")
    return tree


# -- reports -----------------------------------------------------------


def report(tree):
    leaves = tree.leaves()
    assumptions = sorted(tree.assumptions)
    leaf_rows = []
    for leaf in leaves:
        row = {"name": leaf.name}
        if leaf.pruned:
            row["class"] = None
            row["pruned"] = True
            row["tag"] = "excluded"
        else:
            row["class"] = fmt_partition(leaf.classification)
            if tree.Q is not None:
                row["ordered"] = fmt_partition(leaf.ordered)
            row["pruned"] = False
            row["tag"] = leaf.tag
            row["gk_dim"] = gk_dim(leaf.classification)
            row["domain_dim"] = leaf.fc.domain_dim()
        leaf_rows.append(row)
    candidates = []
    seen = set()
    for leaf in leaves:
        if leaf.pruned or leaf.tag != "one":
            continue
        cls = leaf.ordered if tree.Q is not None else leaf.classification
        key = (strip_ones(cls), sum(cls))
        if key not in seen:
            seen.add(key)
            candidates.append(fmt_partition(cls))
    classes = {}
    for leaf in leaves:
        if leaf.pruned:
            continue
        classes.setdefault(leaf.classification, []).append(leaf)
    minimal = []
    for cls in classes:
        if any(dominance_cmp(other, cls) == "less" for other in classes
               if other != cls):
            continue
        minimal.append(cls)
    minimal.sort(reverse=True)
    root_dim = tree.root.fc.domain_dim()
    min_rows = []
    for cls in minimal:
        members = classes[cls]
        if any(m.tag == "infinite-family" for m in members):
            tag = "infinite-family"
        elif len(members) > 1:
            tag = "finite"
        else:
            tag = "one"
        g = gk_dim(cls)
        if "GC2" in assumptions:
            finite = g == root_dim
        else:
            finite = tag != "infinite-family"
        min_rows.append({
            "class": fmt_partition(cls),
            "tag": tag,
            "gk_dim": g,
            "domain_dim_root": root_dim,
            "gk_equals_domain": g == root_dim,
            "finite": finite,
        })
    notes = []
    for leaf in leaves:
        node = leaf
        while node is not None:
            for note in node.notes:
                entry = f"{node.name}: {note}"
                if entry not in notes:
                    notes.append(entry)
            node = node.parent
    out = {
        "script": tree.label,
        "engine": "fcengine 0.1.0",
        "n": tree.n,
        "Q": list(tree.Q) if tree.Q is not None else None,
        "params": list(tree.params),
        "assumptions": assumptions,
        "leaves": leaf_rows,
        "candidates": candidates,
        "minimal": min_rows,
        "notes": notes,
    }
    return out


def minimal_line(rep) -> str:
    items = [f"{row['class']} [{row['tag']}]" for row in rep["minimal"]]
    return "minimal: " + ", ".join(items)


# -- script io ---------------------------------------------------------


def dumps_script(records) -> str:
    return "".join(json.dumps(rec, separators=(",", ":")) + "\n"
                   for rec in records)


def loads_script(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def report_json(rep) -> str:
    return json.dumps(rep, indent=2) + "\n"
