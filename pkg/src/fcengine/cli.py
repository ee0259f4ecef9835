"""Command-line front end.

Five subcommands: `replay` runs a .fcs script and prints its report,
`ansets` tabulates the recursive candidate families, `repl` steps a
derivation interactively, `verify-corpus` checks every bundled script
plus the cross-check suites, and `search` looks for an explicit
conjugator between the end states of two scripts.

Exit codes: 0 ok, 1 verification failure, 2 usage error.
"""

import argparse
import json
import random
import sys
from importlib import resources

from . import coeffs as cf
from . import corpus
from .algos import (BudgetExceeded, an_sets, conjugator_search,
                    finite_candidates, fn_domain_dim, nless_normalize,
                    smallc_construct)
from .engine import (EngineError, Tree, apply_step, conjugate, dumps_script,
                     expand, loads_script, minimal_line, replay, report,
                     report_json)
from .fc import (FC, DegenerateSample, FCError, build_orbit_fc, classify,
                 jordan_oracle)
from .lattice import LatticeError, elem_to_payload
from .orbits import fmt_partition, gk_dim, normalize_partition, partitions

OK, FAIL, USAGE = 0, 1, 2


def _load_script(path):
    with open(path, encoding="utf-8") as fh:
        records = loads_script(fh.read())
    if not records:
        raise ValueError("empty script")
    return records


# -- replay ------------------------------------------------------------


def _locate_failure(records):
    """Line number and record of the first step that fails to apply."""
    try:
        tree = Tree(records[0])
    except Exception:
        return 1, records[0]
    for lineno, rec in enumerate(records[1:], start=2):
        try:
            apply_step(tree, rec)
        except Exception:
            return lineno, rec
    return None, None


def _print_summary(rep):
    head = f"script {rep['script'] or '<unlabeled>'}: n={rep['n']}"
    if rep["Q"]:
        head += ", Q=(" + ",".join(map(str, rep["Q"])) + ")"
    if rep["assumptions"]:
        head += ", assuming " + ",".join(rep["assumptions"])
    print(head)
    for row in rep["leaves"]:
        if row["pruned"]:
            print(f"  {row['name']}: pruned")
            continue
        line = (f"  {row['name']}: {row['class']} [{row['tag']}]"
                f" gk {row['gk_dim']} dom {row['domain_dim']}")
        if "ordered" in row:
            line += f" ordered {row['ordered']}"
        print(line)
    if rep["candidates"]:
        print("candidates: " + ", ".join(rep["candidates"]))
    print(minimal_line(rep))
    for note in rep["notes"]:
        print("note " + note)


def cmd_replay(args):
    try:
        records = _load_script(args.script)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"fcengine: cannot load {args.script}: {exc}", file=sys.stderr)
        return USAGE
    try:
        tree = replay(records)
    except Exception as exc:
        lineno, rec = _locate_failure(records)
        if lineno is None:
            print(f"fcengine: replay failed while classifying leaves: "
                  f"{type(exc).__name__}: {exc}", file=sys.stderr)
        else:
            name = rec.get("as") or rec.get("at") or "header"
            if isinstance(name, list):
                name = ",".join(name)
            print(f"fcengine: replay failed at line {lineno} "
                  f"(step {name}, op {rec.get('op', 'header')}): "
                  f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return FAIL
    rep = report(tree)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report_json(rep))
    if args.json:
        sys.stdout.write(report_json(rep))
    else:
        _print_summary(rep)
    return OK


# -- ansets ------------------------------------------------------------


def cmd_ansets(args):
    try:
        make = finite_candidates if args.filter_dim else an_sets
        aset = make(args.n, args.k, args.op)
        dom = fn_domain_dim(args.n, args.k)
    except ValueError as exc:
        print(f"fcengine: {exc}", file=sys.stderr)
        return USAGE
    rows = []
    for elem in aset:
        proj = normalize_partition(elem)
        g = gk_dim(proj)
        rows.append({"ordered": list(elem),
                     "projection": fmt_partition(proj),
                     "gk_dim": g,
                     "gk_equals_domain": g == dom})
    warning = None
    if args.op == "intersection" and not rows and args.n >= 4:
        warning = (f"the two branch images are disjoint for n >= 4 (leading "
                   f"parts >= {args.k + 2} vs exactly {args.k + 1}); the "
                   "intersection form of the recursion is a typo for the "
                   "union, rerun with --op union")
    if args.json:
        out = {"n": args.n, "k": args.k, "op": args.op, "domain_dim": dom,
               "filter_dim": bool(args.filter_dim), "elements": rows}
        if warning:
            out["warning"] = warning
        print(json.dumps(out, indent=2))
        return OK
    filt = " filtered to gk == dom" if args.filter_dim else ""
    print(f"A({args.n},{args.k}) {args.op}{filt}: {len(rows)} element(s), "
          f"domain dim {dom}")
    for row in rows:
        ordered = "(" + ",".join(map(str, row["ordered"])) + ")"
        mark = "=" if row["gk_equals_domain"] else "!="
        print(f"  {ordered:<18} -> {row['projection']:<12} "
              f"gk {row['gk_dim']:>3} {mark} dom {dom}")
    if warning:
        print("warning: " + warning)
    return OK


# -- repl --------------------------------------------------------------

_REPL_HELP = """\
commands:
  {"op": ..., ...}   apply a step at the current node; "at" and "as" are
                     filled in automatically when omitted
  legal              expansion roots the invariance check accepts here
  nodes              list all nodes (* marks the current one)
  show [NAME]        print a node's rows and character
  goto NAME          move the cursor
  export [PATH]      write the session as a .fcs script (stdout if no PATH)
  help               this text
  quit               leave
ops: exchange conjugate expand cts restrict compose split collapse prune"""

_KEYWORDS = ("help", "legal", "nodes", "show", "goto ", "export ", "quit")


def _legal_roots(fc):
    """Expansion roots the invariance check accepts on fc."""
    out = []
    for i in range(1, fc.n + 1):
        for j in range(i + 1, fc.n + 1):
            try:
                expand(fc, (i, j), "probe")
            except (EngineError, FCError):
                continue
            out.append((i, j))
    return out


def _state_line(tree, name):
    node = tree.nodes[name]
    fc = node.fc
    line = f"{name}: dim {fc.domain_dim()}"
    try:
        sup = " ".join(f"({r[0]},{r[1]})={cf.to_str(v)}"
                       for r, v in fc.support_roots())
        line += "  charged " + (sup or "nothing")
    except FCError:
        line += "  charged rows tied"
    params = fc.live_params()
    if params:
        line += "  params " + ",".join(params)
    flags = []
    if node.pruned:
        flags.append("pruned")
    elif node.step is not None:
        flags.append("stepped:" + node.step["op"])
    if flags:
        line += "  [" + ",".join(flags) + "]"
    return line


class _Repl:
    def __init__(self, tree):
        self.tree = tree
        self.current = "root"
        self.count = 0

    def next_name(self):
        self.count += 1
        return f"v{self.count}"

    def build_record(self, parsed):
        # house key order: op (mode) at <user fields> as (label)
        rec = {"op": parsed["op"]}
        if "mode" in parsed:
            rec["mode"] = parsed["mode"]
        rec["at"] = parsed.get("at", self.current)
        for key, val in parsed.items():
            if key in ("op", "mode", "at", "as", "label"):
                continue
            rec[key] = val
        op = rec["op"]
        if op == "split":
            cases = []
            for case in rec.get("cases", ()):
                case = dict(case)
                if "as" not in case:
                    case["as"] = self.next_name()
                cases.append(case)
            rec["cases"] = cases
        elif op == "expand":
            got = parsed.get("as")
            rec["as"] = list(got) if got else [self.next_name(),
                                               self.next_name()]
        elif op != "prune":
            rec["as"] = parsed.get("as") or self.next_name()
        if "label" in parsed:
            rec["label"] = parsed["label"]
        return rec

    def step(self, line):
        count_before = self.count
        params_before = len(self.tree.params)
        try:
            parsed = json.loads(line)
            if not isinstance(parsed, dict) or "op" not in parsed:
                raise ValueError('a step is a JSON object with an "op" field')
            rec = self.build_record(parsed)
            apply_step(self.tree, rec)
        except Exception as exc:
            # failed attempts roll back allocated names and params
            self.count = count_before
            del self.tree.params[params_before:]
            print(f"rejected: {type(exc).__name__}: {exc}")
            return
        op = rec["op"]
        if op == "expand":
            const, family = rec["as"]
            print("ok " + _state_line(self.tree, const))
            print("ok " + _state_line(self.tree, family))
            self.current = family
        elif op == "split":
            for case in rec["cases"]:
                print("ok " + _state_line(self.tree, case["as"]))
            generic = [c["as"] for c in rec["cases"] if c.get("generic")]
            self.current = generic[0] if generic else rec["cases"][-1]["as"]
        elif op == "prune":
            print(f"ok {rec['at']} pruned")
        else:
            print("ok " + _state_line(self.tree, rec["as"]))
            self.current = rec["as"]

    def command(self, line):
        parts = line.split(None, 1)
        cmd = parts[0]
        arg = parts[1].strip() if len(parts) > 1 else ""
        tree = self.tree
        if cmd == "help":
            print(_REPL_HELP)
        elif cmd == "nodes":
            for name in tree.nodes:
                star = "*" if name == self.current else " "
                print(f" {star} " + _state_line(tree, name))
        elif cmd == "goto":
            if arg in tree.nodes:
                self.current = arg
                print(_state_line(tree, arg))
            else:
                print(f"no such node: {arg!r}")
        elif cmd == "show":
            name = arg or self.current
            node = tree.nodes.get(name)
            if node is None:
                print(f"no such node: {name!r}")
                return
            print(_state_line(tree, name))
            for row, cv in zip(node.fc.rows, node.fc.char):
                terms = " + ".join(
                    f"{cf.to_str(c)}*({i},{j})" if not cf.ceq(c, 1)
                    else f"({i},{j})"
                    for (i, j), c in sorted(row.items()))
                print(f"    {terms}  | char {cf.to_str(cv)}")
            try:
                print("    class " + fmt_partition(classify(node.fc)))
            except FCError:
                pass
        elif cmd == "legal":
            node = tree.nodes.get(self.current)
            roots = _legal_roots(node.fc)
            if roots:
                print("legal expansion roots: " +
                      " ".join(f"({i},{j})" for i, j in roots))
            else:
                print("no legal expansion root here")
        elif cmd == "export":
            text = dumps_script(tree.records)
            if arg:
                with open(arg, "w", encoding="utf-8") as fh:
                    fh.write(text)
                print(f"wrote {arg} ({len(tree.records)} record(s))")
            else:
                sys.stdout.write(text)
        else:
            print(f"unknown command {cmd!r}; try help")

    def completions(self):
        cands = list(_KEYWORDS)
        node = self.tree.nodes.get(self.current)
        if node is not None and node.step is None and not node.pruned:
            for i, j in _legal_roots(node.fc):
                cands.append('{"op": "expand", "root": [%d, %d]}' % (i, j))
        return cands

    def setup_completion(self):
        try:
            import readline
        except ImportError:
            return

        def complete(text, state):
            matches = [c for c in self.completions() if c.startswith(text)]
            return matches[state] if state < len(matches) else None

        readline.set_completer_delims("\n")
        readline.set_completer(complete)
        readline.parse_and_bind("tab: complete")

    def run(self):
        interactive = sys.stdin.isatty()
        if interactive:
            self.setup_completion()
            label = self.tree.label or "session"
            print(f"stepping {label} (n={self.tree.n}); help lists commands")
            print(_state_line(self.tree, "root"))
        while True:
            try:
                line = input("fcs> " if interactive else "")
            except EOFError:
                break
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line in ("quit", "exit"):
                break
            if line.startswith("{"):
                self.step(line)
            else:
                self.command(line)
        return OK


def _load_init(spec):
    if spec.lstrip().startswith("{"):
        header = json.loads(spec)
    else:
        header = _load_script(spec)[0]
    if "n" not in header or "init" not in header:
        raise ValueError('the initial record needs "n" and "init" fields')
    if "fcs" not in header:
        header = {"fcs": 1, **header}
    return header


def cmd_repl(args):
    try:
        header = _load_init(args.init)
        tree = Tree(header)
    except (OSError, ValueError, json.JSONDecodeError, EngineError,
            FCError, LatticeError) as exc:
        print(f"fcengine: bad init: {exc}", file=sys.stderr)
        return USAGE
    return _Repl(tree).run()


# -- verify-corpus -----------------------------------------------------

# classes and tags of the unpruned leaves of every bundled script
_EXPECTED_LEAVES = {
    "ex1": [("(3,1)", "one")],
    "ex2": [("(5,2)", "one")],
    "ex3": [("(3^2)", "one"), ("(4,1^2)", "one"),
            ("(4,2)", "infinite-family")],
    "ex3-k": [("(4,3)", "one"), ("(5,1^2)", "one"),
              ("(5,2)", "infinite-family")],
    "ex4": [("(4^2,1)", "one"), ("(5,2^2)", "one"),
            ("(5,3,1)", "infinite-family")],
    "ex5-F4": [("(4,3,1)", "infinite-family"), ("(4,3,1)", "one"),
               ("(4,3,1)", "one"), ("(4^2)", "infinite-family"),
               ("(5,1^3)", "one"), ("(5,2,1)", "infinite-family"),
               ("(5,2,1)", "infinite-family"),
               ("(5,3)", "infinite-family")],
    "ex5-F4k": [("(4^2,1)", "one"), ("(5,3,1)", "infinite-family"),
                ("(5,3,1)", "one"), ("(5,4)", "infinite-family"),
                ("(6,1^3)", "one"), ("(6,2,1)", "infinite-family"),
                ("(6,2,1)", "infinite-family"),
                ("(6,3)", "infinite-family")],
    "f5": [("(4,3^2)", "one"), ("(4^2,1^2)", "one"), ("(5,3,1^2)", "one"),
           ("(5,3,1^2)", "one"), ("(5,3,2)", "infinite-family"),
           ("(5,4,1)", "infinite-family"), ("(6,1^4)", "one"),
           ("(6,2,1^2)", "infinite-family"),
           ("(6,2,1^2)", "infinite-family"),
           ("(6,3,1)", "infinite-family")],
    "fnk-53": [("(4^2,3)", "one"), ("(5,4,1^2)", "one"),
               ("(5,4,1^2)", "one"), ("(5,4,2)", "infinite-family"),
               ("(6,3,1^2)", "one"), ("(6,4,1)", "infinite-family"),
               ("(7,1^4)", "one"), ("(7,2,1^2)", "infinite-family"),
               ("(7,2,1^2)", "infinite-family"),
               ("(7,3,1)", "infinite-family")],
    "small-conj-counterexample": [("(2^2)", "infinite-family"),
                                  ("(3,1)", "one")],
    "wrong-lemma": [("(3^2)", "one"), ("(4,1^2)", "one"),
                    ("(4,2)", "infinite-family")],
}


def _leaf_sample_class(leaf):
    params = leaf.fc.live_params()
    for s in (2, 3, 5):
        try:
            return jordan_oracle(leaf.fc, sample={p: s for p in params})
        except DegenerateSample:
            continue
    return None


def verify_script_records(name, records, raw_text=None):
    """Check one corpus script; a row of the verification matrix."""
    row = {"script": name, "replay": False, "bytes": None, "oracle": False,
           "classes": False}
    if raw_text is not None:
        row["bytes"] = dumps_script(corpus.build_script(name)) == raw_text
    try:
        tree = replay(records)
        row["replay"] = True
    except Exception as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    leaves = [leaf for leaf in tree.leaves() if not leaf.pruned]
    row["oracle"] = True
    for leaf in leaves:
        got = _leaf_sample_class(leaf)
        if got != leaf.classification:
            row["oracle"] = False
            row["error"] = (f"leaf {leaf.name}: rank oracle {got} vs "
                            f"classify {leaf.classification}")
            break
    found = sorted((fmt_partition(leaf.classification), leaf.tag)
                   for leaf in leaves)
    expected = [tuple(e) for e in _EXPECTED_LEAVES.get(name, [])]
    row["classes"] = found == expected
    if not row["classes"] and "error" not in row:
        row["error"] = f"classify leaf mismatch: {found} vs {expected}"
    return row


def _radical_pairs(parts):
    """Block-crossing roots of the composition, split by adjacency.

    Only adjacent-block positions may carry charge: brackets of
    adjacent rectangles land exactly in the skipping ones, where the
    character has to vanish.
    """
    block = {}
    pos = 0
    for b, p in enumerate(parts):
        for i in range(pos + 1, pos + p + 1):
            block[i] = b
        pos += p
    n = pos
    roots = [(i, j) for i in range(1, n)
             for j in range(i + 1, n + 1) if block[i] < block[j]]
    adjacent = [r for r in roots if block[r[1]] == block[r[0]] + 1]
    return n, roots, adjacent


def _suite_an_sets():
    if set(an_sets(2, 2)) != {(3, 1)}:
        return False
    if set(an_sets(3, 2)) != {(4, 1, 1), (3, 3)}:
        return False
    for n in range(2, 13):
        for k in (2, 3):
            if any(sum(e) != 2 * n + k - 2 for e in an_sets(n, k)):
                return False
            if n >= 4 and len(an_sets(n, k, "intersection")) != 0:
                return False
    return True


def _suite_candidates():
    for n in range(4, 9):
        if set(finite_candidates(n, 2)) != {(n + 1,) + (1,) * (n - 1)}:
            return False
    return True


def _suite_nless():
    rng = random.Random(7)
    for parts in ((2, 2), (3, 2), (2, 3, 2), (1, 3, 1), (4, 3)):
        n, roots, adjacent = _radical_pairs(parts)
        for _ in range(6):
            charge = {r: rng.choice((0, 1, 2, 3)) for r in adjacent}
            pairs = [({r: 1}, charge.get(r, 0)) for r in roots]
            fc = FC.make(n, pairs)
            elems, out = nless_normalize(fc)
            if not out.in_R_nless():
                return False
            if not conjugate(fc, elems).equal(out):
                return False
            if jordan_oracle(fc) != classify(out):
                return False
    return True


def _suite_smallc():
    for n in (3, 4):
        for lam in partitions(n):
            if len(lam) == 1 or all(x == 1 for x in lam):
                continue
            src = build_orbit_fc(lam, "down")
            base = {next(iter(row)): val for row, val in src.pairs()}
            charged = sorted(r for r, v in base.items() if not cf.is_zero(v))
            for scale in (1, 2):
                pairs = dict(base)
                for r in charged:
                    pairs[r] = scale
                tgt = FC.make(n, [({r: 1}, v) for r, v in pairs.items()])
                tree = replay(smallc_construct(tgt, lam))
                leaves = [l for l in tree.leaves() if not l.pruned]
                if len(leaves) != 1 or not leaves[0].fc.equal(tgt):
                    return False
    return True


def _suite_search():
    a = build_orbit_fc((2, 2), "down")
    pairs = {next(iter(row)): val for row, val in a.pairs()}
    pairs[(1, 3)] = 3
    b = FC.make(4, [({r: 1}, v) for r, v in pairs.items()])
    witness = conjugator_search(a, b)
    if witness is None or not conjugate(a, witness).equal(b):
        return False
    full = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    c1 = FC.make(4, [({r: 1}, 1 if r in ((1, 2), (2, 3), (3, 4)) else 0)
                     for r in full])
    c2 = FC.make(4, [({r: 1}, 1 if r in ((1, 2), (3, 4)) else 0)
                     for r in full])
    return conjugator_search(c1, c2) is None


_SUITES = (
    ("an-sets", _suite_an_sets),
    ("finite-candidates", _suite_candidates),
    ("nless-normalize", _suite_nless),
    ("smallc-roundtrip", _suite_smallc),
    ("conjugator-search", _suite_search),
)


def cmd_verify_corpus(args):
    script_rows = []
    for name in corpus.bundled_names():
        raw = (resources.files("fcengine") / "corpus"
               / f"{name}.fcs").read_text()
        script_rows.append(verify_script_records(
            name, corpus.load_bundled(name), raw_text=raw))
    suite_rows = []
    for name, fn in _SUITES:
        try:
            ok = bool(fn())
            suite_rows.append({"suite": name, "ok": ok})
        except Exception as exc:
            suite_rows.append({"suite": name, "ok": False,
                               "error": f"{type(exc).__name__}: {exc}"})
    ok_all = (all(r["replay"] and r["bytes"] and r["oracle"] and r["classes"]
                  for r in script_rows)
              and all(r["ok"] for r in suite_rows))
    if args.json:
        print(json.dumps({"scripts": script_rows, "suites": suite_rows,
                          "ok": ok_all}, indent=2))
        return OK if ok_all else FAIL
    mark = lambda v: "ok" if v else "FAIL"
    print(f"{'script':<28} {'replay':<7} {'bytes':<7} {'oracle':<7} classes")
    for row in script_rows:
        print(f"{row['script']:<28} {mark(row['replay']):<7} "
              f"{mark(row['bytes']):<7} {mark(row['oracle']):<7} "
              f"{mark(row['classes'])}")
        if "error" in row:
            print(f"    {row['error']}")
    print(f"{'suite':<28} result")
    for row in suite_rows:
        print(f"{row['suite']:<28} {mark(row['ok'])}")
        if "error" in row:
            print(f"    {row['error']}")
    print("verify-corpus: " + ("all pass" if ok_all else "FAILURES"))
    return OK if ok_all else FAIL


# -- search ------------------------------------------------------------


def _end_state(path):
    records = _load_script(path)
    tree = replay(records)
    leaves = [leaf for leaf in tree.leaves() if not leaf.pruned]
    if len(leaves) != 1:
        names = ", ".join(leaf.name for leaf in leaves)
        raise ValueError(f"{path} ends in {len(leaves)} states ({names}); "
                         "search needs exactly one")
    return leaves[0].fc


def cmd_search(args):
    try:
        source = _end_state(args.source)
        target = _end_state(args.target)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"fcengine: {exc}", file=sys.stderr)
        return USAGE
    except Exception as exc:
        print(f"fcengine: replay failed: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return FAIL
    try:
        witness = conjugator_search(source, target, budget=args.budget)
    except BudgetExceeded as exc:
        if args.json:
            print(json.dumps({"found": False, "reason": "budget",
                              "detail": str(exc)}))
        else:
            print(f"undecided: {exc}")
        return FAIL
    if witness is None:
        if args.json:
            print(json.dumps({"found": False, "reason": "exhausted"}))
        else:
            print("no conjugator exists (enumeration exhausted)")
        return FAIL
    payloads = [elem_to_payload(g) for g in witness]
    verified = conjugate(source, witness).equal(target)
    if args.json:
        print(json.dumps({"found": True, "witness": payloads,
                          "verified": verified}, indent=2))
    else:
        print(f"conjugator found: {len(payloads)} element(s)")
        for payload in payloads:
            print("  " + json.dumps(payload))
        print("verified: transported state equals the target"
              if verified else "WARNING: witness does not verify")
    return OK if verified else FAIL


# -- entry point -------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fcengine",
        description="replay, tabulate, step, verify, and search "
                    "finite-orbit derivations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("replay", help="run a .fcs script and report")
    p.add_argument("script", help="path to a .fcs script")
    p.add_argument("--json", action="store_true",
                   help="print the full report as JSON")
    p.add_argument("--out", metavar="FILE",
                   help="also write the report JSON to FILE")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("ansets",
                       help="recursive candidate families with dimensions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--op", choices=("union", "intersection"),
                   default="union")
    p.add_argument("--filter-dim", action="store_true",
                   help="keep only rows with gk dimension == domain "
                        "dimension")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ansets)

    p = sub.add_parser("repl", help="interactive stepper")
    p.add_argument("init",
                   help=".fcs path (header is used) or inline JSON header")
    p.set_defaults(func=cmd_repl)

    p = sub.add_parser("verify-corpus",
                       help="replay the bundled corpus and run the "
                            "cross-check suites")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_corpus)

    p = sub.add_parser("search",
                       help="explicit conjugator between two script end "
                            "states")
    p.add_argument("source", help=".fcs script for the starting state")
    p.add_argument("target", help=".fcs script for the goal state")
    p.add_argument("--budget", type=int, default=None,
                   help="cap on base-change candidates to try")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
