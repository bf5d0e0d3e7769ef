"""Command line front end.

    coalg check    FILE [FILE] --relation NAME
    coalg fixpoint FILE [FILE] --op hj|am
    coalg sequence FILE [FILE] --steps N
    coalg props    --functor TEXT | FILE
    coalg compare  FILE [FILE]
    coalg minimize FILE [FILE]

Inputs are system files (TOML) or Aldebaran ``.aut`` files; two files make a
pair, one file gives the pair(s) it declares.  Exit status: 0 success, 1 a
violation or counterexample was found, 2 usage or input error, 3 a size cap
was exceeded.
"""
import argparse
import collections
import os
import random
import sys

from . import __version__
from .bisim import CoalgebraPair, classify_relation, is_am_bisimulation
from .errors import CoalgError, DomainError, ParseError, SizeError, ValidationError
from .finset import canon
from .functors import DEFAULT_CAP, DEFAULT_GRID, lts_labels
from .lts import minimize, partition_refinement_lts, transitions
from .props import (DEFAULT_SWEEP_CAP, KernelVariant, PropertyName, check_all,
                    default_corpus)
from .report import (dumps_json, partition_dot, relation_dot, relation_json,
                     relations_dot, verdicts_dot)
from .sequences import greatest_fixpoint, terminal_sequence
from .syntax import parse_functor
from .systemfile import aut_coalgebra, load_system, parse_aut

EXIT_OK, EXIT_FOUND, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

# compare enumerates every relation up to this many pairs, and samples beyond
EXHAUSTIVE_LIMIT = 12


class UsageError(CoalgError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog.removeprefix('coalg ')}: {message}" if " " in self.prog else message)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None,
                        help="largest set the tool may enumerate")
    common.add_argument("--bound", type=int, default=None,
                        help="largest cospan apex tried by the kernel search")
    common.add_argument("--grid", type=int, default=DEFAULT_GRID,
                        help="denominator of enumerated distribution weights")
    common.add_argument("--format", choices=("json", "dot"), default="json")

    p = _Parser(prog="coalg", description="Bisimulations of finite coalgebras.")
    p.add_argument("--version", action="version", version=f"coalg {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="classify a named relation")
    c.add_argument("inputs", nargs="+")
    c.add_argument("--relation", metavar="NAME")

    c = sub.add_parser("fixpoint", parents=[common], help="greatest fixpoint chain")
    c.add_argument("inputs", nargs="+")
    c.add_argument("--op", choices=("hj", "am"), default="hj")

    c = sub.add_parser("sequence", parents=[common], help="terminal-sequence relations")
    c.add_argument("inputs", nargs="+")
    c.add_argument("--steps", type=int, default=None, metavar="N")

    c = sub.add_parser("props", parents=[common], help="functor property sweep")
    c.add_argument("inputs", nargs="*")
    c.add_argument("--functor", metavar="TEXT")
    c.add_argument("--property", metavar="NAME")

    c = sub.add_parser("compare", parents=[common], help="implication report")
    c.add_argument("inputs", nargs="+")
    c.add_argument("--samples", type=int, default=256,
                   help="relations sampled when the instance is too large to enumerate")

    c = sub.add_parser("minimize", parents=[common], help="partition refinement")
    c.add_argument("inputs", nargs="+")
    return p


# -- inputs ------------------------------------------------------------------

def _read(path):
    """A SystemFile-like triple (functor, systems, relations) for one input."""
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    if path.endswith(".aut"):
        with open(path, encoding="utf-8") as fh:
            C, _ = parse_aut(fh.read(), source=path)
        return C.functor, [C], {}
    sf = load_system(path)
    return sf.functor, list(sf.systems.values()), sf.relations


def _relabel(C, labels):
    """An .aut system over a larger label set."""
    return aut_coalgebra(len(C.carrier), labels, transitions(C))


def load_pair(paths):
    if len(paths) > 2:
        raise UsageError("give one or two input files")
    loaded = [_read(p) for p in paths]
    if len(loaded) == 1:
        F, systems, relations = loaded[0]
        return CoalgebraPair.of(*systems), relations
    (F1, s1, r1), (F2, s2, r2) = loaded
    if len(s1) != 1 or len(s2) != 1:
        raise UsageError("with two input files each must declare a single system")
    C1, C2 = s1[0], s2[0]
    if F1 != F2:
        l1, l2 = lts_labels(F1), lts_labels(F2)
        if l1 is None or l2 is None:
            raise ValidationError(f"the two systems use different functors: {F1} and {F2}")
        labels = sorted(set(l1) | set(l2))
        C1, C2 = _relabel(C1, labels), _relabel(C2, labels)
    relations = dict(r1)
    relations.update(r2)
    return CoalgebraPair.of(C1, C2), relations


def _seed():
    raw = os.environ.get("COALG_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"COALG_SEED must be an integer, got {raw!r}") from None


def _profile(F, args):
    seed = _seed()
    corpus = default_corpus(seed=seed)
    return check_all(F, corpus, args.cap or DEFAULT_SWEEP_CAP, args.grid)


# -- commands ----------------------------------------------------------------

def cmd_check(args, out):
    P, relations = load_pair(args.inputs)
    name = args.relation
    if name is None:
        if len(relations) != 1:
            raise UsageError("choose a relation with --relation NAME")
        name = next(iter(relations))
    if name not in relations:
        raise ValidationError(f"no relation named {name!r}")
    R = P.relation(relations[name])
    cap = args.cap or DEFAULT_CAP
    result = classify_relation(P, R, args.bound, cap, _profile(P.functor, args), args.grid)
    if args.format == "dot":
        out.write(relation_dot(P, R, name))
    else:
        report = {"functor": str(P.functor), "relation": name,
                  "pairs": relation_json(R)}
        report.update(result.to_json())
        out.write(dumps_json(report))
    return EXIT_OK if result.consistent else EXIT_FOUND


def cmd_fixpoint(args, out):
    P, _ = load_pair(args.inputs)
    chain = greatest_fixpoint(P, args.op, args.cap or DEFAULT_CAP)
    if args.format == "dot":
        out.write(relations_dot(P, chain.steps, f"fixpoint-{args.op}"))
    else:
        report = {"functor": str(P.functor)}
        report.update(chain.to_json())
        out.write(dumps_json(report))
    return EXIT_OK


def cmd_sequence(args, out):
    P, _ = load_pair(args.inputs)
    n = args.steps if args.steps is not None else len(P.X) * len(P.Y) + 1
    if n < 0:
        raise UsageError("--steps must be non-negative")
    seq = terminal_sequence(P, n, args.cap or DEFAULT_CAP)
    Ws = [seq.relation(P, m) for m in range(n + 1)]
    stable = next((m for m in range(n) if Ws[m] == Ws[m + 1]), None)
    if args.format == "dot":
        out.write(relations_dot(P, Ws, "sequence", stage="W"))
    else:
        out.write(dumps_json({"functor": str(P.functor), "steps": n,
                              "stabilizedAt": stable, "terms": len(seq.table),
                              "relations": [relation_json(W) for W in Ws]}))
    return EXIT_OK


def cmd_props(args, out):
    if args.functor is not None:
        F = parse_functor(args.functor, source="--functor")
    elif args.inputs:
        F = _read(args.inputs[0])[0]
    else:
        raise UsageError("give --functor TEXT or an input file")
    verdicts = _profile(F, args)
    if args.property is not None:
        valid = [p.value for p in PropertyName] + [v.value for v in KernelVariant]
        if args.property not in valid:
            raise UsageError(f"unknown property {args.property!r}; one of {', '.join(valid)}")
        chosen = [verdicts[args.property]]
    else:
        chosen = list(verdicts.values())
    if args.format == "dot":
        out.write(verdicts_dot(chosen))
    elif args.property is not None:
        out.write(dumps_json(chosen[0].to_json()))
    else:
        out.write(dumps_json({"functor": str(F), "seed": _seed(),
                              "verdicts": [v.to_json() for v in chosen]}))
    found = any(v.status != "HoldsOnCorpus" for v in chosen)
    return EXIT_FOUND if found else EXIT_OK


def _relations_to_check(P, samples, seed):
    full = [(x, y) for x in P.X for y in P.Y]
    if len(full) <= EXHAUSTIVE_LIMIT:
        for bits in range(2 ** len(full)):
            yield P.relation(p for k, p in enumerate(full) if bits >> k & 1)
        return
    rng = random.Random(seed)
    yield P.full()
    yield P.empty()
    for _ in range(samples):
        yield P.relation(p for p in full if rng.random() < 0.5)


def cmd_compare(args, out):
    P, _ = load_pair(args.inputs)
    cap = args.cap or DEFAULT_CAP
    profile = _profile(P.functor, args)
    seed = _seed()
    exhaustive = len(P.X) * len(P.Y) <= EXHAUSTIVE_LIMIT
    counts = collections.Counter()
    violations = []
    checked = set()
    total = 0
    for R in _relations_to_check(P, args.samples, seed):
        result = classify_relation(P, R, args.bound, cap, profile, args.grid)
        total += 1
        flags = result.flags()
        key = ",".join(k for k in ("amBisim", "hjBisim", "amPrecongruence")
                       if flags[k]) or "none"
        counts[f"{key};kernel={flags['kernelBisim']}"] += 1
        checked.update(result.checked)
        violations.extend(result.violations)
    hj = greatest_fixpoint(P, "hj", cap)
    am = greatest_fixpoint(P, "am", cap)
    report = {"functor": str(P.functor), "mode": "exhaustive" if exhaustive else "sampled",
              "seed": None if exhaustive else seed, "relationsChecked": total,
              "flagCounts": dict(sorted(counts.items())),
              "implicationsChecked": sorted(checked), "violations": violations,
              "consistent": not violations,
              "properties": {k: v.status for k, v in profile.items()},
              "greatestHJ": relation_json(hj.limit),
              "greatestAMPrecongruence": relation_json(am.limit),
              "greatestHJIsAM": is_am_bisimulation(P, hj.limit, cap) is not None}
    if lts_labels(P.functor) is not None:
        report["partitionRefinementAgrees"] = partition_refinement_lts(P) == hj.limit
    if args.format == "dot":
        out.write(relation_dot(P, hj.limit, "greatest-hj"))
    else:
        out.write(dumps_json(report))
    return EXIT_FOUND if violations else EXIT_OK


def cmd_minimize(args, out):
    if len(args.inputs) == 1:
        F, systems, _ = _read(args.inputs[0])
        if len(systems) == 1:
            C = systems[0]
            blocks = minimize(C)
            if args.format == "dot":
                out.write(partition_dot(blocks))
            else:
                out.write(dumps_json({"functor": str(C.functor), "states": len(C.carrier),
                                      "classes": len(blocks),
                                      "blocks": [[canon(s) for s in b] for b in blocks]}))
            return EXIT_OK
    P, _ = load_pair(args.inputs)
    R = partition_refinement_lts(P)
    if args.format == "dot":
        out.write(relation_dot(P, R, "bisimilarity"))
    else:
        out.write(dumps_json({"functor": str(P.functor), "bisimilarity": relation_json(R)}))
    return EXIT_OK


COMMANDS = {"check": cmd_check, "fixpoint": cmd_fixpoint, "sequence": cmd_sequence,
            "props": cmd_props, "compare": cmd_compare, "minimize": cmd_minimize}


def run_command(argv, out=None, err=None):
    """Run one invocation; returns the exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except SystemExit as exc:  # --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except SizeError as exc:
        err.write(f"coalg: size cap exceeded: {exc}\n")
        return EXIT_CAP
    except (UsageError, ParseError, ValidationError, DomainError) as exc:
        err.write(f"coalg: {exc}\n")
        return EXIT_USAGE
    except CoalgError as exc:
        err.write(f"coalg: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"coalg: {exc}\n")
        return EXIT_USAGE


def main():
    sys.exit(run_command(sys.argv[1:]))
