"""JSON and Graphviz renderings of relations, chains and partitions."""
import json

from .finset import canon


def dumps_json(obj):
    """Byte-stable JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def relation_json(R):
    return [[canon(x), canon(y)] for x, y in R.sorted_pairs()]


def _q(text):
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _bipartite(lines, P, R, prefix, label=None):
    """Cluster body for one relation: left states, right states, pair edges."""
    if label is not None:
        lines.append(f"    label={_q(label)};")
    for side, carrier in (("L", P.X), ("R", P.Y)):
        for s in carrier:
            lines.append(f"    {_q(f'{prefix}{side}:{canon(s)}')} [label={_q(canon(s))}];")
    for x, y in R.sorted_pairs():
        lines.append(f"    {_q(f'{prefix}L:{canon(x)}')} -- {_q(f'{prefix}R:{canon(y)}')};")


def relation_dot(P, R, name="R"):
    lines = [f"graph {_q(name)} {{", "  rankdir=LR;"]
    _bipartite(lines, P, R, "")
    lines.append("}")
    return "\n".join(lines) + "\n"


def relations_dot(P, relations, name="chain", stage="R"):
    """One cluster per relation, e.g. the stages of a refinement chain."""
    lines = [f"graph {_q(name)} {{", "  rankdir=LR;"]
    for n, R in enumerate(relations):
        lines.append(f"  subgraph {_q(f'cluster_{n}')} {{")
        _bipartite(lines, P, R, f"{n}/", label=f"{stage}_{n}")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def partition_dot(blocks, name="partition"):
    lines = [f"graph {_q(name)} {{"]
    for n, block in enumerate(blocks):
        lines.append(f"  subgraph {_q(f'cluster_{n}')} {{")
        lines.append(f"    label={_q(f'block {n}')};")
        for s in block:
            lines.append(f"    {_q(canon(s))};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def verdicts_dot(verdicts, name="props"):
    """Each counterexample cospan drawn as A1 -> Z <- A2."""
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for n, v in enumerate(verdicts):
        lines.append(f"  subgraph {_q(f'cluster_{n}')} {{")
        lines.append(f"    label={_q(v.property + ': ' + v.status)};")
        if v.witness is not None and "cospan" in v.witness:
            for leg, tag in (("left", "A1"), ("right", "A2")):
                desc = v.witness["cospan"][leg]
                for a, z in desc["map"].items():
                    lines.append(f"    {_q(f'{n}/{tag}:{a}')} -> {_q(f'{n}/Z:{z}')};")
                for z in desc["cod"]:
                    lines.append(f"    {_q(f'{n}/Z:{z}')} [label={_q(z)}];")
        else:
            lines.append(f"    {_q(f'{n}/empty')} [label={_q('no witness')}, shape=plaintext];")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
