from vfc_oracle.core.decomposition.tree_decomp import TreeDecomp


def to_dot(d: TreeDecomp, name: str = "decomposition") -> str:
    """Graphviz rendering of the decomposition tree, labelled by bag contents."""
    lines = [f"graph {name} {{", "  node [shape=box];"]
    for x in d.nodes:
        bag = " ".join(map(str, d.bag_order[x])) or "(virtual)"
        lines.append(f'  n{x} [label="{x}: {bag}"];')
    for x in d.nodes:
        if x != 0:
            adh = ",".join(map(str, d.adh_order[x]))
            lines.append(f'  n{d.parent[x]} -- n{x} [label="{adh}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
