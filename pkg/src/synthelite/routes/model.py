"""Route data model: a bipartite molecule/reaction tree with JSON round-trip."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from ..chem import Molecule, RetroReaction, Stock


class SchemaError(ValueError):
    """Serialized route violates the molecule/reaction alternation schema."""


@dataclass
class RxnNode:
    template_id: str
    retro_smiles: str  # "product>>reactant1.reactant2"
    site: list[int]
    children: list["MolNode"]
    extra: dict = field(default_factory=dict)

    @property
    def product_smiles(self) -> str:
        return self.retro_smiles.split(">>", 1)[0]


@dataclass
class MolNode:
    smiles: str
    in_stock: bool
    children: list[RxnNode] = field(default_factory=list)
    extra: dict = field(default_factory=dict)


@dataclass
class Route:
    root: MolNode

    # -- traversal ----------------------------------------------------------

    def mol_nodes(self) -> list[MolNode]:
        out: list[MolNode] = []
        stack = [self.root]
        while stack:
            mol = stack.pop()
            out.append(mol)
            for rxn in mol.children:
                stack.extend(rxn.children)
        return out

    def leaves(self) -> list[MolNode]:
        return [m for m in self.mol_nodes() if not m.children]

    def reactions_with_depth(self) -> list[tuple[RxnNode, int]]:
        """Reactions in retro order; depth 1 makes the target."""
        out: list[tuple[RxnNode, int]] = []

        def walk(mol: MolNode, depth: int) -> None:
            for rxn in mol.children:
                out.append((rxn, depth))
                for child in rxn.children:
                    walk(child, depth + 1)

        walk(self.root, 1)
        return out

    def reactions(self) -> list[RxnNode]:
        return [r for r, _ in self.reactions_with_depth()]

    def reaction_multiset(self) -> tuple[str, ...]:
        return tuple(sorted(f"{r.template_id}|{r.retro_smiles}" for r in self.reactions()))

    def length(self) -> int:
        return len(self.reactions())

    def route_hash(self) -> str:
        return hashlib.sha256(
            json.dumps(route_to_dict(self), sort_keys=True).encode("utf-8")
        ).hexdigest()


_MOL_KEYS = {"smiles", "in_stock", "children"}
_RXN_KEYS = {"template_id", "retro_smiles", "site", "children"}


def route_to_dict(route: Route) -> dict:
    def mol_dict(mol: MolNode) -> dict:
        data = {"smiles": mol.smiles, "in_stock": mol.in_stock,
                "children": [rxn_dict(r) for r in mol.children]}
        data.update(mol.extra)
        return data

    def rxn_dict(rxn: RxnNode) -> dict:
        data = {"template_id": rxn.template_id, "retro_smiles": rxn.retro_smiles,
                "site": sorted(rxn.site), "children": [mol_dict(m) for m in rxn.children]}
        data.update(rxn.extra)
        return data

    return mol_dict(route.root)


def route_from_dict(data: dict) -> Route:
    def mol_node(d: dict) -> MolNode:
        if not isinstance(d, dict) or "smiles" not in d:
            raise SchemaError("molecule node needs a smiles field")
        children = d.get("children", [])
        if not isinstance(children, list):
            raise SchemaError("children must be a list")
        node = MolNode(
            smiles=str(d["smiles"]),
            in_stock=bool(d.get("in_stock", False)),
            children=[rxn_node(c, str(d["smiles"])) for c in children],
            extra={k: v for k, v in d.items() if k not in _MOL_KEYS},
        )
        return node

    def rxn_node(d: dict, parent_smiles: str) -> RxnNode:
        if not isinstance(d, dict) or "retro_smiles" not in d:
            raise SchemaError("reaction node needs a retro_smiles field")
        retro = str(d["retro_smiles"])
        if ">>" not in retro:
            raise SchemaError(f"bad retro_smiles {retro!r}")
        product = retro.split(">>", 1)[0]
        if product != parent_smiles:
            raise SchemaError(
                f"reaction product {product!r} != parent molecule {parent_smiles!r}")
        children = d.get("children", [])
        if not isinstance(children, list) or not children:
            raise SchemaError("reaction node needs molecule children")
        return RxnNode(
            template_id=str(d.get("template_id", "")),
            retro_smiles=retro,
            site=[int(x) for x in d.get("site", [])],
            children=[mol_node(c) for c in children],
            extra={k: v for k, v in d.items() if k not in _RXN_KEYS},
        )

    return Route(root=mol_node(data))


def route_dumps(route: Route) -> str:
    return json.dumps(route_to_dict(route), sort_keys=True)


def route_loads(text: str) -> Route:
    return route_from_dict(json.loads(text))


def is_solved(route: Route, stock: Stock | None = None) -> bool:
    """Every leaf purchasable; uses recorded flags unless a stock is given."""
    if stock is None:
        return all(leaf.in_stock for leaf in route.leaves())
    return all(Molecule(leaf.smiles) in stock for leaf in route.leaves())


def route_from_reactions(target: Molecule, reactions: list[RetroReaction],
                         stock: Stock) -> Route:
    """Assemble a tree by attaching each reaction to the first open leaf
    bearing its product (reactions come in application order)."""
    root = MolNode(smiles=target.smiles, in_stock=target in stock)

    def find_leaf(mol: MolNode, smiles: str) -> MolNode | None:
        if not mol.children:
            return mol if mol.smiles == smiles else None
        for rxn in mol.children:
            for child in rxn.children:
                hit = find_leaf(child, smiles)
                if hit is not None:
                    return hit
        return None

    for rxn in reactions:
        leaf = find_leaf(root, rxn.product.smiles)
        if leaf is None:
            raise SchemaError(
                f"no open leaf for product {rxn.product.smiles!r}")
        leaf.children.append(RxnNode(
            template_id=rxn.template_id,
            retro_smiles=rxn.retro_smiles,
            site=sorted(rxn.site),
            children=[MolNode(smiles=m.smiles, in_stock=m in stock)
                      for m in rxn.reactants],
        ))
    return Route(root=root)
