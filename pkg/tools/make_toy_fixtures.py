#!/usr/bin/env python3
"""Regenerate the scripted-LLM rules for the shipped 3-step demo scenario.

Run from the repo root after changing the toy library, canonicalization
conventions, or prompt assembly:

    python tools/make_toy_fixtures.py

Target: CCOc1ccc(C(NCc2ccccc2)=O)cc1 (N-benzyl 4-ethoxybenzamide)
  depth 1: amide disconnection      -> 4-ethoxybenzoic acid + benzylamine
  depth 2: ether disconnection      -> bromoethane + 4-hydroxybenzoic acid
  depth 3: acid -> aldehyde (retro oxidation), reaching stock
"""

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
LIB = ROOT / "src/synthelite/assets/toy/templates.jsonl"
OUT = ROOT / "src/synthelite/assets/toy/scripted_llm.jsonl"

TARGET = "CCOc1ccc(C(NCc2ccccc2)=O)cc1"


def description_of(template_id: str) -> str:
    for line in LIB.read_text().splitlines():
        rec = json.loads(line)
        if rec["id"] == template_id:
            return rec["description"]
    raise KeyError(template_id)


def plan_json(expandables, remaining, next_desc, step_number):
    return json.dumps({
        "target_smiles": TARGET,
        "expandable_molecules": expandables,
        "user_constraint": "neutral",
        "previous_steps": [],
        "strategy_overview": "Disconnect the amide, then the aryl ether, then "
                             "trace the acid back to its aldehyde.",
        "step_estimate": str(remaining),
        "next_steps": [{"step_number": step_number, "step_description": next_desc}],
        "additional_notes": ""
    }, indent=2)


def step_response(expandables, remaining, step_number, retro_desc, forward_id,
                  mol_index, atom_indices):
    forward_desc = description_of(forward_id)
    return f"""Analysis: the remaining non-stock molecule needs one more disconnection.

<synthesis_plan>
{plan_json(expandables, remaining, retro_desc, step_number)}
</synthesis_plan>

<next_retro_transformation>
{retro_desc}
</next_retro_transformation>

<next_forward_reaction>
{forward_desc}
</next_forward_reaction>

<expandable_molecule_index>
{mol_index}
</expandable_molecule_index>

<reaction_atom_indices>
{atom_indices}
</reaction_atom_indices>
"""


STOP_RESPONSE = """All expandable molecules are available in the stock and the plan is complete.

<stop_signal>
TRUE
</stop_signal>
"""

SELECT_RESPONSE = """The first candidate matches the described disconnection exactly.

<selected_reaction_indices>
[0]
</selected_reaction_indices>
"""

EVAL_RESPONSE = """<synthesis_analysis>
A clean three-step linear route: amide coupling, Williamson etherification and an
aldehyde oxidation, all on robust substrates.
</synthesis_analysis>

<feedback>
{
    "overall_feedback": "Sound linear route with reliable steps; a strategically different disconnection could add diversity.",
    "problematic_steps": [
        {
            "step_id": 2,
            "feedback": "Alkylation of the phenol in the presence of the free acid may need a base switch; consider esterifying first if yields suffer."
        }
    ]
}
</feedback>
"""

RULES = [
    # selection and evaluation prompts embed earlier conversation text, so
    # their rules must come before the per-step frontier keys
    {"match": "<search_result>", "response": SELECT_RESPONSE},
    {"match": "<proposed_synthesis_plan>", "response": EVAL_RESPONSE},
    {"match": "2: O=Cc1ccc(cc1)O (in stock)", "response": STOP_RESPONSE},
    {"match": "0: CCOc1ccc(C(NCc2ccccc2)=O)cc1 (not in stock)",
     "response": step_response(
         [TARGET], 3, 1,
         "The next step in the retrosynthetic route involves an amide disconnection "
         "to yield a carboxylic acid and a primary amine from the benzamide, "
         "focusing on the C-N amide bond.",
         "amide_coupling_sec", 0, "[8, 9]")},
    {"match": "0: CCOc1ccc(C(=O)O)cc1 (not in stock)",
     "response": step_response(
         ["CCOc1ccc(C(=O)O)cc1", "NCc1ccccc1"], 2, 2,
         "The next step in the retrosynthetic route involves an ether disconnection "
         "to yield an alkyl bromide and a phenol from the aryl alkyl ether, "
         "focusing on the O-CH2 bond.",
         "williamson_aryl_ether", 0, "[2, 3]")},
    {"match": "2: O=C(c1ccc(cc1)O)O (not in stock)",
     "response": step_response(
         ["NCc1ccccc1", "CCBr", "O=C(c1ccc(cc1)O)O"], 1, 3,
         "The next step in the retrosynthetic route involves a retro oxidation "
         "to yield an aldehyde from the carboxylic acid, focusing on the "
         "carboxyl group.",
         "acid_from_aldehyde", 2, "[2, 10]")},
]


def main() -> None:
    with OUT.open("w", encoding="utf-8") as f:
        for rule in RULES:
            f.write(json.dumps(rule, sort_keys=True) + "\n")
    print(f"wrote {OUT} ({len(RULES)} rules)")


if __name__ == "__main__":
    main()
