"""Prompt templates: role instruction + few-shot examples + JSON schema.

Every template declares the schema its replies must satisfy; shots are
validated against that schema at registration time so a drifting
template fails loudly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import jsonschema

from ..errors import UnknownTemplate

Message = dict[str, str]


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    role_instruction: str
    output_schema: dict
    shots: tuple[tuple[str, dict], ...] = ()


class TemplateRegistry:
    def __init__(self):
        self._templates: dict[str, PromptTemplate] = {}

    def register(self, template: PromptTemplate) -> None:
        if template.name in self._templates:
            raise ValueError(f"template {template.name!r} already registered")
        for _, expected in template.shots:
            jsonschema.validate(expected, template.output_schema)
        self._templates[template.name] = template

    def get(self, name: str) -> PromptTemplate:
        try:
            return self._templates[name]
        except KeyError:
            raise UnknownTemplate(f"no template named {name!r}") from None

    def names(self) -> list[str]:
        return sorted(self._templates)


def render_prompt(template: PromptTemplate, payload: str) -> list[Message]:
    """Render the message sequence: system role, interleaved shots, payload."""
    messages: list[Message] = [{"role": "system", "content": template.role_instruction}]
    for shot_input, shot_output in template.shots:
        messages.append({"role": "user", "content": shot_input})
        messages.append(
            {"role": "assistant", "content": json.dumps(shot_output, ensure_ascii=False)}
        )
    messages.append({"role": "user", "content": payload})
    return messages


_SYNTHESIS_SCHEMA = {
    "type": "object",
    "properties": {
        "paragraphs": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "compound_hint": {"type": "string"},
                    "text": {"type": "string"},
                },
                "required": ["compound_hint", "text"],
            },
        }
    },
    "required": ["paragraphs"],
}

_TABLE_SCHEMA = {
    "type": "object",
    "properties": {
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": {"type": ["string", "number", "null"]},
            },
        }
    },
    "required": ["entries"],
}

_STRUCTURED_SCHEMA = {
    "type": "object",
    "properties": {
        key: {
            "type": ["string", "array", "null"],
            "items": {"type": "string"},
        }
        for key in (
            "metal_source",
            "organic_linkers_source",
            "modulator_source",
            "solvent_source",
            "quantity_of_metal",
            "quantity_of_organic_linkers",
            "quantity_of_modulator",
            "quantity_of_solvent",
            "synthesis_temperature",
            "synthesis_time",
            "crystal_morphology",
            "yield",
            "equipment",
        )
    },
    "additionalProperties": False,
}

_ABBREV_SCHEMA = {
    "type": "object",
    "properties": {
        "abbreviation": {"type": "string"},
        "full_name": {"type": ["string", "null"]},
    },
    "required": ["abbreviation", "full_name"],
}

_QUERY_SCHEMA = {
    "type": "object",
    "properties": {
        "query_type": {
            "type": "string",
            "enum": [
                "property",
                "range",
                "comparison",
                "statistical",
                "paging",
                "reset",
                "greeting",
                "chat",
            ],
        },
        "uses_context": {"type": "boolean"},
        "materials": {"type": "array", "items": {"type": "string"}},
        "properties": {"type": "array", "items": {"type": "string"}},
        "range": {
            "type": "object",
            "properties": {
                "min": {"type": "object", "additionalProperties": {"type": "number"}},
                "max": {"type": "object", "additionalProperties": {"type": "number"}},
            },
        },
        "operation": {
            "type": "object",
            "properties": {
                "type": {"type": "string", "enum": ["mean", "max", "min", "count", "none"]},
                "value": {"type": ["number", "null"]},
            },
        },
        "reasoning": {"type": "array", "items": {"type": "string"}},
        "page_size": {"type": ["integer", "null"]},
        "paged_index": {"type": ["integer", "null"]},
    },
    "required": ["query_type"],
}

_ANSWER_SCHEMA = {
    "type": "object",
    "properties": {"answer": {"type": "string"}},
    "required": ["answer"],
}


def default_registry() -> TemplateRegistry:
    """Registry with the templates used by the pipeline and query engine."""
    reg = TemplateRegistry()
    reg.register(
        PromptTemplate(
            name="synthesis_parse",
            role_instruction=(
                "You are a chemistry text analyst. From the document, extract every "
                "MOF synthesis description as a self-contained paragraph: resolve "
                "expressions such as 'the above conditions' or 'this method' by "
                "substituting the concrete reagents, amounts, temperatures and "
                "durations they refer to. Skip paragraphs that only describe the "
                "synthesis of organic ligands, and drop characterization data "
                "(elemental analysis, IR, NMR). Reply with JSON: "
                '{"paragraphs": [{"compound_hint": "...", "text": "..."}]}.'
            ),
            output_schema=_SYNTHESIS_SCHEMA,
            shots=(
                (
                    "Synthesis of compound 1: A mixture of Zn(NO3)2·6H2O (0.15 mmol) "
                    "and H2bdc (0.15 mmol) in DMF (6 mL) was heated at 100 °C for 48 h.\n"
                    "Synthesis of compound 2: Compound 2 was obtained by the same "
                    "procedure at 120 °C.",
                    {
                        "paragraphs": [
                            {
                                "compound_hint": "1",
                                "text": "A mixture of Zn(NO3)2·6H2O (0.15 mmol) and "
                                "H2bdc (0.15 mmol) in DMF (6 mL) was heated at 100 °C "
                                "for 48 h.",
                            },
                            {
                                "compound_hint": "2",
                                "text": "A mixture of Zn(NO3)2·6H2O (0.15 mmol) and "
                                "H2bdc (0.15 mmol) in DMF (6 mL) was heated at 120 °C "
                                "for 48 h.",
                            },
                        ]
                    },
                ),
            ),
        )
    )
    reg.register(
        PromptTemplate(
            name="table_parse",
            role_instruction=(
                "You are a crystallography table reader. Find crystal data tables or "
                "in-text crystallographic descriptions and emit one object per "
                "compound, mapping each header exactly as written to its value. "
                'Reply with JSON: {"entries": [{...}]}.'
            ),
            output_schema=_TABLE_SCHEMA,
            shots=(
                (
                    "Table 1. Compound 1: empirical formula C8H6ZnO5, crystal system "
                    "monoclinic, space group P21/c, a = 9.80(2) Å, b = 7.72 Å, "
                    "c = 11.06 Å, alpha 90, beta 103.5(1), gamma 90.",
                    {
                        "entries": [
                            {
                                "compound": "1",
                                "empirical formula": "C8H6ZnO5",
                                "crystal system": "monoclinic",
                                "space group": "P21/c",
                                "a (Å)": "9.80(2)",
                                "b (Å)": "7.72",
                                "c (Å)": "11.06",
                                "alpha (deg)": "90",
                                "beta (deg)": "103.5(1)",
                                "gamma (deg)": "90",
                            }
                        ]
                    },
                ),
            ),
        )
    )
    reg.register(
        PromptTemplate(
            name="structured_convert",
            role_instruction=(
                "You extract synthesis parameters from one MOF synthesis paragraph "
                "into fixed fields: metal_source, organic_linkers_source, "
                "modulator_source, solvent_source, quantity_of_metal, "
                "quantity_of_organic_linkers, quantity_of_modulator, "
                "quantity_of_solvent, synthesis_temperature, synthesis_time, "
                "crystal_morphology, yield, equipment. Copy quantities verbatim with "
                "their units; use a JSON array when a field has several values "
                "(e.g. two solvents); use null when the paragraph does not state a "
                "field. Reply with a single JSON object of exactly these keys."
            ),
            output_schema=_STRUCTURED_SCHEMA,
            shots=(
                (
                    "A mixture of Zn(NO3)2·6H2O (0.15 mmol, 0.045 g) and H2bdc "
                    "(0.15 mmol, 0.025 g) in DMF (6 mL) was heated at 100 °C for "
                    "48 h in a Teflon-lined autoclave, giving colorless block "
                    "crystals. Yield: 52%.",
                    {
                        "metal_source": "Zn(NO3)2·6H2O",
                        "organic_linkers_source": "H2bdc",
                        "modulator_source": None,
                        "solvent_source": "DMF",
                        "quantity_of_metal": "0.15 mmol, 0.045 g",
                        "quantity_of_organic_linkers": "0.15 mmol, 0.025 g",
                        "quantity_of_modulator": None,
                        "quantity_of_solvent": "6 mL",
                        "synthesis_temperature": "100 °C",
                        "synthesis_time": "48 h",
                        "crystal_morphology": "colorless block crystals",
                        "yield": "52%",
                        "equipment": "Teflon-lined autoclave",
                    },
                ),
            ),
        )
    )
    reg.register(
        PromptTemplate(
            name="abbrev_adjudicate",
            role_instruction=(
                "A ligand abbreviation has several candidate definitions found in "
                "the same document. Pick the full name the document actually "
                "defines for the abbreviation, or null if none fits. Reply with "
                'JSON: {"abbreviation": "...", "full_name": "..." or null}.'
            ),
            output_schema=_ABBREV_SCHEMA,
            shots=(
                (
                    "Abbreviation: H2L\nCandidates:\n1. terephthalic acid\n"
                    "2. 2,6-naphthalenedicarboxylic acid\nContext: ... H2L "
                    "(terephthalic acid) was used as received ...",
                    {"abbreviation": "H2L", "full_name": "terephthalic acid"},
                ),
            ),
        )
    )
    reg.register(
        PromptTemplate(
            name="query_parse",
            role_instruction=(
                "Convert a user question about MOF materials into a structured "
                "query. query_type is one of property, range, comparison, "
                "statistical, paging, reset, greeting, chat. Set uses_context when "
                "the question refers to earlier turns ('its', 'this material'). "
                "Use canonical property display names such as \"PLD (Å)\" in "
                "properties, and short keys such as \"PLD\" inside range bounds. "
                "Reply with a single JSON object."
            ),
            output_schema=_QUERY_SCHEMA,
            shots=(
                (
                    "What is the LCD of HKUST-1?",
                    {
                        "query_type": "property",
                        "uses_context": False,
                        "materials": ["HKUST-1"],
                        "properties": ["LCD (Å)"],
                        "range": {"min": {}, "max": {}},
                        "operation": {"type": "none", "value": None},
                        "reasoning": ["single property of a named material"],
                        "page_size": None,
                        "paged_index": None,
                    },
                ),
            ),
        )
    )
    reg.register(
        PromptTemplate(
            name="compose_answer",
            role_instruction=(
                "Write a short, fluent answer to the user's question from the "
                "structured result JSON. Quote every numeric value exactly as it "
                "appears in the result; never invent or round numbers. Answer in "
                "the language of the question. Reply with JSON: "
                '{"answer": "..."}.'
            ),
            output_schema=_ANSWER_SCHEMA,
            shots=(
                (
                    'Question: What is the LCD of HKUST-1?\nResult: {"rows": '
                    '[{"material": "HKUST-1", "LCD (Å)": 12.7}]}',
                    {"answer": "The LCD of HKUST-1 is 12.7 Å."},
                ),
            ),
        )
    )
    return reg
