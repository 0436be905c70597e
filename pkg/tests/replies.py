"""Hand-authored model replies for the replay fixture store.

These are the recorded conversations the offline suite replays; golden
expectations downstream are derived from them by hand.
"""

# --- doc1: the three-compound golden document -------------------------------

P1_CLEAN = (
    "A mixture of Cd(NO3)2·4H2O (0.25 mmol, 0.077 g) and H2L (0.25 mmol, 0.050 g) "
    "in DMF (5 mL) and H2O (5 mL) was sealed in a Teflon-lined stainless steel "
    "autoclave and heated at 120 °C for 72 h. Colorless block crystals of 1 were "
    "obtained. Yield: 62%."
)
# The reply retains characterization data on purpose; the post-filter strips it.
P1_REPLY = (
    P1_CLEAN
    + " Anal. Calcd for C10H8CdO8: C, 32.59; H, 2.19. IR (KBr): 3400, 1650, 1385 cm-1."
)
P2_CLEAN = (
    "A mixture of Cd(NO3)2·4H2O (0.25 mmol, 0.077 g) and H2L (0.25 mmol, 0.050 g) "
    "in DMF (5 mL) and H2O (5 mL) was sealed in a Teflon-lined stainless steel "
    "autoclave and heated at 100 °C for 72 h. Yellow needle crystals of 2 were "
    "obtained. Yield: 48%."
)
P3_CLEAN = (
    "A mixture of Zn(NO3)2·6H2O (0.30 mmol, 0.089 g) and H2L (0.30 mmol, 0.059 g) "
    "in DMF (8 mL) was stirred for 30 min, transferred to a 23 mL Teflon-lined "
    "autoclave, and heated at 140 °C for 48 h. Colorless prism crystals of 3 were "
    "obtained. Yield: 35%."
)

DOC1_SYNTHESIS = {
    "paragraphs": [
        {"compound_hint": "1", "text": P1_REPLY},
        {"compound_hint": "2", "text": P2_CLEAN},
        {"compound_hint": "3", "text": P3_CLEAN},
    ]
}

DOC1_TABLES = {
    "entries": [
        {
            "Compound": "1",
            "Empirical formula": "C10H8CdO8",
            "Formula weight": "368.57",
            "Crystal system": "monoclinic",
            "Space group": "P21/c",
            "a (Å)": "10.123(4)",
            "b (Å)": "7.456(3)",
            "c (Å)": "11.287(5)",
            "alpha (°)": "90",
            "beta (°)": "103.52(2)",
            "gamma (°)": "90",
            "Color": "colorless",
        },
        {
            "Compound": "2",
            "Empirical formula": "C10H8CdO8",
            "Formula weight": "368.57",
            "Crystal system": "triclinic",
            "Space group": "P-1",
            "a (Å)": "7.912(2)",
            "b (Å)": "8.225(3)",
            "c (Å)": "9.108(4)",
            "alpha (°)": "71.25(2)",
            "beta (°)": "78.66(2)",
            "gamma (°)": "83.14(3)",
            "Color": "yellow",
        },
        {
            "Compound": "3",
            "Empirical formula": "C10H8O8Zn",
            "Formula weight": "321.54",
            "Crystal system": "monoclinic",
            "Space group": "C2/c",
            "a (Å)": "18.344(5)",
            "b (Å)": "6.870(2)",
            "c (Å)": "12.016(3)",
            "alpha (°)": "90",
            "beta (°)": "96.33(2)",
            "gamma (°)": "90",
            "Color": "colorless",
        },
    ]
}

DOC1_STRUCTURED = {
    P1_CLEAN: {
        "metal_source": "Cd(NO3)2·4H2O",
        "organic_linkers_source": "H2L",
        "modulator_source": None,
        "solvent_source": ["DMF", "H2O"],
        "quantity_of_metal": "0.25 mmol, 0.077 g",
        "quantity_of_organic_linkers": "0.25 mmol, 0.050 g",
        "quantity_of_modulator": None,
        "quantity_of_solvent": ["5 mL", "5 mL"],
        "synthesis_temperature": "120 °C",
        "synthesis_time": "72 h",
        "crystal_morphology": "colorless block crystals",
        "yield": "62%",
        "equipment": "Teflon-lined stainless steel autoclave",
    },
    P2_CLEAN: {
        "metal_source": "Cd(NO3)2·4H2O",
        "organic_linkers_source": "H2L",
        "modulator_source": None,
        "solvent_source": ["DMF", "H2O"],
        "quantity_of_metal": "0.25 mmol, 0.077 g",
        "quantity_of_organic_linkers": "0.25 mmol, 0.050 g",
        "quantity_of_modulator": None,
        "quantity_of_solvent": ["5 mL", "5 mL"],
        "synthesis_temperature": "100 °C",
        "synthesis_time": "72 h",
        "crystal_morphology": "yellow needle crystals",
        "yield": "48%",
        "equipment": "Teflon-lined stainless steel autoclave",
    },
    P3_CLEAN: {
        "metal_source": "Zn(NO3)2·6H2O",
        "organic_linkers_source": "H2L",
        "modulator_source": None,
        "solvent_source": "DMF",
        "quantity_of_metal": "0.30 mmol, 0.089 g",
        "quantity_of_organic_linkers": "0.30 mmol, 0.059 g",
        "quantity_of_modulator": None,
        "quantity_of_solvent": "8 mL",
        "synthesis_temperature": "140 °C",
        "synthesis_time": "48 h",
        "crystal_morphology": "colorless prism crystals",
        "yield": "35%",
        "equipment": "23 mL Teflon-lined autoclave",
    },
}

# --- doc2: table-less document (table node must fail) -----------------------

DOC2_SYNTHESIS = {
    "paragraphs": [
        {
            "compound_hint": "1",
            "text": (
                "Zn(OAc)2·2H2O (1.0 mmol, 0.220 g) and H2L (1.0 mmol, 0.166 g) were "
                "ground for 30 min and heated at 180 °C for 24 h in a muffle oven. "
                "White microcrystalline powder of 1 was obtained. Yield: 71%."
            ),
        }
    ]
}
DOC2_TABLES_BAD = "There are no crystallographic tables in this document."

# --- doc3: corrupt table reply (valid JSON, wrong shape, twice) --------------

DOC3_SYNTHESIS = {
    "paragraphs": [
        {
            "compound_hint": "1",
            "text": (
                "Cu(NO3)2·3H2O (0.50 mmol, 0.121 g) and benzene-1,3,5-tricarboxylic "
                "acid (0.33 mmol, 0.070 g) in ethanol (10 mL) were heated at 110 °C "
                "for 18 h in a Teflon-lined autoclave. Blue octahedral crystals of 1 "
                "formed. Yield: 55%."
            ),
        }
    ]
}
DOC3_TABLES_BAD = '{"entries": "corrupt"}'

# --- canonical Q&A parses (llm_primary replay must equal rules_only) ---------

QUERY_PARSES = {
    "What is the PLD of MOF-5?": {
        "query_type": "property",
        "uses_context": False,
        "materials": ["MOF-5"],
        "properties": ["PLD (Å)"],
        "range": {"min": {}, "max": {}},
        "operation": {"type": "none", "value": None},
        "reasoning": ["single-property lookup for MOF-5"],
        "page_size": None,
        "paged_index": None,
    },
    "What is the PLD of VUJBEI?": {
        "query_type": "property",
        "uses_context": False,
        "materials": ["VUJBEI"],
        "properties": ["PLD (Å)"],
        "range": {"min": {}, "max": {}},
        "operation": {"type": "none", "value": None},
        "reasoning": ["single-property lookup for VUJBEI"],
        "page_size": None,
        "paged_index": None,
    },
    "What about its density?": {
        "query_type": "property",
        "uses_context": True,
        "materials": [],
        "properties": ["Density (g/cm3)"],
        "range": {"min": {}, "max": {}},
        "operation": {"type": "none", "value": None},
        "reasoning": ["'its' refers to the previous material"],
        "page_size": None,
        "paged_index": None,
    },
    "Find MOFs with PLD between 7.5 and 10 Å and LCD between 10 and 16 Å": {
        "query_type": "range",
        "uses_context": False,
        "materials": [],
        "properties": ["PLD (Å)", "LCD (Å)"],
        "range": {"min": {"PLD": 7.5, "LCD": 10}, "max": {"PLD": 10, "LCD": 16}},
        "operation": {"type": "none", "value": None},
        "reasoning": ["two-property interval constraint"],
        "page_size": None,
        "paged_index": None,
    },
    "Give me MOFs with PLD between 7.5-10 Å, LCD between 10-16 Å, and VSA between 2000-2400 m2/cm3": {
        "query_type": "range",
        "uses_context": False,
        "materials": [],
        "properties": ["PLD (Å)", "LCD (Å)", "VSA (m2/cm3)"],
        "range": {
            "min": {"PLD": 7.5, "LCD": 10, "VSA": 2000},
            "max": {"PLD": 10, "LCD": 16, "VSA": 2400},
        },
        "operation": {"type": "none", "value": None},
        "reasoning": ["three-property interval constraint"],
        "page_size": None,
        "paged_index": None,
    },
    "Compare the density of VUJBEI and QOWTIG": {
        "query_type": "comparison",
        "uses_context": False,
        "materials": ["VUJBEI", "QOWTIG"],
        "properties": ["Density (g/cm3)"],
        "range": {"min": {}, "max": {}},
        "operation": {"type": "none", "value": None},
        "reasoning": ["side-by-side comparison of two materials"],
        "page_size": None,
        "paged_index": None,
    },
    "What is the average density of the MOF-5 series?": {
        "query_type": "statistical",
        "uses_context": False,
        "materials": ["MOF-5"],
        "properties": ["Density (g/cm3)"],
        "range": {"min": {}, "max": {}},
        "operation": {"type": "mean", "value": None},
        "reasoning": ["mean over the MOF-5 series"],
        "page_size": None,
        "paged_index": None,
    },
    "Show more results": {
        "query_type": "paging",
        "uses_context": True,
        "materials": [],
        "properties": [],
        "range": {"min": {}, "max": {}},
        "operation": {"type": "none", "value": None},
        "reasoning": ["continue paging the previous result"],
        "page_size": None,
        "paged_index": None,
    },
    "show 5 more": {
        "query_type": "paging",
        "uses_context": True,
        "materials": [],
        "properties": [],
        "range": {"min": {}, "max": {}},
        "operation": {"type": "none", "value": None},
        "reasoning": ["continue paging with an explicit page size"],
        "page_size": 5,
        "paged_index": None,
    },
    "hello": {
        "query_type": "greeting",
        "uses_context": False,
        "materials": [],
        "properties": [],
        "range": {"min": {}, "max": {}},
        "operation": {"type": "none", "value": None},
        "reasoning": ["greeting"],
        "page_size": None,
        "paged_index": None,
    },
}

# Multilingual passthrough: the parser and composer fixtures for one
# question asked in Chinese.
ZH_QUESTION = "VUJBEI的PLD是多少？"
ZH_PARSE = {
    "query_type": "property",
    "uses_context": False,
    "materials": ["VUJBEI"],
    "properties": ["PLD (Å)"],
    "range": {"min": {}, "max": {}},
    "operation": {"type": "none", "value": None},
    "reasoning": ["属性查询"],
    "page_size": None,
    "paged_index": None,
}
ZH_ANSWER = {"answer": "VUJBEI 的孔道限制直径 (PLD) 为 8.2 Å。"}

EN_VUJBEI_ANSWER = {"answer": "The PLD of VUJBEI is 8.2 Å."}
# Deliberately misquotes 8.2 as 8.3 to force the template fallback.
MISQUOTE_QUESTION = "Tell me the PLD of VUJBEI"
MISQUOTE_ANSWER = {"answer": "The PLD of VUJBEI is 8.3 Å."}
