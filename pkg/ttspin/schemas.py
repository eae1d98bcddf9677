from schema import And, Optional, Or, Schema

NUMBER = Or(float, int)
MAYBE_NUMBER = Or(None, float, int)
PROBABILITY = And(NUMBER, lambda x: -1e-9 <= x <= 1.0 + 1e-9)

COLLIDER = {
    "beam": Or("pp", "ppbar"),
    "sqrtS": NUMBER,
    "mTop": NUMBER,
    "alphaS": NUMBER,
    "qScale": str,
    "pdf": str,
}

MARKERS = {
    "concurrence": PROBABILITY,
    "ptMinEigenvalue": NUMBER,
    "entangled": bool,
    "delta": NUMBER,
    "chsh": NUMBER,
    "chshViolated": bool,
    "d": NUMBER,
    "w": NUMBER,
}

SCAN_MAP = Schema(
    {
        "kind": Or("qqbar", "gg", "mixture", "hadronic"),
        Optional("wGg"): PROBABILITY,
        Optional("collider"): COLLIDER,
        "grid": [int],
        "rows": [
            {
                "beta": NUMBER,
                "theta": NUMBER,
                "concurrence": PROBABILITY,
                Optional("delta"): NUMBER,
                Optional("chsh"): NUMBER,
                Optional("entangled"): bool,
                Optional("chshViolated"): bool,
                Optional("betaPh1"): MAYBE_NUMBER,
                Optional("betaPh2"): MAYBE_NUMBER,
                Optional("betaCh1"): MAYBE_NUMBER,
                Optional("betaCh2"): MAYBE_NUMBER,
            },
        ],
    },
)

OBSERVABLES = Schema(
    {
        "collider": COLLIDER,
        "mode": Or("threshold", "high-pt"),
        "rows": [
            {
                "mCut": NUMBER,
                "beta": NUMBER,
                "cPerp": NUMBER,
                "cZ": NUMBER,
                "d": NUMBER,
                "delta": NUMBER,
                "deltaHelicity": NUMBER,
                "chshHalf": NUMBER,
                "cRr": NUMBER,
                "cNn": NUMBER,
                "cKk": NUMBER,
                "wGg": PROBABILITY,
            },
        ],
    },
)

CRITICAL = Schema(
    {
        "collider": COLLIDER,
        "rows": [
            {
                "beam": Or("pp", "ppbar"),
                "sqrtS": NUMBER,
                "fGg": PROBABILITY,
                "wGgThreshold": PROBABILITY,
                "betaPh": MAYBE_NUMBER,
                "betaCh": MAYBE_NUMBER,
                "phSignature": bool,
                "chSignature": bool,
            },
        ],
    },
)

LUMINOSITY = Schema(
    {
        "collider": COLLIDER,
        "rows": [
            {
                "mTt": NUMBER,
                "x": NUMBER,
                "lQq": NUMBER,
                "lGg": NUMBER,
                "wQq": Or(None, PROBABILITY),
                "wGg": Or(None, PROBABILITY),
            },
        ],
    },
)

_TIER = {
    "parameterCount": Or(2, 4, 15),
    "estimates": {str: NUMBER},
    "errors": {str: NUMBER},
    "markers": {str: NUMBER},
    "physical": bool,
    "projected": {
        "concurrence": PROBABILITY,
        "entangled": bool,
        "fidelity": PROBABILITY,
        "correlations": [[NUMBER]],
    },
}

TOMOGRAPHY = Schema(
    {
        "collider": COLLIDER,
        "window": [NUMBER],
        "n": int,
        "seed": int,
        "kappaPlus": NUMBER,
        "kappaMinus": NUMBER,
        "truth": {"cPerp": NUMBER, "cZ": NUMBER, "d": NUMBER, "w": NUMBER, "concurrence": PROBABILITY},
        "tiers": {"symmetryLO": _TIER, "symmetry": _TIER, "none": _TIER},
        "witness": {"d": NUMBER, "dError": NUMBER, "w": NUMBER, "significance": NUMBER},
    },
)
