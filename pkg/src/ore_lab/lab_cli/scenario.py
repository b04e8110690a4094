"""Scenario files and the built-in presets.

A scenario binds the base field, the coefficient ring A, the endomorphism
phi, the derivation and the sampling parameters into one runnable context.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import flint

from ..corner_ring import CornerRing, derivation_from_json
from ..exact_algebra.polys import var_pos
from ..maps import CoefficientRing, EndoSpec, check_injectivity
from ..ore_poly import OreExtension

__all__ = ["SCHEMA", "PRESETS", "ScenarioConfig", "ScenarioError", "load_scenario", "preset"]

SCHEMA = "ore-lab/scenario/1"


class ScenarioError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    name: str
    base_field: object  # "Q" or {"Fp": p}
    coefficient_ring: str  # "field" or "poly"
    phi: list
    derivation: dict
    generators: list
    seed: int = 0
    samples: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    # built in __post_init__
    ring: CornerRing = field(init=False, repr=False, compare=False)
    ext: OreExtension = field(init=False, repr=False, compare=False)
    injectivity: str = field(init=False, compare=False, default="")

    def __post_init__(self):
        modulus = None
        if isinstance(self.base_field, dict):
            modulus = self.base_field.get("Fp")
            if not isinstance(modulus, int) or isinstance(modulus, bool) or not flint.fmpz(modulus).is_prime():
                raise ScenarioError(f"base_field Fp needs a prime, got {modulus!r}")
        elif self.base_field != "Q":
            raise ScenarioError(f"base_field must be 'Q' or {{'Fp': p}}, got {self.base_field!r}")
        if self.coefficient_ring not in ("field", "poly"):
            raise ScenarioError("coefficient_ring must be 'field' or 'poly'")
        try:
            spec = EndoSpec(self.phi, modulus)
            coeffs = CoefficientRing(spec, self.coefficient_ring == "poly")
        except (ValueError, KeyError) as exc:
            raise ScenarioError(f"phi: {exc}") from None
        for g in self.generators:
            try:
                pos = var_pos(g)
            except ValueError as exc:
                raise ScenarioError(str(exc)) from None
            if g == "t" or not spec.covers(pos):
                raise ScenarioError(f"phi does not cover the generator {g}")
        self.ring = CornerRing(coeffs, self.generators)
        try:
            deriv = derivation_from_json(self.ring, self.derivation)
        except (ValueError, KeyError) as exc:
            raise ScenarioError(f"derivation: {exc}") from None
        self.ext = OreExtension(self.ring, deriv)
        self.injectivity = check_injectivity(spec)

    @property
    def modulus(self):
        return self.ring.modulus

    def sample_count(self, key: str, default: int) -> int:
        return int(self.samples.get(key, default))

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "name": self.name,
            "base_field": copy.deepcopy(self.base_field),
            "coefficient_ring": self.coefficient_ring,
            "phi": copy.deepcopy(self.phi),
            "derivation": copy.deepcopy(self.derivation),
            "generators": list(self.generators),
            "seed": self.seed,
            "samples": dict(self.samples),
            "params": dict(self.params),
        }

    def digest(self) -> str:
        text = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    @classmethod
    def from_json(cls, obj: dict) -> "ScenarioConfig":
        if not isinstance(obj, dict):
            raise ScenarioError("scenario must be a JSON object")
        schema = obj.get("schema")
        if schema != SCHEMA:
            raise ScenarioError(f"unsupported schema {schema!r}; expected {SCHEMA!r}")
        required = ["name", "base_field", "coefficient_ring", "phi", "derivation", "generators"]
        missing = [k for k in required if k not in obj]
        if missing:
            raise ScenarioError(f"missing fields: {', '.join(missing)}")
        unknown = set(obj) - set(required) - {"schema", "seed", "samples", "params"}
        if unknown:
            raise ScenarioError(f"unknown fields: {', '.join(sorted(unknown))}")
        if not isinstance(obj["phi"], list) or not all(
            isinstance(r, dict) and set(r) == {"pattern", "image"} for r in obj["phi"]
        ):
            raise ScenarioError("phi must be a list of {pattern, image} rules")
        if not isinstance(obj["derivation"], dict):
            raise ScenarioError("derivation must be an object with a 'kind'")
        return cls(
            name=str(obj["name"]),
            base_field=obj["base_field"],
            coefficient_ring=obj["coefficient_ring"],
            phi=obj["phi"],
            derivation=obj["derivation"],
            generators=list(obj["generators"]),
            seed=int(obj.get("seed", 0)),
            samples=dict(obj.get("samples", {})),
            params=dict(obj.get("params", {})),
        )


_FINAL_PHI = [{"pattern": "x{i}", "image": "x{i+1}^{i+1}"}]


def _example_41(k=None, omega: str = "x0") -> dict:
    return {
        "schema": SCHEMA,
        "name": "example-4.1",
        "base_field": "Q",
        "coefficient_ring": "poly",
        "phi": [{"pattern": "t", "image": "x1"}, {"pattern": "x{i}", "image": "x{i+2}"}],
        "derivation": {"kind": "delta_omega", "omega": omega},
        "generators": ["x0", "x1", "x2", "x3"],
    }


def _asano(k=None) -> dict:
    return {
        "schema": SCHEMA,
        "name": "asano",
        "base_field": "Q",
        "coefficient_ring": "field",
        "phi": [{"pattern": "x", "image": "x^2"}],
        "derivation": {"kind": "delta_omega", "omega": "x"},
        "generators": ["x"],
    }


def _final_example(k=None) -> dict:
    k = 0 if k is None else int(k)
    if k < 0:
        raise ScenarioError("final-example needs k >= 0")
    gens = [f"x{i}" for i in range(max(4, k + 2))]
    return {
        "schema": SCHEMA,
        "name": "final-example",
        "base_field": "Q",
        "coefficient_ring": "field",
        "phi": copy.deepcopy(_FINAL_PHI),
        "derivation": {"kind": "delta_omega", "omega": f"x{k}"},
        "generators": gens,
        "params": {"k": k},
    }


def _commutative(k=None) -> dict:
    return {
        "schema": SCHEMA,
        "name": "commutative",
        "base_field": "Q",
        "coefficient_ring": "field",
        "phi": [{"pattern": "x{i}", "image": "x{i}"}],
        "derivation": {"kind": "commutative_field", "d": {"x0": "1"}},
        "generators": ["x0", "x1", "x2"],
    }


def _identity(k=None) -> dict:
    # phi = id with delta_omega: the degenerate commutative corner ring
    return {
        "schema": SCHEMA,
        "name": "identity",
        "base_field": "Q",
        "coefficient_ring": "field",
        "phi": [{"pattern": "x{i}", "image": "x{i}"}],
        "derivation": {"kind": "delta_omega", "omega": "x0"},
        "generators": ["x0", "x1", "x2"],
    }


PRESETS = {
    "example-4.1": _example_41,
    "asano": _asano,
    "final-example": _final_example,
    "commutative": _commutative,
    "identity": _identity,
}


def preset(name: str, k=None) -> ScenarioConfig:
    try:
        builder = PRESETS[name]
    except KeyError:
        raise ScenarioError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None
    return ScenarioConfig.from_json(builder(k))


def load_scenario(source, k=None) -> ScenarioConfig:
    """A preset name, a path to a scenario JSON file, or an already parsed dict."""
    if isinstance(source, dict):
        return ScenarioConfig.from_json(source)
    source = str(source)
    if source in PRESETS:
        return preset(source, k)
    path = Path(source)
    if not path.exists():
        raise ScenarioError(f"no preset or file named {source!r}")
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: {exc}") from None
    return ScenarioConfig.from_json(obj)
