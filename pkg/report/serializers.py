"""Validation of command options into a RunConfig."""
from dataclasses import asdict, dataclass
from typing import Optional

from django.conf import settings
from django.core.exceptions import ValidationError as DjangoValidationError
from marshmallow import (
    EXCLUDE,
    Schema,
    ValidationError,
    fields,
    post_load,
    validate,
    validates,
    validates_schema,
)

from ode.potentials import parse_potential, zero_potential
from scenario.specs import KINDS, ScenarioSpec

COMMANDS = ("verify", "spectrum", "basis", "bridge")
FORMATS = ("json", "csv")
BASES = ("sov", "ni")
MAX_BRIDGE_J = 3.5
# default q per scenario, away from branch points
DEFAULT_Q = {"spherical": 0.3 + 0.2j, "magnetic": 1.0 + 0.5j, "crossed": 0j}


@dataclass(frozen=True)
class RunConfig:
    command: str
    scenario: str
    mass: float
    charge: float
    energy: float
    potential: Optional[str]
    j: float
    m: Optional[float]
    zeta: int
    q_re: Optional[float]
    q_im: Optional[float]
    zalpha: float
    kappa: list
    nr: int
    eH: float
    p: float
    n: int
    alpha: float
    epsilon: float
    phi: Optional[str]
    q1: float
    q2: float
    tol: Optional[float]
    grid: Optional[int]
    seed: int
    out: Optional[str]
    format: str
    cutoff: Optional[float]
    nodes: Optional[int]
    basis: str = "ni"
    v_range: Optional[list] = None

    @property
    def q(self):
        default = DEFAULT_Q[self.scenario]
        re = default.real if self.q_re is None else self.q_re
        im = default.imag if self.q_im is None else self.q_im
        return complex(re, im)

    @property
    def projection(self):
        return self.j if self.m is None else self.m

    def scenario_spec(self):
        kwargs = {
            "kind": self.scenario,
            "mass": self.mass,
            "charge": self.charge,
            "energy": self.energy,
            "potential": parse_potential(self.potential) if self.potential else zero_potential,
        }
        if self.scenario == "magnetic":
            kwargs["field_strength"] = self.eH / self.charge
        if self.scenario == "crossed":
            kwargs.update(
                alpha=self.alpha,
                epsilon=self.epsilon,
                phi=parse_potential(self.phi) if self.phi else zero_potential,
            )
        return ScenarioSpec(**kwargs)

    def echo(self):
        """Options as given, in a stable order."""
        data = asdict(self)
        return {key: data[key] for key in sorted(data)}


class RunConfigSchema(Schema):
    class Meta:
        unknown = EXCLUDE

    command = fields.Str(required=True, validate=validate.OneOf(COMMANDS))
    scenario = fields.Str(load_default="spherical", validate=validate.OneOf(KINDS))
    mass = fields.Float(load_default=1.0, validate=validate.Range(min=0, min_inclusive=False))
    charge = fields.Float(load_default=1.0)
    energy = fields.Float(load_default=0.5)
    potential = fields.Str(load_default=None, allow_none=True)
    j = fields.Float(load_default=0.5, validate=validate.Range(min=0))
    m = fields.Float(load_default=None, allow_none=True)
    zeta = fields.Int(load_default=1, validate=validate.OneOf([1, -1]))
    q_re = fields.Float(load_default=None, allow_none=True)
    q_im = fields.Float(load_default=None, allow_none=True)
    zalpha = fields.Float(load_default=0.3, validate=validate.Range(min=0, max=1))
    kappa = fields.List(fields.Float(), load_default=lambda: [-1.0, 1.0, -2.0])
    nr = fields.Int(load_default=2, validate=validate.Range(min=0, max=20))
    eH = fields.Float(load_default=1.0, validate=validate.Range(min=0, min_inclusive=False))
    p = fields.Float(load_default=0.0)
    n = fields.Int(load_default=1, validate=validate.Range(min=0, max=20))
    alpha = fields.Float(load_default=0.3)
    epsilon = fields.Float(load_default=1.0, validate=validate.Range(min=0, min_inclusive=False))
    phi = fields.Str(load_default=None, allow_none=True)
    q1 = fields.Float(load_default=0.2)
    q2 = fields.Float(load_default=0.1)
    tol = fields.Float(load_default=None, allow_none=True, validate=validate.Range(min=0, min_inclusive=False))
    grid = fields.Int(load_default=None, allow_none=True, validate=validate.Range(min=2, max=64))
    seed = fields.Int(load_default=lambda: settings.DEFAULT_SEED, validate=validate.Range(min=0, max=2**64 - 1))
    out = fields.Str(load_default=None, allow_none=True)
    format = fields.Str(load_default="json", validate=validate.OneOf(FORMATS))
    cutoff = fields.Float(load_default=None, allow_none=True, validate=validate.Range(min=1))
    nodes = fields.Int(load_default=None, allow_none=True, validate=validate.Range(min=16))
    basis = fields.Str(load_default="ni", validate=validate.OneOf(BASES))
    v_range = fields.List(fields.Float(), load_default=None, allow_none=True, validate=validate.Length(equal=2))

    @validates("potential")
    def validate_potential(self, value):
        _check_rule(value)

    @validates("phi")
    def validate_phi(self, value):
        _check_rule(value)

    @validates("kappa")
    def validate_kappa(self, value):
        if not value:
            raise ValidationError("At least one kappa is required.")

    @validates_schema
    def validate_scenario(self, data, **kwargs):
        if data["scenario"] == "magnetic" and data["charge"] == 0:
            raise ValidationError("The magnetic scenario needs a non-zero charge.", "charge")
        if data["command"] == "bridge" and data["j"] > MAX_BRIDGE_J:
            raise ValidationError(f"The bridge is evaluated for j <= {MAX_BRIDGE_J:g}.", "j")
        if data["command"] == "basis" and data["scenario"] == "magnetic" and data["basis"] == "sov" and data["n"] < 1:
            raise ValidationError("The separated magnetic basis needs n >= 1.", "n")

    @post_load
    def make_config(self, data, **kwargs):
        return RunConfig(**data)


def _check_rule(value):
    if value is None:
        return
    try:
        parse_potential(value)
    except DjangoValidationError as exc:
        raise ValidationError(exc.messages)


def load_run_config(command, options):
    """Validated RunConfig from command options; raises marshmallow's ValidationError."""
    data = {key: value for key, value in options.items() if value is not None}
    data["command"] = command
    return RunConfigSchema().load(data)
