"""Shared option parsing, error mapping and output for the dirac-ni commands."""
import logging
import time
from pathlib import Path

import yaml
from django.conf import settings
from django.core.exceptions import ValidationError as DjangoValidationError
from django.core.management.base import BaseCommand, CommandError
from django.core.management.color import no_style
from marshmallow import ValidationError

from diracni.exceptions import QuadratureNotConverged, StepUnderflow
from report.reports import Report
from report.serializers import load_run_config

logger = logging.getLogger(__name__)

EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_NOT_CONVERGED = 3


class ReportCommand(BaseCommand):
    """Base for commands that validate a RunConfig, build a Report and write it."""

    requires_system_checks = []

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        if settings.NO_COLOR:
            self.style = no_style()
            self.stderr.style_func = None

    def add_arguments(self, parser):
        parser.add_argument("--config", help="YAML file of option values; flags override it")
        parser.add_argument("--scenario", help="spherical, magnetic or crossed")
        parser.add_argument("--mass", type=float)
        parser.add_argument("--charge", type=float)
        parser.add_argument("--energy", type=float)
        parser.add_argument("--potential", help="rule for eV, const:<v> or linear:<a>,<b>")
        parser.add_argument("--j", type=float)
        parser.add_argument("--m", type=float)
        parser.add_argument("--zeta", type=int)
        parser.add_argument("--q-re", dest="q_re", type=float)
        parser.add_argument("--q-im", dest="q_im", type=float)
        parser.add_argument("--zalpha", type=float)
        parser.add_argument("--kappa", type=float, nargs="+")
        parser.add_argument("--nr", type=int)
        parser.add_argument("--eH", dest="eH", type=float)
        parser.add_argument("--p", type=float)
        parser.add_argument("--n", type=int)
        parser.add_argument("--alpha", type=float)
        parser.add_argument("--epsilon", type=float)
        parser.add_argument("--phi", help="rule for phi(y), const:<v> or linear:<a>,<b>")
        parser.add_argument("--q1", type=float)
        parser.add_argument("--q2", type=float)
        parser.add_argument("--basis", help="sov or ni")
        parser.add_argument("--v-range", dest="v_range", type=float, nargs=2)
        parser.add_argument("--tol", type=float)
        parser.add_argument("--grid", type=int)
        parser.add_argument("--seed", type=int)
        parser.add_argument("--cutoff", type=float)
        parser.add_argument("--nodes", type=int)
        parser.add_argument("--out", help="output path; stdout when omitted")
        parser.add_argument("--format", help="json or csv")

    def build(self, config, report):
        raise NotImplementedError

    def load_options(self, options):
        path = options.pop("config", None)
        if not path:
            return options
        try:
            with open(path) as yaml_file:
                defaults = yaml.safe_load(yaml_file) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ValidationError(f"Cannot read {path}: {exc}")
        if not isinstance(defaults, dict):
            raise ValidationError(f"{path} must hold a mapping of options.")
        merged = {key.replace("-", "_"): value for key, value in defaults.items()}
        merged.update({key: value for key, value in options.items() if value is not None})
        return merged

    def handle(self, *args, **options):
        try:
            config = load_run_config(self.name, self.load_options(options))
            report = Report(command=self.name, config=config.echo(), seed=config.seed)
            started = time.perf_counter()
            self.build(config, report)
            logger.info("%s finished in %.2f s", self.name, time.perf_counter() - started)
        except ValidationError as exc:
            raise CommandError(f"Invalid configuration: {exc.normalized_messages()}", returncode=EXIT_CONFIG)
        except DjangoValidationError as exc:
            raise CommandError(f"Invalid configuration: {'; '.join(exc.messages)}", returncode=EXIT_CONFIG)
        except (QuadratureNotConverged, StepUnderflow) as exc:
            raise CommandError(f"Numerical failure: {exc}", returncode=EXIT_NOT_CONVERGED)
        self.write(config, report)
        if not report.passed:
            names = ", ".join(check.name for check in report.failures)
            raise CommandError(f"Failed checks: {names}", returncode=EXIT_FAILED)
        self.stderr.write(self.style.SUCCESS(f"{self.name}: {len(report.checks)} checks passed"))

    @property
    def name(self):
        return self.__module__.rsplit(".", 1)[-1]

    def write(self, config, report):
        text = report.render(config.format)
        if config.out:
            Path(config.out).write_text(text)
            self.stderr.write(f"Wrote {config.out}")
        else:
            self.stdout.write(text, ending="")
