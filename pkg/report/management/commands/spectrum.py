import logging

from django.conf import settings
from django.core.exceptions import ValidationError

from diracni.exceptions import CriticalCharge, NoBoundState, NodeCountMismatch
from ode.shooting import dirac_coulomb_energy, shoot_bound_state
from operators.checks import CheckResult
from report.base import ReportCommand

logger = logging.getLogger(__name__)

COLUMNS = ("n_r", "kappa", "energy", "oracle", "relative_error", "status")


def _integral_kappa(value):
    if int(value) != value or value == 0:
        raise ValidationError(f"kappa={value:g} must be a nonzero integer.")
    return int(value)


class Command(ReportCommand):
    help = "Dirac-Coulomb bound-state energies by shooting, against the analytic levels"

    def build(self, config, report):
        report.columns = COLUMNS
        kappas = [_integral_kappa(k) for k in config.kappa]
        zalpha = config.zalpha
        if zalpha == 0:
            report.note("Z alpha = 0: the free radial equation has no bound states; the table is empty")
            return
        tol = settings.SPECTRUM_TOL if config.tol is None else config.tol
        for kappa in kappas:
            for n_r in range(config.nr + 1):
                report.rows.append(self.level(report, zalpha, kappa, n_r, tol))

    def level(self, report, zalpha, kappa, n_r, tol):
        row = {"n_r": n_r, "kappa": kappa, "energy": None, "oracle": None, "relative_error": None}
        try:
            state = shoot_bound_state(zalpha, kappa, n_r)
        except NoBoundState as exc:
            report.note(str(exc))
            return {**row, "status": "no bound state"}
        except CriticalCharge as exc:
            report.note(str(exc))
            return {**row, "status": "critical charge"}
        except NodeCountMismatch as exc:
            report.add(CheckResult(f"spectrum: kappa={kappa} n_r={n_r} node count", 1.0, 0.0, note=str(exc)))
            return {**row, "status": "failed"}
        oracle = dirac_coulomb_energy(zalpha, kappa, n_r)
        error = abs(state.energy - oracle) / oracle
        check = CheckResult(f"spectrum: kappa={kappa} n_r={n_r}", error, tol)
        report.add(check)
        logger.debug("kappa=%d n_r=%d: E=%.15f oracle=%.15f", kappa, n_r, state.energy, oracle)
        return {
            **row,
            "energy": state.energy,
            "oracle": oracle,
            "relative_error": error,
            "status": "ok" if check.passed else "failed",
        }
