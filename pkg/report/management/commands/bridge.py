from django.conf import settings
from django.core.exceptions import ValidationError

from diracni.utils import is_half_integer
from operators.checks import CheckResult
from report.base import ReportCommand
from scenario.spherical import bridge_grid, bridge_match, integrated_d_table, projections, reference_coefficients

COLUMNS = ("j", "M", "zeta", "mismatch", "factor", "tol", "pass")
BRIDGE_GRID = 20
# looser match from j = 5/2 on
HIGH_J = 2.5
HIGH_J_TOL = 1e-5
OUTSIDE_TOL = 1e-8


class Command(ReportCommand):
    help = "Fourier bridge from the noncommutative spherical basis to the spherical spinors"

    def build(self, config, report):
        report.columns = COLUMNS
        j = config.j
        if not is_half_integer(j):
            raise ValidationError(f"j={j:g} is neither integer nor half-integer.")
        tol = config.tol
        if tol is None:
            tol = HIGH_J_TOL if j >= HIGH_J else settings.BRIDGE_TOL
        if float(j).is_integer():
            self.integer_j(j, tol, report)
            return
        size = BRIDGE_GRID if config.grid is None else config.grid
        thetas, phis = bridge_grid(size)
        for zeta in (1, -1):
            table = integrated_d_table(j, zeta, thetas, phis)
            for m in projections(j):
                mismatch, factor = bridge_match(j, m, zeta, size, config.cutoff, config.nodes, table)
                check = CheckResult(f"bridge: j={j:g} M={m:+g} zeta={zeta:+d}", mismatch, tol)
                report.add(check)
                report.rows.append(self.row(j, m, zeta, mismatch, factor, check))
            outside = j + 1
            magnitude, _ = bridge_match(j, outside, zeta, size, config.cutoff, config.nodes, table)
            check = CheckResult(f"bridge: j={j:g} M={outside:+g} zeta={zeta:+d} outside", magnitude, OUTSIDE_TOL)
            report.add(check)
            report.rows.append(self.row(j, outside, zeta, magnitude, 0.0, check))
        if j >= HIGH_J:
            report.note(f"j={j:g}: bridge tolerance {tol:.0e}")

    def integer_j(self, j, tol, report):
        """The D-function system is solved at the reference angles; the spinor side has no
        integer-j multiplet, so nothing is asserted."""
        for zeta in (1, -1):
            start, smallest = reference_coefficients(j, zeta)
            found = "a D-function" if start is not None else "no D-function"
            check = CheckResult(
                f"bridge: j={j:g} zeta={zeta:+d} D-function",
                smallest,
                tol,
                diagnostic=True,
                note=f"integer j={j:g} (suspected typo): {found}, smallest singular value {smallest:.3e}",
            )
            report.add(check)
            report.rows.append(self.row(j, None, zeta, smallest, 0.0, check))
        report.note(f"integer j={j:g}: spinor multiplets need half-integral j; the bridge is not asserted")

    def row(self, j, m, zeta, mismatch, factor, check):
        return {
            "j": j,
            "M": m,
            "zeta": zeta,
            "mismatch": mismatch,
            "factor": factor,
            "tol": check.tol,
            "pass": check.passed,
        }
