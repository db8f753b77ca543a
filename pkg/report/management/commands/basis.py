import math

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from scipy.special import pbdv

from diracni.utils import gen_grid_points, max_abs
from ode.systems import kappa_of
from operators.checks import CheckResult, eigen_residual
from report.base import ReportCommand
from scenario import crossed, magnetic, spherical

COORDINATES = {
    "spherical": ("r", "theta", "phi"),
    "magnetic": ("x", "y", "z"),
    "crossed": ("u", "v"),
}
EIGEN_TOL = 1e-7
PBDV_TOL = 1e-6


def _columns(scenario):
    values = [f"{kind}_{k}" for k in range(4) for kind in ("abs2", "phase")]
    return COORDINATES[scenario] + tuple(values)


def _row(names, point, value):
    row = {name: float(x) for name, x in zip(names, point)}
    for k, component in enumerate(value):
        row[f"abs2_{k}"] = float(abs(component) ** 2)
        row[f"phase_{k}"] = float(np.angle(component))
    return row


class Command(ReportCommand):
    help = "Dump |psi|^2 and the phase of every component of a basis solution on a grid"

    def build(self, config, report):
        spec = config.scenario_spec()
        size = settings.GRID_SIZE if config.grid is None else config.grid
        box = list(spec.box)
        if config.scenario == "crossed" and config.v_range:
            low, high = config.v_range
            if not low > 0:
                raise ValidationError("The crossed basis needs v > 0.")
            box[1] = (low, high)
        points = gen_grid_points(box, size, margin=max(settings.SINGULAR_MARGIN, 0.1))
        field = getattr(self, f"{config.scenario}_basis")(config, spec, points, report)
        names = COORDINATES[config.scenario]
        report.columns = _columns(config.scenario)
        report.rows = [_row(names, point, field.values(point)) for point in points]
        report.note(f"{field.name}: norm {field.norm_on(points):.6e} on {len(points)} points")

    def energy_check(self, config, h, field, energy, points):
        tol = settings.RESIDUAL_TOL if config.tol is None else config.tol
        return CheckResult("basis: (H - E) psi on grid", eigen_residual(h, field, energy, points), tol)

    def integration_check(self, config, profile):
        tol = settings.RESIDUAL_TOL if config.tol is None else config.tol
        return CheckResult("basis: integration error vs tighter rerun", profile.integration_error(), tol)

    def spherical_basis(self, config, spec, points, report):
        j, zeta = config.j, config.zeta
        profile = spherical.radial_profile(spec, j, zeta)
        if config.basis == "sov":
            field = spherical.sov_basis_spherical(j, config.projection, zeta, profile)
        else:
            field = spherical.ni_basis_spherical(j, zeta, config.q, profile)
        h = spherical.spherical_hamiltonian(spec)
        spin = spherical.spin_operator()
        report.add(
            self.integration_check(config, profile),
            self.energy_check(config, h, field, spec.energy, points),
            CheckResult(
                "basis: S psi = i kappa psi", eigen_residual(spin, field, 1j * kappa_of(j, zeta), points), EIGEN_TOL
            ),
        )
        return field

    def magnetic_basis(self, config, spec, points, report):
        zeta, eh = config.zeta, spec.eH
        h = magnetic.magnetic_hamiltonian(spec)
        if config.basis == "sov":
            n, p = config.n, config.p
            profile = magnetic.axial_profile(spec, n, zeta)
            field = magnetic.sov_basis_magnetic(spec, n, p, zeta, profile)
            report.add(self.parabolic_profile_check(spec, field, profile, points))
        else:
            profile = magnetic.axial_profile(spec, 1, zeta)
            field = magnetic.ni_basis_magnetic(spec, config.q, zeta, profile)
            spin = magnetic.magnetic_spin_operator(spec)
            report.add(
                CheckResult(
                    "basis: S psi = zeta sqrt(eH) psi",
                    eigen_residual(spin, field, zeta * math.sqrt(eh), points),
                    EIGEN_TOL,
                )
            )
        report.add(self.integration_check(config, profile), self.energy_check(config, h, field, spec.energy, points))
        return field

    def parabolic_profile_check(self, spec, field, profile, points):
        """The second component against an independent D_{k-1}(xi) f(z) e^{ipy}."""
        eh, k, p = spec.eH, field.labels["k"], field.labels["p"]
        f = profile.component(0)
        scale = math.sqrt(2 / eh)
        actual, expected = [], []
        for x, y, z in points:
            xi = scale * (eh * x - p)
            expected.append(pbdv(k - 1, xi)[0] * f(z) * np.exp(1j * p * y))
            actual.append(field.values([x, y, z])[1])
        residual = max_abs(np.array(actual) - np.array(expected)) / max_abs(expected)
        return CheckResult("basis: xi-profile vs scipy parabolic cylinder", residual, PBDV_TOL)

    def crossed_basis(self, config, spec, points, report):
        kappa, q1, q2 = config.kappa[0], config.q1, config.q2
        profile = crossed.crossed_profile(spec, kappa, q1, q2)
        field = crossed.crossed_solution(spec, kappa, q1, q2, profile)
        y = crossed.crossed_Y(spec, q1, q2)
        reduced = crossed.crossed_reduced_op(spec, q1, q2)
        report.add(
            self.integration_check(config, profile),
            CheckResult("basis: -i Y psi = kappa psi", eigen_residual(y, field, 1j * kappa, points), EIGEN_TOL),
            CheckResult(
                "basis: (H_red - m) psi on grid",
                eigen_residual(reduced, field, spec.mass, points),
                settings.RESIDUAL_TOL if config.tol is None else config.tol,
            ),
        )
        return field
