import io
import json
import tempfile
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError

from diracni.tests import TestBase

FAST = {"grid": 3}


class CommandTestBase(TestBase):
    def setUp(self):
        super().setUp()
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def run_command(self, name, **options):
        stdout, stderr = io.StringIO(), io.StringIO()
        call_command(name, stdout=stdout, stderr=stderr, **options)
        return stdout.getvalue()

    def run_json(self, name, **options):
        return json.loads(self.run_command(name, **options))

    def assertExitCode(self, code, name, **options):
        with self.assertRaises(CommandError) as ctx:
            self.run_command(name, **options)
        self.assertEqual(ctx.exception.returncode, code)

    def path(self, name):
        return str(Path(self.tmp.name) / name)


class VerifyCommandTest(CommandTestBase):
    def test_spherical_suite_passes(self):
        report = self.run_json("verify", scenario="spherical", cutoff=12.0, **FAST)
        self.assertTrue(report["pass"])
        names = [check["name"] for check in report["checks"]]
        self.assertIn("spherical: X_a brackets", names)
        self.assertIn("spherical NI: (H - E) psi on grid", names)
        self.assertEqual(names, sorted(names))
        self.assertTrue(any("ind g = 1, dim Q = 1" in note for note in report["notes"]))

    def test_crossed_suite_passes(self):
        report = self.run_json("verify", scenario="crossed", phi="linear:0.5,0.2", epsilon=0.8, **FAST)
        self.assertTrue(report["pass"])
        checks = {check["name"]: check for check in report["checks"]}
        self.assertTrue(checks["crossed: X_a brackets"]["pass"])
        asserted = (
            "crossed: [H_red, Y]",
            "crossed: (H_red - m) psi on grid",
            "crossed: reduced ODE matrix derived from H_red",
        )
        for name in asserted:
            self.assertTrue(checks[name]["pass"])
            self.assertFalse(checks[name]["diagnostic"])
        self.assertTrue(checks["crossed: printed reduced ODE matrix"]["diagnostic"])

    def test_magnetic_measure_sign_is_chosen_by_skew_defect(self):
        report = self.run_json("verify", scenario="magnetic", nodes=64, **FAST)
        self.assertTrue(report["pass"])
        checks = {check["name"]: check for check in report["checks"]}
        for name in ("e2c: l1 Hermitian", "e2c: l2 Hermitian", "e2c: l0 skew-Hermitian", "e2c: l3 skew-Hermitian"):
            self.assertTrue(checks[name]["pass"])
            self.assertFalse(checks[name]["diagnostic"])
        measures = [note for note in report["notes"] if note.startswith("measure exp(")]
        self.assertEqual(len(measures), 2)
        self.assertIn("-2 eH |q|^2), selected", measures[1])

    def test_negative_field_is_config_error(self):
        self.assertExitCode(2, "verify", scenario="magnetic", eH=-1.0)

    def test_integer_j_is_config_error(self):
        self.assertExitCode(2, "verify", scenario="spherical", j=1.0, **FAST)


class SpectrumCommandTest(CommandTestBase):
    def test_levels_match_oracle(self):
        report = self.run_json("spectrum", zalpha=0.3, kappa=[-1.0, 1.0], nr=1)
        self.assertTrue(report["pass"])
        statuses = {(row["kappa"], row["n_r"]): row["status"] for row in report["rows"]}
        self.assertEqual(statuses[(-1, 0)], "ok")
        self.assertEqual(statuses[(1, 0)], "no bound state")
        self.assertEqual(statuses[(1, 1)], "ok")
        for row in report["rows"]:
            if row["status"] == "ok":
                self.assertSmall(row["relative_error"], 1e-8)

    def test_free_case_gives_empty_table(self):
        report = self.run_json("spectrum", zalpha=0.0)
        self.assertEqual(report["rows"], [])
        self.assertEqual(len(report["notes"]), 1)

    def test_non_integer_kappa_rejected(self):
        self.assertExitCode(2, "spectrum", kappa=[-1.5])

    def test_csv_is_deterministic(self):
        first, second = self.path("a.csv"), self.path("b.csv")
        for out in (first, second):
            self.run_command("spectrum", zalpha=0.3, kappa=[-1.0], nr=0, format="csv", out=out)
        self.assertEqual(Path(first).read_bytes(), Path(second).read_bytes())
        header = Path(first).read_text().splitlines()[0]
        self.assertEqual(header, "n_r,kappa,energy,oracle,relative_error,status")


class BasisCommandTest(CommandTestBase):
    def test_spherical_ni_grid(self):
        report = self.run_json("basis", scenario="spherical", j=1.5, q_re=0.3, q_im=0.2, grid=4)
        self.assertTrue(report["pass"])
        self.assertEqual(len(report["rows"]), 4**3)
        self.assertEqual(report["columns"][:3], ["r", "theta", "phi"])
        checks = {check["name"]: check for check in report["checks"]}
        self.assertTrue(checks["basis: integration error vs tighter rerun"]["pass"])

    def test_magnetic_sov_profile(self):
        report = self.run_json("basis", scenario="magnetic", basis="sov", n=2, p=0.3, grid=4)
        checks = {check["name"]: check for check in report["checks"]}
        self.assertTrue(checks["basis: xi-profile vs scipy parabolic cylinder"]["pass"])
        self.assertTrue(report["pass"])

    def test_crossed_non_positive_v_rejected(self):
        self.assertExitCode(2, "basis", scenario="crossed", v_range=[-1.0, 1.0], grid=3)

    def test_yaml_config(self):
        path = self.path("run.yaml")
        Path(path).write_text("scenario: crossed\nv-range: [0.5, 1.5]\nkappa: [0.4]\n")
        report = self.run_json("basis", config=path, grid=3)
        self.assertEqual(report["config"]["v_range"], [0.5, 1.5])
        self.assertEqual(report["config"]["grid"], 3)
        self.assertEqual(report["columns"][:2], ["u", "v"])
        self.assertTrue(report["pass"])
        checks = {check["name"]: check for check in report["checks"]}
        self.assertFalse(checks["basis: (H_red - m) psi on grid"]["diagnostic"])

    def test_missing_yaml_config(self):
        self.assertExitCode(2, "basis", config=self.path("missing.yaml"))


class BridgeCommandTest(CommandTestBase):
    def test_both_zeta_match(self):
        report = self.run_json("bridge", j=0.5, grid=6, nodes=64)
        self.assertTrue(report["pass"])
        self.assertEqual(len(report["rows"]), 6)
        self.assertEqual({row["zeta"] for row in report["rows"]}, {1, -1})

    def test_integer_j_is_evaluated_without_assertion(self):
        report = self.run_json("bridge", j=1.0)
        self.assertTrue(report["pass"])
        self.assertEqual(len(report["checks"]), 2)
        for check in report["checks"]:
            self.assertTrue(check["diagnostic"])
            self.assertFalse(check["pass"])
            self.assertIn("no D-function", check["note"])
        self.assertEqual({row["zeta"] for row in report["rows"]}, {1, -1})
        self.assertIn("integer j=1", report["notes"][0])

    def test_non_half_integer_j_rejected(self):
        self.assertExitCode(2, "bridge", j=0.7)
