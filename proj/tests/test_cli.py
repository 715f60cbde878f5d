"""CLI checks: exit codes, determinism, output files and JSON schemas."""

import hashlib
import json
import pathlib
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BINARY = pathlib.Path(sys.argv.pop(1))
ROOT = pathlib.Path(sys.argv.pop(1))
SCHEMAS = ROOT / "docs" / "schemas"
SCENARIOS = ROOT / "scenarios"


def run(*args):
    return subprocess.run([str(BINARY), *map(str, args)], capture_output=True, text=True, timeout=300)


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def validate(doc, name):
    jsonschema.Draft202012Validator(schema(name)).validate(doc)


class Cli(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = pathlib.Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def check_manifest(self, out):
        man = json.loads((out / "manifest.json").read_text())
        validate(man, "manifest")
        for name, digest in man["outputs"].items():
            self.assertEqual(hashlib.sha256((out / name).read_bytes()).hexdigest(), digest, name)
        return man

    def test_schemas_are_valid(self):
        for path in SCHEMAS.glob("*.schema.json"):
            jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))

    def test_verify_report_and_manifest(self):
        out = self.dir / "v"
        r = run("verify", "thm32", "--n", 3, "--m", 2, "--samples", 2000, "--seed", 7, "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        report = json.loads((out / "report.json").read_text())
        validate(report, "campaign_report")
        self.assertTrue(report["passed"])
        man = self.check_manifest(out)
        self.assertEqual(man["subcommand"], "verify")
        self.assertEqual(man["seed"], 7)

    def test_verify_is_deterministic_across_threads(self):
        outs = []
        for threads in (1, 3):
            r = run("verify", "lemma31", "--n", 4, "--m", 3, "--samples", 3000, "--seed", 11, "--threads", threads)
            self.assertEqual(r.returncode, 0, r.stderr)
            outs.append(json.loads(r.stdout))
        self.assertEqual(outs[0], outs[1])

    def test_verify_exact(self):
        r = run("verify", "thm32", "--n", 3, "--m", 3, "--samples", 50, "--exact")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertTrue(json.loads(r.stdout)["exact"])

    def test_verify_errors(self):
        self.assertEqual(run("verify", "nosuch").returncode, 2)
        self.assertEqual(run("verify", "thm32", "--n", 5, "--exact").returncode, 2)
        self.assertEqual(run("verify", "rs1", "--n", 2, "--m", 3).returncode, 2)
        self.assertEqual(run().returncode, 2)
        self.assertEqual(run("bogus").returncode, 2)

    def test_criteria_json(self):
        for profile, theorem in [("hopf_s3_s2", 13), ("hopf_s2n1_cpn(3)", 14), ("identity(4)", 14)]:
            r = run("criteria", profile, "--theorem", theorem, "--json")
            self.assertEqual(r.returncode, 0, r.stderr)
            doc = json.loads(r.stdout)
            validate(doc, "criteria_report")
            self.assertFalse(doc["dilation"]["feasible"])
        r = run("criteria", "hopf_s3_s2", "--theorem", 13)
        self.assertIn("hypotheses not met", r.stdout)

    def test_criteria_profile_file(self):
        prof = {"name": "shrunk", "source": "sphere(3)", "target": "sphere(2)", "spectrum": [1.2, 1.2]}
        validate(prof, "profile")
        path = self.dir / "p.json"
        path.write_text(json.dumps(prof))
        out = self.dir / "c"
        r = run("criteria", path, "--theorem", 13, "--json", "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        doc = json.loads((out / "criteria.json").read_text())
        validate(doc, "criteria_report")
        self.assertTrue(doc["dilation"]["feasible"])
        self.check_manifest(out)
        path.write_text('{"source": "sphere(3)"}')
        self.assertEqual(run("criteria", path, "--theorem", 13).returncode, 2)
        self.assertEqual(run("criteria", "hopf_s3_s2", "--theorem", 12).returncode, 2)

    def test_curvature(self):
        out = self.dir / "k"
        r = run("curvature", "cp(3) scaled 2", "--plane", 0.5, "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        validate(json.loads((out / "curvature.json").read_text()), "curvature_report")
        self.check_manifest(out)
        self.assertEqual(run("curvature", "cube(3)").returncode, 2)

    def test_flow_outputs(self):
        out = self.dir / "f"
        r = run("flow", SCENARIOS / "torus_sine_05_quick.cfg", "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        verdict = json.loads((out / "verdict.json").read_text())
        validate(verdict, "flow_verdict")
        self.assertTrue(verdict["passed"])
        man = self.check_manifest(out)
        names = set(man["outputs"])
        self.assertTrue(any(n.endswith(".csv") for n in names))
        self.assertTrue(any(n.endswith(".svg") for n in names))
        csv = next(out.glob("*.csv")).read_text().splitlines()
        self.assertEqual(csv[0], "t,min_phi,max_two_dilation,max_lambda,sup_A2")

    def test_flow_is_deterministic(self):
        a, b = self.dir / "a", self.dir / "b"
        for d in (a, b):
            self.assertEqual(run("flow", SCENARIOS / "equivariant_identity.cfg", "--out", d, "--no-svg").returncode, 0)
        for f in a.iterdir():
            if f.name != "manifest.json":
                self.assertEqual(f.read_bytes(), (b / f.name).read_bytes(), f.name)

    def test_flow_bad_scenario(self):
        path = self.dir / "bad.cfg"
        path.write_text("backend = torus\nresolution = 16\ninitial = sine\nt_max = 1\ntypo = 1\n")
        self.assertEqual(run("flow", path).returncode, 2)


if __name__ == "__main__":
    unittest.main(verbosity=2)
