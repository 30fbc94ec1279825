"""Runs every CLI subcommand, validates JSON output against the shipped
schemas and checks CSV headers and exit codes.

usage: cli_schemas.py <loggas binary> <schema dir>
"""

import csv
import io
import json
import math
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

BINARY = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])

registry = Registry()
for path in SCHEMAS.glob("*.schema.json"):
    contents = json.loads(path.read_text())
    registry = registry.with_resource(contents["$id"], Resource.from_contents(contents))
failures = []


def run(*args, expect=0):
    result = subprocess.run([BINARY, *args], capture_output=True, text=True)
    if result.returncode != expect:
        failures.append(f"{' '.join(args)}: exit {result.returncode}, expected {expect}\n{result.stderr}")
    return result.stdout


def validate(name, document):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema, registry=registry)
    for error in validator.iter_errors(document):
        failures.append(f"{name}: {error.message}")


def header(text):
    return next(csv.reader(io.StringIO(text)))


def check(condition, message):
    if not condition:
        failures.append(message)


small = ["--grid-points", "256"]

validate("equilibrium", json.loads(run("equilibrium", "--p", "1", "--format", "json")))
validate("d1", json.loads(run("d1", "--p", "1", "--psi", "cos", *small)))
validate("expand-gaussian", json.loads(run("expand-gaussian", "--p", "1", "--orders", "2")))
validate("free-energy", json.loads(run("free-energy")))
validate("coefficients", json.loads(run("coefficients", "--p", "1", "--phi", "cos", "--t-nodes", "8", *small)))
validate("sample", json.loads(run("sample", "--n", "10", "--sweeps", "200", "--burn-in", "50")))
report = json.loads(run("verify", "--seed", "42"))
validate("verify", report)
check(report["all_pass"], "verify reported failing checks")

expansion = json.loads(run("expand-gaussian", "--p", "1", "--orders", "2"))
check(len(expansion["coefficients"]) == 3, "expand-gaussian --orders 2 must give g0, g1, g2")

with tempfile.TemporaryDirectory() as tmp:
    out = pathlib.Path(tmp)
    run("equilibrium", "--p", "1", "--out", str(out / "eq.csv"))
    rows = list(csv.reader((out / "eq.csv").open()))
    check(rows[0] == ["x", "rho", "residual"], f"equilibrium header {rows[0]}")
    x = [float(r[0]) for r in rows[1:]]
    rho = [float(r[1]) for r in rows[1:]]
    h = x[1] - x[0]
    mass = h * (sum(rho) - 0.5 * (rho[0] + rho[-1]))
    check(abs(mass - 1.0) <= 1e-10, f"equilibrium mass from CSV {mass}")
    validate("equilibrium", json.loads((out / "eq.json").read_text()))

    run("flow", "--p", "1", "--phi", "cos", "--method", "all", *small, "--out", str(out / "flow.csv"))
    check(header((out / "flow.csv").read_text()) == ["x", "rho_initial", "rho_ode", "rho_fixedpoint", "rho_refit"],
          "flow CSV header")
    flow = json.loads((out / "flow.json").read_text())
    validate("flow", flow)
    check(all(g["sup_norm"] <= 1e-5 for g in flow["gaps"]), "flow routes disagree")

check(header(run("free-energy", "--format", "csv")) == ["P", "free_energy", "large_p_law", "scaled_residual"],
      "free-energy CSV header")
sample_csv = run("sample", "--n", "10", "--sweeps", "200", "--burn-in", "50", "--format", "csv")
check(header(sample_csv) == ["chain", "batch", "mean"], "sample CSV header")
check(len(sample_csv.strip().splitlines()) == 1 + 4 * 32, "sample CSV must hold 32 batches per chain")

first = run("sample", "--n", "10", "--sweeps", "200", "--burn-in", "50", "--seed", "7", "--threads", "1")
second = run("sample", "--n", "10", "--sweeps", "200", "--burn-in", "50", "--seed", "7", "--threads", "3")
check(first == second, "sample output depends on the thread count")
check(json.loads(first)["config"]["seed"] == 7, "seed not recorded in config")

run("equilibrium", "--no-such-flag", expect=2)
run("bogus", expect=2)
run("equilibrium", "--p", "-1", expect=2)
run("equilibrium", "--potential", "nonexistent", expect=2)
run("flow", "--p", "1", expect=2)
run("equilibrium", "--p", "10", "--tol", "1e-13", expect=1)

if failures:
    print("\n".join(failures))
    sys.exit(1)
print("all CLI outputs validate")
