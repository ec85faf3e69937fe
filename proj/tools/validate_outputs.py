#!/usr/bin/env python3
"""Runs the CLI on the bundled scenarios and validates every artifact against schemas/."""

import argparse
import csv
import json
import re
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def load_schema(schemas: Path, name: str) -> jsonschema.protocols.Validator:
    schema = json.loads((schemas / name).read_text())
    cls = jsonschema.validators.validator_for(schema)
    cls.check_schema(schema)
    return cls(schema)


def number(text: str):
    return None if text == "" else float(text)


def integer(text: str):
    return None if text == "" else int(text)


def validate_all(validator, items, label: str) -> int:
    errors = 0
    for i, item in enumerate(items):
        for err in validator.iter_errors(item):
            print(f"{label}[{i}]: {err.message}", file=sys.stderr)
            errors += 1
    return errors


def check_density_frames(path: Path) -> int:
    header = re.compile(r"^# t=(\d+\.\d{3}) rows=(\d+) cols=(\d+) warming=([01])$")
    lines = path.read_text().splitlines()
    i = 0
    errors = 0
    while i < len(lines):
        m = header.match(lines[i])
        if not m:
            print(f"{path.name}:{i + 1}: bad header", file=sys.stderr)
            return errors + 1
        rows, cols = int(m.group(2)), int(m.group(3))
        for r in range(rows):
            values = lines[i + 1 + r].split(" ")
            if len(values) != cols or any(float(v) < 0 for v in values):
                print(f"{path.name}:{i + 2 + r}: bad matrix row", file=sys.stderr)
                errors += 1
        i += rows + 1
    return errors


def check_run_dir(run: Path, schemas: Path) -> int:
    errors = 0
    expected = ["trajectories.csv", "transform_report.jsonl", "zones.jsonl", "density_frames.txt",
                "run_summary.json", "scenario.json"]
    for name in expected:
        if not (run / name).is_file():
            print(f"{run}: missing {name}", file=sys.stderr)
            errors += 1
    if errors:
        return errors

    with open(run / "trajectories.csv", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != ["time_s", "agent_id", "x_m", "y_m", "model", "zone_id"]:
            print(f"{run}: trajectories.csv header {reader.fieldnames}", file=sys.stderr)
            errors += 1
        rows = [{"time_s": number(r["time_s"]), "agent_id": integer(r["agent_id"]), "x_m": number(r["x_m"]),
                 "y_m": number(r["y_m"]), "model": r["model"], "zone_id": integer(r["zone_id"])} for r in reader]
    errors += validate_all(load_schema(schemas, "trajectory_row.schema.json"), rows, "trajectories.csv")

    for name, schema in [("transform_report.jsonl", "transform_report.schema.json"),
                         ("zones.jsonl", "zone_event.schema.json")]:
        items = [json.loads(line) for line in (run / name).read_text().splitlines() if line]
        errors += validate_all(load_schema(schemas, schema), items, name)

    summary = json.loads((run / "run_summary.json").read_text())
    errors += validate_all(load_schema(schemas, "run_summary.schema.json"), [summary], "run_summary.json")
    scenario = json.loads((run / "scenario.json").read_text())
    errors += validate_all(load_schema(schemas, "scenario.schema.json"), [scenario], "scenario.json")
    errors += check_density_frames(run / "density_frames.txt")
    return errors


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--source", required=True)
    args = ap.parse_args()
    source = Path(args.source)
    schemas = source / "schemas"
    scenarios = sorted((source / "scenarios").glob("*.json"))

    errors = validate_all(load_schema(schemas, "scenario.schema.json"),
                          [json.loads(p.read_text()) for p in scenarios], "scenarios")

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for mode in ["hybrid", "pure-continuous", "pure-discrete"]:
            for scen in scenarios:
                out = tmp / f"{scen.stem}-{mode}"
                subprocess.run([args.cli, "run", "--scenario", str(scen), "--mode", mode, "--t-end", "60",
                                "--out", str(out)], check=True, stdout=subprocess.DEVNULL)
                errors += check_run_dir(out, schemas)

        bench = tmp / "bench.csv"
        subprocess.run([args.cli, "benchmark", "--scenario", str(source / "scenarios" / "corridor.json"),
                        "--counts", "0,10", "--reps", "1", "--no-warmup", "--t-end", "120",
                        "--modes", "pure-continuous,hybrid-series-2,hybrid-series-3", "--out", str(bench)],
                       check=True)
        with open(bench, newline="") as f:
            rows = [{"mode": r["mode"], "n_agents": int(r["n_agents"]), "rep": int(r["rep"]),
                     "wall_seconds": float(r["wall_seconds"]), "escape_time_s": number(r["escape_time_s"])}
                    for r in csv.DictReader(f)]
        if len(rows) != 6:
            print(f"benchmark: expected 6 rows, got {len(rows)}", file=sys.stderr)
            errors += 1
        errors += validate_all(load_schema(schemas, "benchmark_row.schema.json"), rows, "benchmark")

    print(f"{errors} schema errors")
    return 1 if errors else 0


if __name__ == "__main__":
    sys.exit(main())
