"""Reproduction recipes: one CLI invocation plus an acceptance rule per figure or table.

The manifest lives in ``data/recipes.json``. Each recipe runs a CLI command,
reads its output and applies a named check with the recipe's options.
"""

from __future__ import annotations

import contextlib
import io
import json
import math
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from asymphoton.distribution import SystemId
from asymphoton.entangled import general_amplitudes
from asymphoton.feasibility import frontier_row, frontier_x_of_y, oam_boundary_gap
from asymphoton.oam import OamSuperposition, OamSign, bs_variant_distribution, joint_distribution_oracle, OamSystemConfig
from asymphoton.sweep import sample_parameters

REQUIRED_IDS = (
    "fig3a", "fig3b", "fig3c",
    "fig4a", "fig4b", "fig4c",
    "fig5a", "fig5b",
    "table1", "table2", "table3", "table4",
)

PAIR_BOUND = {SystemId.OAM: None, SystemId.ENTANGLED: 0.5, SystemId.ATTENUATION: 0.25}


@dataclass
class RecipeResult:
    id: str
    title: str
    passed: bool
    detail: str
    seconds: float

    def as_dict(self) -> dict:
        return {"id": self.id, "title": self.title, "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 3)}


def load_manifest(path=None) -> list:
    if path is None:
        text = resources.files("asymphoton").joinpath("data/recipes.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return json.loads(text)["recipes"]


def check_coverage(recipes: list) -> None:
    ids = [r["id"] for r in recipes]
    missing = [i for i in REQUIRED_IDS if i not in ids]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if missing or dupes:
        raise ValueError(f"recipe manifest incomplete: missing {missing}, duplicated {dupes}")


def _csv(text: str) -> np.ndarray:
    return np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1, ndmin=2)


# --- checks ----------------------------------------------------------------------


def _conservation_error(rows: np.ndarray) -> float:
    # with two arms, p12 + p21 + conflict covers every detected pair
    return float(np.max(np.abs(rows[:, 0] + rows[:, 1] + rows[:, 3] + rows[:, 2] - 1.0)))


def check_sweep_bounds(text: str, options: dict):
    rows = _csv(text)
    system = SystemId(options["system"])
    tol = options["tol"]
    if len(rows) != options["samples"]:
        return False, f"expected {options['samples']} rows, got {len(rows)}"
    worst_sum = _conservation_error(rows)
    if worst_sum > tol:
        return False, f"conservation violated by {worst_sum:.3g}"
    if system is SystemId.OAM:
        worst = float(np.max(-oam_boundary_gap(rows[:, 0], rows[:, 1])))
        ok = worst <= tol
        return ok, f"max 2(p12+p21) - 1 - (p12-p21)^2 = {worst:.3g}"
    bound = PAIR_BOUND[system]
    worst = float(max(rows[:, 0].max(), rows[:, 1].max()))
    conflict = float(rows[:, 3].max())
    ok = worst <= bound + tol and conflict <= tol
    return ok, f"max pair probability {worst:.17g} (bound {bound}), max conflict {conflict:.3g}"


def check_frontier_roundtrip(text: str, options: dict):
    rows = _csv(text)
    system = SystemId(options["system"])
    tol = options["tol"]
    if len(rows) != options["rows"]:
        return False, f"expected {options['rows']} rows, got {len(rows)}"
    worst = 0.0
    for x, upper, lower in rows:
        for y in (upper, lower):
            if math.isinf(y):
                continue
            worst = max(worst, abs(frontier_x_of_y(system, float(y)) - x))
    for x, up, lo in options.get("spots", []):
        match = rows[np.isclose(rows[:, 0], x, rtol=0, atol=1e-15)]
        if len(match) == 0:
            got = frontier_row(system, x)
            match = np.array([[x, float(got[0]), float(got[1])]])
        if abs(match[0, 1] - up) > 1e-12 or abs(match[0, 2] - lo) > 1e-12:
            return False, f"at x={x}: got ({match[0, 1]}, {match[0, 2]}), expected ({up}, {lo})"
    return worst <= tol, f"max |x_of_y(y) - x| = {worst:.3g}"


def check_ratio_curve(text: str, options: dict):
    rows = _csv(text)
    if len(rows) != options["rows"]:
        return False, f"expected {options['rows']} rows, got {len(rows)}"
    r = rows[:, 1]
    steps = np.diff(r)
    monotone = bool(np.all(steps > 0)) if options["direction"] == "increasing" else bool(np.all(steps < 0))
    at_zero = r[rows[:, 0] == 0.0]
    ok = monotone and len(at_zero) == 1 and at_zero[0] == 1.0
    return ok, f"strictly {options['direction']}: {monotone}; r(0) = {at_zero.tolist()}"


def _reference_rows(system: SystemId, params: dict) -> np.ndarray:
    """Per-row reference values from a code path independent of the sweep's closed forms."""
    n = len(next(iter(params.values())))
    if system is SystemId.ENTANGLED:
        amps = general_amplitudes(
            params["theta1"], params["theta2"], params["theta_hw1"], params["theta_hw2"],
            params["alpha_x"], params["beta_x"], params["alpha_y"], params["beta_y"],
        )
        p = (np.abs(amps) ** 2).reshape(n, 2, 2)
    else:
        p = np.empty((n, 2, 2))
        for i in range(n):
            if system is SystemId.OAM:
                cfg = OamSystemConfig.build(
                    params["alpha"][i], params["beta"][i], params["a"][i], params["b"][i], params["phi"][i], params["psi"][i]
                )
                p[i] = joint_distribution_oracle(cfg).p
            else:
                cfg = OamSystemConfig.build(1.0, 0.0, params["a"][i], params["b"][i], params["phi"][i], params["psi"][i])
                base = joint_distribution_oracle(cfg).p
                scale = np.array(
                    [
                        [params["d_x1"][i] ** 2 * params["d_y1"][i] ** 2, params["d_x1"][i] ** 2 * params["d_y2"][i] ** 2],
                        [params["d_x2"][i] ** 2 * params["d_y1"][i] ** 2, params["d_x2"][i] ** 2 * params["d_y2"][i] ** 2],
                    ]
                )
                p[i] = base * scale
    total = p.sum(axis=(1, 2))
    return np.column_stack([p[:, 0, 1], p[:, 1, 0], 1.0 - total, p[:, 0, 0] + p[:, 1, 1]])


def check_sweep_matches_reference(text: str, options: dict):
    rows = _csv(text)
    system = SystemId(options["system"])
    blocks = sample_parameters(system, options["samples"], options["seed"])
    ref = np.vstack([_reference_rows(system, b) for b in blocks])
    if len(rows) != len(ref):
        return False, f"expected {len(ref)} rows, got {len(rows)}"
    worst = float(np.max(np.abs(rows[:, :4] - ref)))
    return worst <= options["tol"], f"max |sweep - reference| = {worst:.3g}"


def check_bs_corners(text: str, options: dict):
    data = json.loads(text)
    if abs(data["p12"] - 1.0) > 1e-12 or data["p21"] != 0.0:
        return False, f"corner a=(0,1), b=(1,0) gave p12={data['p12']}, p21={data['p21']}"
    states = conflict_free_bs_states(options["grid"])
    tol = options["tol"]
    corners = np.array([[0.0, 1.0], [1.0, 0.0]])
    off = [s for s in states if np.min(np.max(np.abs(corners - s), axis=1)) > tol]
    ok = len(states) > 0 and not off
    return ok, f"{len(states)} conflict-free grid states, {len(off)} away from the corners"


def conflict_free_bs_states(grid: int, conflict_tol: float = 1e-12) -> np.ndarray:
    """(p12, p21) of every conflict-free point of an angle grid for the beam-splitter variant."""
    angles = np.linspace(0.0, 2.0 * math.pi, grid)
    found = []
    for u in angles:
        a = (math.cos(u), math.sin(u))
        phi = OamSuperposition(a, (0.0, 0.0), OamSign.POSITIVE)
        for v in angles:
            b = (math.cos(v), math.sin(v))
            # loop stays cheap: conflict test is closed form before building objects
            if (a[0] * b[0]) ** 2 / 4 + (a[1] * b[1]) ** 2 / 4 > conflict_tol:
                continue
            dist = bs_variant_distribution(phi, OamSuperposition(b, (0.0, 0.0), OamSign.NEGATIVE))
            if dist.conflict <= conflict_tol:
                found.append((dist.p12, dist.p21))
    return np.array(found).reshape(-1, 2)


CHECKS = {
    "sweep_bounds": check_sweep_bounds,
    "frontier_roundtrip": check_frontier_roundtrip,
    "ratio_curve": check_ratio_curve,
    "sweep_matches_reference": check_sweep_matches_reference,
    "bs_corners": check_bs_corners,
}


# --- runner ----------------------------------------------------------------------


def _run_cli(argv: list, external: bool) -> tuple:
    if external:
        exe = shutil.which("asymphoton")
        if exe is None:
            raise EnvironmentError("the asymphoton console script is not on PATH")
        proc = subprocess.run([exe, *argv], capture_output=True, text=True)
        return proc.returncode, proc.stdout
    from asymphoton.cli import main

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        try:
            code = main(argv)
        except SystemExit as exc:
            code = exc.code
    return code, buf.getvalue()


def run_recipe(recipe: dict, workdir: Path, external: bool = False) -> RecipeResult:
    start = time.perf_counter()
    argv = [a.replace("{workdir}", str(workdir)) for a in recipe["argv"]]
    code, stdout = _run_cli(argv, external)
    if code != 0:
        return RecipeResult(recipe["id"], recipe["title"], False, f"command exited {code}", time.perf_counter() - start)
    output = recipe["output"]
    text = stdout if output == "stdout" else Path(output.replace("{workdir}", str(workdir))).read_text(encoding="utf-8")
    passed, detail = CHECKS[recipe["check"]](text, recipe.get("options", {}))
    return RecipeResult(recipe["id"], recipe["title"], bool(passed), detail, time.perf_counter() - start)


def run_all_recipes(manifest=None, workdir=None, external: bool = False, only=None) -> list:
    recipes = load_manifest(manifest)
    check_coverage(recipes)
    if only:
        recipes = [r for r in recipes if r["id"] in set(only)]
    with contextlib.ExitStack() as stack:
        if workdir is None:
            workdir = stack.enter_context(tempfile.TemporaryDirectory(prefix="asymphoton-recipes-"))
        workdir = Path(workdir)
        workdir.mkdir(parents=True, exist_ok=True)
        return [run_recipe(r, workdir, external) for r in recipes]


def format_summary(results: list) -> str:
    width = max([len("recipe")] + [len(r.id) for r in results])
    lines = [f"{'recipe':<{width}}  result  seconds  detail"]
    for r in results:
        lines.append(f"{r.id:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.seconds:7.2f}  {r.detail}")
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} recipes passed")
    return "\n".join(lines) + "\n"
