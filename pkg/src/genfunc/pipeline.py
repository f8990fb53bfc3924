"""Stage functions behind the CLI: build a net, run a check, persist the report.

Every stage writes one JSON document under ``<out>/reports`` holding the
effective :class:`RunConfig`, its digest, the mollifier digest, the outcome
and the full report.  Documents carry no timestamps, so identical inputs give
identical bytes whatever the worker count.
"""

from __future__ import annotations

import json
import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

from genfunc.embed.checks import check_G1
from genfunc.embed.embeddings import EmbeddingKind, EmbeddingResult, embed
from genfunc.errors import ConfigError, Unclassifiable
from genfunc.fourier.exchange import (
    check_exchange,
    check_lemma_bound,
    check_regularity_theorem,
    is_flat,
)
from genfunc.fourier.global_regularity import check_small_exchange, classify_global, rough_profile
from genfunc.fourier.transform import ft_net, plancherel_defects, roundtrip_errors
from genfunc.grid.growth import GrowthProfile, profile_space
from genfunc.microlocal.cones import CutoffFamily, default_cones
from genfunc.microlocal.wavefront import check_projection, radius_violations, wavefront
from genfunc.mollifier.build import Mollifier, build_rho
from genfunc.mollifier.plateau import plateau_cutoff
from genfunc.models.distribution import DistributionSpec
from genfunc.models.run_config import RunConfig
from genfunc.scales.axioms import check_all
from genfunc.scales.classify import classify_profile, in_family
from genfunc.scales.families import RegularScaleFamily
from genfunc.storage.json_store import JsonStore, jsonable
from genfunc.storage.repository import (
    MollifierRepository,
    NetRepository,
    ReportRepository,
    write_profile_csv,
    write_rows_csv,
)
from genfunc.utils.logging import log, timed

ROUNDTRIP_TOL = 1e-9
PLANCHEREL_TOL = 1e-9


class Outcome(str, Enum):
    """Result of a stage, mapped to the process exit code."""
    PASS = "pass"
    FAIL = "fail"
    UNCLASSIFIABLE = "unclassifiable"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 2, "unclassifiable": 3}[self.value]

    @classmethod
    def of(cls, passed: bool) -> "Outcome":
        return cls.PASS if passed else cls.FAIL


@dataclass
class StageResult:
    kind: str
    outcome: Outcome
    path: Path
    summary: dict[str, Any] = field(default_factory=dict)
    extras: list[Path] = field(default_factory=list)


def slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.+-]+", "_", text).strip("_")


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def load_config(path: Path | None = None, **overrides) -> RunConfig:
    """Defaults, then the JSON file, then non-None *overrides* (CLI flags)."""
    data: dict[str, Any] = {}
    if path is not None:
        if not path.exists():
            raise ConfigError(f"config file {path} does not exist")
        data = json.loads(path.read_text(encoding="utf-8"))
    data.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.model_validate(data)


def write_template(path: Path, planar: bool = False) -> Path:
    """A complete-defaults config file for ``init``."""
    config = RunConfig.planar() if planar else RunConfig()
    JsonStore(path).write(config.model_dump(mode="json"))
    return path


# ---------------------------------------------------------------------------
# Run context
# ---------------------------------------------------------------------------

class RunContext:
    """One run: configuration, worker count, output layout and the shared mollifier."""

    def __init__(self, config: RunConfig, jobs: int = 1, emit_plots: bool = False) -> None:
        self.config = config
        self.jobs = jobs
        self.emit_plots = emit_plots
        self.out = Path(config.output_dir)
        self.reports = ReportRepository(self.out / "reports")
        self.nets = NetRepository(self.out / "nets")
        self._mollifier: Mollifier | None = None

    @property
    def box(self):
        return self.config.build_box()

    @property
    def ladder(self) -> tuple[float, ...]:
        return self.config.ladder_values()

    @property
    def tol(self):
        return self.config.tolerances

    def family(self, name: str | None = None) -> RegularScaleFamily:
        try:
            return RegularScaleFamily.from_cli(name or self.config.family)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def mollifier(self) -> Mollifier:
        if self._mollifier is None:
            mc = self.config.mollifier
            self._mollifier = build_rho(mc.reference_box(), mc.r1, mc.r2, mc.M)
            MollifierRepository(self.out / "mollifier").save(self._mollifier)
        return self._mollifier

    def embed(self, spec: DistributionSpec, kind: EmbeddingKind) -> EmbeddingResult:
        with timed(f"embedding {spec.name} as {kind.value}", logging.INFO):
            result = embed(spec, kind, self.mollifier(), self.ladder, self.box, self.jobs)
        target = self.nets.save(slug(result.label), result.net, {"source": spec.name})
        JsonStore(target / "embedding.json").write({
            "embedding": result.which.value,
            "label": result.label,
            "spec": spec.model_dump(mode="json"),
            "mollifier_digest": self.mollifier().digest(),
        })
        return result

    def profile_csv(self, name: str, profile: GrowthProfile, title: str) -> list[Path]:
        path = write_profile_csv(self.out / "profiles" / f"{slug(name)}.csv", profile)
        paths = [path]
        if self.emit_plots:
            from genfunc.plots import profile_script

            paths.append(profile_script(path, title))
        return paths

    def write(
        self,
        kind: str,
        report: Any,
        outcome: Outcome,
        summary: dict[str, Any] | None = None,
        extras: list[Path] | None = None,
    ) -> StageResult:
        JsonStore(self.out / "config.json").write(self.config.model_dump(mode="json"))
        document = {
            "kind": kind,
            "outcome": outcome.value,
            "passed": outcome is Outcome.PASS,
            "config": self.config.model_dump(mode="json"),
            "config_digest": self.config.digest(),
            "mollifier_digest": self.mollifier().digest(),
            "summary": jsonable(summary or {}),
            "report": jsonable(report),
        }
        path = self.reports.save(kind, document)
        log.info("Stage %s on config %s: %s", kind, self.config.digest(), outcome.value)
        return StageResult(kind, outcome, path, summary or {}, extras or [])


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------

def run_scales(ctx: RunContext, family_name: str, n_max: int = 50, k_max: int = 5) -> StageResult:
    family = ctx.family(family_name)
    reports = check_all(
        family,
        n_max=n_max,
        k_max=k_max,
        tol=ctx.tol.tol,
        slope_step=ctx.tol.slope_step,
        a_max=ctx.tol.a_max,
        jobs=ctx.jobs,
    )
    passed = all(r.passed for r in reports)
    summary = {r.axiom.value: r.passed for r in reports}
    return ctx.write(f"scales_{slug(family.label)}", reports, Outcome.of(passed), summary)


def run_embed(
    ctx: RunContext, spec: DistributionSpec, kind: EmbeddingKind
) -> tuple[StageResult, EmbeddingResult]:
    result = ctx.embed(spec, kind)
    sups = result.net.sup_norms()
    summary = {"label": result.label, "frames": len(result.net.frames), "sup_norms": sups}
    stage = ctx.write(f"embed_{slug(result.label)}", summary, Outcome.PASS, summary)
    return stage, result


def run_classify(
    ctx: RunContext, result: EmbeddingResult, family_name: str | None = None
) -> StageResult:
    family = ctx.family(family_name)
    tol = ctx.tol
    kind = f"classify_{slug(result.label)}"
    profile = profile_space(
        result.net, L=ctx.config.l_max, floor=tol.floor, window=ctx.config.fit_window,
        jobs=ctx.jobs,
    )
    extras = ctx.profile_csv(kind, profile, f"space profile of {result.label}")
    try:
        classification = classify_profile(
            profile, tol.tol, tol.b_max, tol.a_grid(), tol.residual_limit
        )
    except Unclassifiable as exc:
        log.warning("%s is unclassifiable: %s", result.label, exc)
        report = {"profile": profile, "error": str(exc)}
        return ctx.write(kind, report, Outcome.UNCLASSIFIABLE, {"error": str(exc)}, extras)

    report: dict[str, Any] = {"profile": profile, "classification": classification}
    summary: dict[str, Any] = {
        "family": classification.label,
        "slope": classification.fit.slope,
        "margin": classification.margin,
        "requested": family.label,
    }
    passed = in_family(profile, family, tol.tol, tol.b_max, tol.residual_limit)
    if result.which in (EmbeddingKind.IOTA, EmbeddingKind.SIGMA):
        g1 = check_G1(result, b_max=tol.g1_b_max, tol=tol.tol, profile=profile)
        report["g1"] = g1
        summary["b_hat"] = g1.b_hat
        summary["g1_passed"] = g1.passed
    return ctx.write(kind, report, Outcome.of(passed), summary, extras)


def run_fourier(ctx: RunContext, spec: DistributionSpec, kind: EmbeddingKind) -> StageResult:
    result = ctx.embed(spec, kind)
    tol = ctx.tol
    freq = ft_net(result.net, tol.boundary_tol, ctx.jobs)
    ctx.nets.save(slug(f"ft_{result.label}"), freq, {"source": spec.name})
    roundtrip = roundtrip_errors(result.net, tol.boundary_tol, ctx.jobs)
    plancherel = plancherel_defects(result.net, tol.boundary_tol, ctx.jobs)
    rough = rough_profile(freq, ctx.config.q_max, tol.floor, ctx.config.fit_window, ctx.jobs)
    name = f"fourier_{slug(result.label)}"
    extras = ctx.profile_csv(name, rough, f"rough profile of F {result.label}")
    passed = float(roundtrip.max()) <= ROUNDTRIP_TOL and float(plancherel.max()) <= PLANCHEREL_TOL
    summary = {
        "label": result.label,
        "roundtrip_max": float(roundtrip.max()),
        "plancherel_max": float(plancherel.max()),
    }
    report = {"roundtrip": roundtrip, "plancherel": plancherel, "rough_profile": rough}
    return ctx.write(name, report, Outcome.of(passed), summary, extras)


def run_exchange(ctx: RunContext, spec: DistributionSpec, kind: EmbeddingKind) -> StageResult:
    result = ctx.embed(spec, kind)
    tol = ctx.tol
    net = result.net
    exchange = check_exchange(
        net, Q=min(ctx.config.q_max, 4), L=2, tol=tol.tol, floor=tol.floor,
        boundary_tol=tol.boundary_tol, window=ctx.config.fit_window, jobs=ctx.jobs,
    )
    lemma = check_lemma_bound(
        net, Q=min(ctx.config.q_max, 3), L=2, factor=tol.envelope_factor, floor=tol.floor,
        boundary_tol=tol.boundary_tol, jobs=ctx.jobs,
    )
    regularity = None
    if is_flat(exchange.input_profile, tol.tol):
        regularity = check_regularity_theorem(
            net, Q=min(ctx.config.q_max, 4), L=2, tol=tol.tol, floor=tol.floor,
            boundary_tol=tol.boundary_tol, jobs=ctx.jobs,
        )
    passed = exchange.passed and lemma.passed and regularity is not False
    summary = {
        "label": result.label,
        "input_signature": exchange.input_signature.value,
        "output_signature": exchange.output_signature.value,
        "lemma_passed": lemma.passed,
        "regularity_preserved": regularity,
    }
    report = {"exchange": exchange, "lemma": lemma, "regularity_preserved": regularity}
    return ctx.write(f"exchange_{slug(result.label)}", report, Outcome.of(passed), summary)


def global_cutoff(ctx: RunContext):
    """κ ≡ 1 on the middle half of the box, 0 beyond three quarters of it."""
    box = ctx.box
    half = (box.hi[0] - box.lo[0]) / 2
    return plateau_cutoff(box, half / 2, 3 * half / 4)


def run_global(
    ctx: RunContext,
    spec: DistributionSpec,
    family_name: str | None = None,
    kind: EmbeddingKind = EmbeddingKind.IOTA,
) -> StageResult:
    family = ctx.family(family_name)
    result = ctx.embed(spec, kind)
    tol = ctx.tol
    name = f"global_{slug(result.label)}"
    try:
        report = classify_global(
            result.net, global_cutoff(ctx), Q=ctx.config.q_max, L=ctx.config.l_max,
            tol=tol.tol, b_max=tol.b_max, a_grid=tol.a_grid(),
            residual_limit=tol.residual_limit, floor=tol.floor,
            boundary_tol=tol.boundary_tol, window=ctx.config.fit_window, jobs=ctx.jobs,
        )
    except Unclassifiable as exc:
        log.warning("%s is unclassifiable: %s", result.label, exc)
        return ctx.write(name, {"error": str(exc)}, Outcome.UNCLASSIFIABLE, {"error": str(exc)})

    extras = ctx.profile_csv(f"{name}_space", report.space_profile, f"space {result.label}")
    extras += ctx.profile_csv(f"{name}_rough", report.fourier_profile, f"rough {result.label}")
    freq = ft_net(result.net.times(global_cutoff(ctx)), tol.boundary_tol, ctx.jobs)
    small = check_small_exchange(
        freq, L=min(ctx.config.l_max, 3), Q=ctx.config.q_max, tol=tol.tol, b_max=tol.b_max,
        residual_limit=tol.residual_limit, floor=tol.floor,
        boundary_tol=math.inf, jobs=ctx.jobs,
    )
    inside = all(
        in_family(p, family, tol.tol, tol.b_max, tol.residual_limit)
        for p in (report.space_profile, report.fourier_profile)
    )
    summary = {
        "label": result.label,
        "space": report.space.label,
        "fourier": report.fourier.label,
        "agree": report.agree,
        "requested": family.label,
        "small_exchange": small.passed,
    }
    document = {"global": report, "small_exchange": small}
    return ctx.write(name, document, Outcome.of(report.agree and inside), summary, extras)


def run_wavefront(
    ctx: RunContext,
    spec: DistributionSpec,
    family_name: str | None = None,
    kind: EmbeddingKind = EmbeddingKind.IOTA,
    full_scan: bool | None = None,
) -> StageResult:
    family = ctx.family(family_name)
    result = ctx.embed(spec, kind)
    tol = ctx.tol
    mc = ctx.config.microlocal
    box = ctx.box
    cutoffs = CutoffFamily.regular(box.dim, mc.center_spacing, mc.center_extent, mc.r0, mc.radii)
    cones = default_cones(box, mc.cones, mc.exclusion_factor)
    with timed(f"{family.label} wavefront of {result.label}", logging.INFO):
        report = wavefront(
            result.net, family, cutoffs, cones, Q=mc.Q, L=ctx.config.l_max,
            tol=tol.tol, b_max=tol.b_max, residual_limit=tol.residual_limit, floor=tol.floor,
            window=ctx.config.fit_window, boundary_tol=tol.boundary_tol,
            full_scan=mc.full_scan if full_scan is None else full_scan, jobs=ctx.jobs,
        )
    name = f"wavefront_{slug(family.label)}_{slug(result.label)}"
    extras: list[Path] = []
    if report.entries:
        csv_path = write_rows_csv(ctx.out / "profiles" / f"{name}.csv", report.rows())
        extras.append(csv_path)
        if ctx.emit_plots:
            from genfunc.plots import wavefront_script

            extras.append(wavefront_script(csv_path, box.dim, f"{family.label} wavefront"))
    projection = check_projection(report)
    violations = radius_violations(report, tol.tol)
    summary = {
        "label": result.label,
        "family": family.label,
        "wavefront": [[list(p.center), p.cone] for p in report.wavefront],
        "singsupp": [list(c) for c in report.singsupp_estimate],
        "projection": projection,
        "radius_violations": len(violations),
    }
    return ctx.write(name, report, Outcome.of(projection), summary, extras)


def aggregate(ctx: RunContext) -> tuple[Outcome, list[dict[str, Any]]]:
    """Every stored report's kind and outcome; failures dominate unclassifiable ones."""
    rows = [
        {"kind": kind, "outcome": doc.get("outcome", "fail")}
        for kind, doc in ctx.reports.load_all().items()
    ]
    outcomes = {r["outcome"] for r in rows}
    if "fail" in outcomes:
        return Outcome.FAIL, rows
    if "unclassifiable" in outcomes:
        return Outcome.UNCLASSIFIABLE, rows
    return Outcome.PASS, rows
