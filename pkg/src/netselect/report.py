"""CSV/JSON serialisation of simulation reports."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

from .simulator import SimulationReport

RUN_COLUMNS = ("traffic_class", "variant", "replication", "abnormality_events",
               "abnormality_rate", "handoff_count", "handoff_rate")
AGGREGATE_COLUMNS = ("traffic_class", "variant", "replications", "decision_points",
                     "mean_abnormality_rate", "std_abnormality_rate",
                     "mean_handoff_rate", "std_handoff_rate")
FORMATS = ("csv", "json")


class EmitError(OSError):
    pass


@dataclass(frozen=True)
class RunManifest:
    out_dir: str
    formats: Tuple[str, ...] = FORMATS
    config_path: str = ""
    verbosity: int = 0

    def __post_init__(self) -> None:
        fmts = tuple(f.strip().lower() for f in self.formats if f.strip())
        if not fmts:
            raise ValueError("at least one output format is required")
        bad = [f for f in fmts if f not in FORMATS]
        if bad:
            raise ValueError(f"unknown output format {bad}; choose from {FORMATS}")
        object.__setattr__(self, "formats", fmts)


def num(x: float) -> str:
    """12 significant digits."""
    return f"{x:.12g}"


def _round(x: float) -> Any:
    return float(num(x))


def runs_csv(reports: Sequence[SimulationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RUN_COLUMNS)
    for rep in reports:
        for v in rep.config.variants:
            for r in rep.replications:
                m = r.metrics[v]
                w.writerow([rep.config.traffic_class, v.value, r.replication,
                            m.abnormality_events, num(m.abnormality_rate),
                            m.handoff_count, num(m.handoff_rate)])
    return buf.getvalue()


def aggregate_csv(reports: Sequence[SimulationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(AGGREGATE_COLUMNS)
    for rep in reports:
        for v in rep.config.variants:
            a = rep.aggregates[v]
            w.writerow([rep.config.traffic_class, v.value, len(rep.replications),
                        rep.config.decision_points,
                        num(a.mean_abnormality_rate), num(a.std_abnormality_rate),
                        num(a.mean_handoff_rate), num(a.std_handoff_rate)])
    return buf.getvalue()


def report_to_dict(rep: SimulationReport) -> Dict[str, Any]:
    cfg = rep.config
    variants = [v.value for v in cfg.variants]
    return {
        "traffic_class": cfg.traffic_class,
        "seed": cfg.seed,
        "decision_points": cfg.decision_points,
        "replications": cfg.replications,
        "variants": variants,
        "aggregates": {
            v.value: {k: _round(x) for k, x in vars(rep.aggregates[v]).items()}
            for v in cfg.variants
        },
        "runs": [
            {
                "replication": r.replication,
                "metrics": {
                    v.value: {
                        "abnormality_events": r.metrics[v].abnormality_events,
                        "abnormality_rate": _round(r.metrics[v].abnormality_rate),
                        "handoff_count": r.metrics[v].handoff_count,
                        "handoff_rate": _round(r.metrics[v].handoff_rate),
                        "selections": list(r.metrics[v].selections),
                    }
                    for v in cfg.variants
                },
                "trace": [
                    {
                        "point": p.index,
                        "snapshots": {
                            s.network_id: {k: _round(getattr(s, k))
                                           for k in ("cb", "s", "ab", "d", "j", "l")}
                            for s in p.snapshots
                        },
                        "variants": {
                            v.value: {
                                "ranking": list(st.ranking),
                                "closeness": {n: _round(c) for n, c in st.closeness.items()},
                                "selected": st.selected,
                                "handoff": st.handoff,
                                "abnormal": st.abnormal,
                            }
                            for v, st in p.steps.items()
                        },
                    }
                    for p in r.trace
                ],
            }
            for r in rep.replications
        ],
    }


def report_json(reports: Sequence[SimulationReport]) -> str:
    doc = {"traffic_classes": [report_to_dict(r) for r in reports]}
    # no indent: keeps the C encoder, which matters for full traces
    return json.dumps(doc, separators=(",", ":")) + "\n"


def emit_report(reports: Sequence[SimulationReport], manifest: RunManifest) -> List[str]:
    """Write ``runs.csv``/``aggregate.csv`` and/or ``report.json`` to ``manifest.out_dir``.

    Files are staged under temporary names and renamed at the end; on any
    failure the staged and already-renamed files are removed.

    Returns:
        Paths written, in order.

    Raises:
        EmitError: the directory cannot be created or a file cannot be written.
    """
    payload: List[Tuple[str, str]] = []
    if "csv" in manifest.formats:
        payload += [("runs.csv", runs_csv(reports)), ("aggregate.csv", aggregate_csv(reports))]
    if "json" in manifest.formats:
        payload.append(("report.json", report_json(reports)))

    staged: List[Tuple[str, str]] = []
    done: List[str] = []
    try:
        os.makedirs(manifest.out_dir, exist_ok=True)
        for name, text in payload:
            final = os.path.join(manifest.out_dir, name)
            tmp = final + ".part"
            staged.append((tmp, final))
            with open(tmp, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        for tmp, final in staged:
            os.replace(tmp, final)
            done.append(final)
    except OSError as exc:
        for path in [t for t, _ in staged] + done:
            try:
                os.remove(path)
            except OSError:
                pass
        raise EmitError(f"could not write report to {manifest.out_dir}: {exc}") from exc
    return done
