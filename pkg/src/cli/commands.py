"""
Command implementations behind main.py. Each returns a process exit code.
"""

import logging
import math
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.adversary import (
    ANNOUNCER_NAMES,
    FORWARD_SUITE,
    IDEAL_DETECTOR,
    InterceptPolicy,
    attack_intercept_resend,
    build_announcer,
    build_attack,
)
from src.analysis import (
    ChannelStats,
    build_rho_abe,
    compare_protocols_bc,
    estimate_stats,
    eve_information,
    exact_stats,
    key_rate,
    pa_rate,
    sweep_random_unitaries,
)
from src.errors import InsufficientDataError, NotEnumerableError, ProtocolAbort, ReconciliationError
from src.postproc import distill, inject_errors
from src.protocol import MeasurementLocus, ProtocolVariant, Transcript, read_transcript, run_session, write_transcript
from src.utils import ensure_dir
from .config import RunConfig
from .reports import summary_frame, summary_row, write_csv, write_final_key, write_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ABORT = 2
EXIT_VERIFY_FAILED = 3

RATE_SLACK = 1e-9
SIGMA_BOUND = 4.0


def _ledger(transcript: Transcript) -> Dict[str, int]:
    return {
        "rounds": len(transcript.rounds),
        "raw_key_length": len(transcript.raw_key_rounds),
        "lost_rounds": transcript.lost_rounds,
        "double_clicks": transcript.double_clicks,
    }


def _write_reports(run: RunConfig, name: str, payload: Dict, rows: List[Dict]):
    if "json" in run.formats:
        write_json(run.output_dir / f"{name}.json", payload)
    if "csv" in run.formats:
        write_csv(run.output_dir / f"{name}.csv", summary_frame(rows))


def _postprocess(run: RunConfig, transcript: Transcript, stats: ChannelStats) -> Tuple[int, Dict]:
    """Reconcile and hash the raw keys; returns (exit code, accounting)."""
    seed = run.session.seed
    rate = float(run.postproc["inject_error_rate"])
    bob_key = transcript.bob_raw_key
    if rate > 0.0:
        bob_key = inject_errors(bob_key, rate, np.random.default_rng([seed, 1]))
    try:
        result = distill(
            transcript.alice_raw_key, bob_key, stats.xi, max(stats.e, rate), seed,
            margin=int(run.postproc["margin"]), passes=int(run.postproc["passes"]))
    except ProtocolAbort as e:
        print(f"[ABORT] Post-processing: {e.reason}")
        return EXIT_ABORT, {"abort": True, "reason": e.reason,
                            **(e.report.to_dict() if e.report is not None else {})}
    except ReconciliationError as e:
        print(f"[ABORT] Reconciliation failed: {e}")
        return EXIT_ABORT, {"abort": True, "reason": "reconciliation_failed",
                            "reconciliation": e.result.to_dict() if e.result is not None else None}

    accounting = {"abort": False, "reason": "", **result.to_dict()}
    write_final_key(run.output_dir, result.alice, accounting)
    print(f"[OK] Final key: {result.alice.length} bits ({result.reconciliation.leaked_bits} bits leaked in EC)")
    return EXIT_OK, accounting


def cmd_run(run: RunConfig) -> int:
    """
    One session end to end: transcript, statistics, key rate, post-processing.

    Returns:
        0 on a completed run, 2 on protocol abort
    """
    ensure_dir(run.output_dir)
    transcript = run_session(run.session, run.build_attack(), progress=run.progress)
    write_transcript(transcript, run.output_dir / "transcript.jsonl")

    payload = {
        "seed": run.session.seed,
        "config": run.to_dict(),
        "attack": transcript.attack_name,
        "ledger": _ledger(transcript),
        "postproc": None,
    }
    try:
        stats = estimate_stats(transcript)
    except InsufficientDataError as e:
        print(f"[ABORT] {e}")
        payload.update({"abort": True, "reason": str(e)})
        if "json" in run.formats:
            write_json(run.output_dir / "stats.json", payload)
        return EXIT_ABORT

    report = key_rate(stats.xi, stats.e)
    payload.update({"stats": stats.to_dict(), "key_rate": report.to_dict()})
    code = EXIT_OK
    if report.abort:
        print(f"[ABORT] xi={stats.xi:.4f} e={stats.e:.4f} r={report.r:.4f} ({report.reason})")
        code = EXIT_ABORT
    else:
        print(f"[OK] xi={stats.xi:.4f} e={stats.e:.4f} r={report.r:.4f}")
        if run.postproc["enabled"]:
            code, payload["postproc"] = _postprocess(run, transcript, stats)

    payload["abort"] = code == EXIT_ABORT
    _write_reports(run, "stats", payload, [summary_row(transcript, stats, report)])
    return code


def cmd_verify_mdi(run: RunConfig, trials: Optional[int] = None, tol: Optional[float] = None,
                   negative_control: bool = False, ancilla_dims: Optional[Sequence[int]] = None) -> int:
    """
    Randomized basis-independence and PA-rate checks over Haar unitaries.

    Returns:
        0 when every trial passes (or, with the negative control, when every
        trial fails as expected), 1 for trials < 1, 3 otherwise
    """
    trials = int(run.verify["trials"] if trials is None else trials)
    tol = float(run.verify["tol"] if tol is None else tol)
    dims = [int(d) for d in (ancilla_dims or run.verify["ancilla_dims"])]
    if trials < 1:
        print(f"[ERROR] --trials must be at least 1, got {trials}")
        return EXIT_USAGE
    seed = run.session.seed
    ensure_dir(run.output_dir)

    reports = list(tqdm(
        sweep_random_unitaries(trials, dims, seed, tol, negative_control),
        total=trials * len(dims), desc="verify-mdi", disable=not run.progress))

    rates = [r.r_pa for r in reports]
    rate_ok = [-RATE_SLACK <= x <= 1.0 + RATE_SLACK for x in rates]
    identity_rate = pa_rate(build_rho_abe(np.eye(2), 1))

    if negative_control:
        offending = [r for r in reports if r.passed]
        passed = not offending
    else:
        offending = [r for r, ok in zip(reports, rate_ok) if not (r.passed and ok)]
        passed = not offending and abs(identity_rate - key_rate(1.0, 0.0).r) <= RATE_SLACK

    payload = {
        "seed": seed,
        "trials": trials,
        "ancilla_dims": dims,
        "tol": tol,
        "negative_control": negative_control,
        "checks": len(reports),
        "max_deviation": max(r.max_deviation for r in reports),
        "min_deviation": min(r.max_deviation for r in reports),
        "r_pa_min": min(rates),
        "r_pa_max": max(rates),
        "r_pa_identity": identity_rate,
        "passed": passed,
        "offending": [r.to_dict() for r in offending],
    }
    write_json(run.output_dir / "verify_mdi.json", payload)

    if passed:
        what = "negative control failed every trial as expected" if negative_control else "all trials passed"
        print(f"[OK] verify-mdi: {what} ({len(reports)} checks)")
        return EXIT_OK
    for r in offending[:5]:
        print(f"[FAIL] seed={list(r.seed)} ancilla_dim={r.ancilla_dim} deviation={r.max_deviation:.3e} "
              f"r_pa={r.r_pa:.6f}")
    print(f"[FAIL] verify-mdi: {len(offending)} offending checks")
    return EXIT_VERIFY_FAILED


def _xi_variance(stats: ChannelStats) -> float:
    total = 0.0
    for f, label in ((stats.f0, "0"), (stats.f1, "1"), (stats.fplus, "+"), (stats.fminus, "-")):
        total += f * (1.0 - f) / stats.n_check_used[label]
    return total / 4.0


def _paired_row(variant: ProtocolVariant, name: str, params: Dict, run: RunConfig, n_rounds: int) -> Dict:
    base = replace(run.session, n_rounds=n_rounds, variant=variant,
                   locus=MeasurementLocus.BOB_MEASURES, detector=IDEAL_DETECTOR)
    bob = estimate_stats(run_session(base, build_attack(name, params), progress=run.progress))
    eve_config = replace(base, locus=MeasurementLocus.EVE_MEASURES)
    eve = estimate_stats(run_session(eve_config, build_attack(name, params), progress=run.progress))
    strategy = build_attack(name, params)
    exact = exact_stats(strategy, variant)

    sigma_xi = math.sqrt(_xi_variance(bob) + _xi_variance(eve))
    sigma_e = math.sqrt(bob.e * (1 - bob.e) / bob.n_disclosed + eve.e * (1 - eve.e) / eve.n_disclosed)
    try:
        info = eve_information(strategy, variant)
    except NotEnumerableError as e:
        logger.warning(f"eve_information skipped for {strategy.name}: {e}")
        info = None

    return {
        "variant": variant.value,
        "attack": strategy.name,
        "n": n_rounds,
        "xi_bob": bob.xi,
        "xi_eve": eve.xi,
        "e_bob": bob.e,
        "e_eve": eve.e,
        "sigma_xi": sigma_xi,
        "sigma_e": sigma_e,
        "within_4sigma": bool(abs(bob.xi - eve.xi) <= SIGMA_BOUND * sigma_xi + RATE_SLACK
                              and abs(bob.e - eve.e) <= SIGMA_BOUND * sigma_e + RATE_SLACK),
        "xi_exact": exact.xi,
        "e_exact": exact.e,
        "eve_information": info,
        "seed": run.session.seed,
    }


def cmd_attack_suite(run: RunConfig) -> int:
    """
    Paired BobMeasures / EveMeasures runs of the forward-attack suite, the
    information Eve's announcement carries, and the protocol equivalence.

    Returns:
        0 when every exact check holds, 3 otherwise
    """
    ensure_dir(run.output_dir)
    n_rounds = int(run.suite["n_rounds"])
    variants = [ProtocolVariant(v) for v in run.suite["variants"]]

    paired = []
    for variant in variants:
        for name, params in FORWARD_SUITE:
            row = _paired_row(variant, name, params, run, n_rounds)
            paired.append(row)
            print(f"[{'OK' if row['within_4sigma'] else 'WARN'}] {variant.value:8s} {row['attack']:40s} "
                  f"xi {row['xi_bob']:.4f}/{row['xi_eve']:.4f}  e {row['e_bob']:.4f}/{row['e_eve']:.4f}")

    announcers = []
    for variant in variants:
        for name in ANNOUNCER_NAMES:
            strategy = build_announcer(name)
            announcers.append({"variant": variant.value, "announcer": strategy.name,
                               "eve_information": eve_information(strategy, variant),
                               "leaked_bob_bit": eve_information(strategy, variant, leak_bob_bit=True)})

    equivalence = [
        compare_protocols_bc(1),
        compare_protocols_bc(2),
        compare_protocols_bc(1, attack_intercept_resend(InterceptPolicy.FIXED_Z)),
        compare_protocols_bc(1, attack_intercept_resend(InterceptPolicy.RANDOM_ZX)),
    ]

    leaks = [a for a in announcers if a["eve_information"] != 0.0]
    passed = not leaks and all(r.passed for r in equivalence)
    payload = {
        "seed": run.session.seed,
        "n_rounds": n_rounds,
        "paired": paired,
        "announcers": announcers,
        "equivalence": [r.to_dict() for r in equivalence],
        "passed": passed,
    }
    if "json" in run.formats:
        write_json(run.output_dir / "attack_suite.json", payload)
    if "csv" in run.formats:
        write_csv(run.output_dir / "attack_suite.csv", pd.DataFrame(paired))

    if passed:
        print("[OK] attack-suite: announcements carry no key information; four-op and BB84 + OTP agree")
        return EXIT_OK
    print(f"[FAIL] attack-suite: {len(leaks)} leaking announcers, "
          f"{sum(not r.passed for r in equivalence)} equivalence failures")
    return EXIT_VERIFY_FAILED


def cmd_analyze(run: RunConfig, transcript_path: Path) -> int:
    """
    Statistics and key rate of a saved transcript.

    Returns:
        0 when the rate is positive, 2 on abort or insufficient data
    """
    transcript = read_transcript(transcript_path)
    ensure_dir(run.output_dir)
    payload = {
        "seed": transcript.config.seed,
        "config": transcript.config.to_dict(),
        "attack": transcript.attack_name,
        "ledger": _ledger(transcript),
    }
    try:
        stats = estimate_stats(transcript)
    except InsufficientDataError as e:
        print(f"[ABORT] {e}")
        payload.update({"abort": True, "reason": str(e)})
        write_json(run.output_dir / "analysis.json", payload)
        return EXIT_ABORT

    report = key_rate(stats.xi, stats.e)
    payload.update({"stats": stats.to_dict(), "key_rate": report.to_dict(), "abort": report.abort})
    _write_reports(run, "analysis", payload, [summary_row(transcript, stats, report)])
    status = "ABORT" if report.abort else "OK"
    print(f"[{status}] {transcript_path}: xi={stats.xi:.4f} e={stats.e:.4f} r={report.r:.4f}")
    return EXIT_ABORT if report.abort else EXIT_OK
