"""Check the shipped Havex fixture against the sweep expectations.

For each effort criterion and each strategy, run the seeded sweep and print
the OLS slope and stability threshold.  The shipped catalog must give a
strictly negative slope and a stability threshold at or below 0.5 on every
combination; this script is the tuning loop used while choosing the
fixture's criterion values.
"""

from __future__ import annotations

import sys
import time

from gridresponse import (
    COST_CRITERIA,
    CRITERIA,
    STRATEGIES,
    SweepConfig,
    havex_template,
    load_default_catalog,
    run_sweep,
)


def main() -> int:
    graph = havex_template()
    catalog = load_default_catalog()
    failures = []
    for strategy in STRATEGIES:
        for focus in CRITERIA:
            if focus not in COST_CRITERIA:
                continue
            started = time.perf_counter()
            result = run_sweep(
                graph,
                catalog,
                SweepConfig(focus=focus, runs=1000, seed=0, strategy=strategy),
            )
            elapsed = time.perf_counter() - started
            fingerprints = {p.selection_fingerprint for p in result.points}
            verdict = "ok"
            if result.slope is None or result.slope >= 0:
                verdict = "BAD SLOPE"
            if result.stability_threshold is None or result.stability_threshold > 0.5:
                verdict = "BAD STABILITY" if verdict == "ok" else verdict + "+STABILITY"
            if verdict != "ok":
                failures.append((strategy, focus.value))
            print(
                f"{strategy:13s} {focus.value:22s} "
                f"slope={result.slope:+.6f} "
                f"stability={result.stability_threshold if result.stability_threshold is not None else float('nan'):.4f} "
                f"distinct_selections={len(fingerprints):3d} "
                f"{elapsed:5.1f}s {verdict}"
            )
    if failures:
        print("FAILURES:", failures)
        return 1
    print("all sweeps satisfy slope < 0 and stability <= 0.5")
    return 0


if __name__ == "__main__":
    sys.exit(main())
