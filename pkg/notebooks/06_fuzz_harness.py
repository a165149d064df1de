"""
Seeded fuzzing
==============

Random scenarios from the three profiles, run through the trapezoid and
Grüss checks.  Every trapezoid violation lands on a window where f∘sigma
jumps; the Grüss bound holds everywhere.
"""
import collections
import io

from tsineq.harness import emit_report, generate_scenarios, run_suite

for profile in ("discrete", "continuous", "mixed"):
    report = run_suite(generate_scenarios(7, 150, profile), seed=7)
    s = report.summary
    print(f"{profile:10s} records {s['records']:4d}  passed {s['passed']:4d}  failed {s['failed']:2d}  "
          f"errors {s['errors']}  worst margin {s['worst_margin']:.3g}")
    by_check = collections.Counter(r["theorem_id"] for r in report.failures)
    flagged = all(r["components"].get("composition_breaks", 0) > 0 for r in report.failures)
    if report.failures:
        print(f"           failures by check {dict(by_check)}; all on windows with a jump: {flagged}")

# reports are newline-delimited JSON with a trailing summary line
buf = io.StringIO()
emit_report(run_suite(generate_scenarios(1, 1, "discrete"), seed=1), "json", stream=buf)
print()
print(buf.getvalue())
