"""
Message templates for the lab CLI.
"""


class Messages:
    """CLI message templates"""

    DESCRIPTION = "Spectral asymptotics lab for weighted Hankel operators"

    # Subcommand help
    HELP_CONSTANTS = "Asymptotic constants C_{d,gamma} and C^+-"
    HELP_SPECTRUM = "Signed eigenvalues of the reduced Hankel matrix Gamma_N"
    HELP_VERIFY = "Run a verification suite"
    HELP_STUDY = "Run an asymptotic, model-compare or parity-split study"
    HELP_RUNS = "List recorded runs"

    # Results
    WROTE = "Wrote {path}"
    SPECTRUM_PARTIAL = "Spectrum incomplete: {converged} eigenvalues converged for k={k}"
    VERIFY_PASSED = "Suite {suite}: all {count} properties passed"
    VERIFY_FAILED = "Suite {suite}: failed {failed}"
    RUN_LINE = "#{id} {created_at:%Y-%m-%d %H:%M:%S} {command} {status} (exit {exit_code}) {output}"
    NO_RUNS = "No runs recorded"

    # Errors
    ERROR_CONFIG_KEYS = "Unknown configuration keys for {command}: {keys}"
    ERROR_CONFIG_FILE = "Cannot read configuration file {path}: {error}"
    ERROR_FAILED = "{kind}: {error}"

    PLOT_SCRIPT = '''"""Ratio n^gamma lambda_n / C against n, generated by hankel_lab study."""

import csv

import matplotlib.pyplot as plt

rows = list(csv.DictReader(open({csv_path!r}, encoding="utf-8")))
n = [int(row["n"]) for row in rows]

fig, ax = plt.subplots()
for column in ("ratio_plus", "ratio_minus"):
    points = [(k, float(row[column])) for k, row in zip(n, rows) if row[column] and float(row[column]) > 0]
    if points:
        ax.plot(*zip(*points), marker=".", label=column)
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("n")
ax.set_ylabel("n^gamma lambda_n / C")
ax.set_title({title!r})
ax.legend()
fig.savefig({png_path!r}, dpi=150)
'''
