import json
import logging
import sys

import pandas as pd
from joblib import Parallel, delayed

from app import config
from app.errors import ModelInputError
from app.services.library_service import build_family, compare_family

logging.basicConfig(level=config.LOG_LEVEL, format=config.LOG_FORMAT)
logger = logging.getLogger(__name__)

# (family, parameter) yang disapu
SWEEP = (
    [("A", {"p": p}) for p in range(3, 9)]
    + [("B", {"p": p}) for p in (4, 5, 7, 8)]
    + [("C", {"p": p}) for p in range(2, 7)]
    + [("osp", {}), ("n4", {})]
    + [("walgebra", {"r": r}) for r in range(2, 9)]
    + [("wsuper", {"r": r}) for r in range(2, 7)]
)


def compare_one(family: str, parameters: dict) -> dict:
    comparison = compare_family(build_family(family, **parameters))
    return comparison.model_dump(mode="json")


def run_report():
    """
    Menjalankan perbandingan untuk semua family di SWEEP secara paralel,
    mencetak ringkasan tabel, lalu menyimpan laporan lengkap ke REPORT_PATH.
    """
    logger.info(f"Comparing {len(SWEEP)} family configuration(s) with n_jobs={config.N_JOBS}...")
    try:
        results = Parallel(n_jobs=config.N_JOBS)(
            delayed(compare_one)(family, parameters) for family, parameters in SWEEP)
    except ModelInputError as e:
        logger.error(f"Family sweep rejected its input: {e}")
        return 1

    summary = pd.DataFrame([{
        "family": r["family"],
        "parameters": ", ".join(f"{k}={v}" for k, v in r["parameters"].items()) or "-",
        "parity": r["report"]["parity"],
        "parity_matches": r["parity_matches"],
        "simple_lifts": len(r["derived_simple_lifts"]),
        "indecomposable_lifts": len(r["derived_indecomposable_lifts"]),
        "divergences": len(r["divergences"]),
    } for r in results])
    print(summary.to_string(index=False))

    with open(config.REPORT_PATH, "w", encoding="utf-8") as report_file:
        json.dump(results, report_file, indent=2, ensure_ascii=False)
    logger.info(f"Family report written to {config.REPORT_PATH}.")

    mismatches = summary[summary["parity_matches"] == False]  # noqa: E712
    if not mismatches.empty:
        logger.warning(f"{len(mismatches)} configuration(s) disagree with the expected parity.")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(run_report())
