# app/config.py
import os
import logging
from dotenv import load_dotenv

load_dotenv()
logger = logging.getLogger(__name__)


def _int_env(name: str, default: int) -> int:
    """Membaca variabel environment bertipe integer, fallback ke default jika tidak valid."""
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Invalid integer for {name}='{raw}', using default {default}.")
        return default


LOG_LEVEL = os.environ.get("LAB_LOG_LEVEL", "INFO").upper()
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

# Batas orbit untuk simple current berorde tak hingga
ORBIT_TRUNCATION = _int_env("LAB_ORBIT_TRUNCATION", 16)

# Guard enumerasi kocycle (|G| dan m)
COCYCLE_MAX_GROUP_ORDER = _int_env("LAB_COCYCLE_MAX_GROUP_ORDER", 4)
COCYCLE_MAX_VALUE_ORDER = _int_env("LAB_COCYCLE_MAX_VALUE_ORDER", 8)
COBOUNDARY_MAX_GROUP_ORDER = _int_env("LAB_COBOUNDARY_MAX_GROUP_ORDER", 3)
COCYCLE_LIST_LIMIT = _int_env("LAB_COCYCLE_LIST_LIMIT", 64)

# Jumlah worker joblib untuk sweep modul (1 = sekuensial)
N_JOBS = _int_env("LAB_N_JOBS", 1)

REPORT_PATH = os.environ.get("LAB_REPORT_PATH", "family_report.json")
