import os

from dotenv import load_dotenv

load_dotenv(
    "config.env" if os.path.isfile("config.env") else "sample_config.env"
)

OUT_DIR = os.environ.get("EIFG_OUT_DIR", "runs")
JOBS = int(os.environ.get("EIFG_JOBS", 1))
FFT_WORKERS = int(os.environ.get("EIFG_FFT_WORKERS", 1))
LOG_LEVEL = os.environ.get("EIFG_LOG_LEVEL", "INFO").upper()
LOG_FILE = os.environ.get("EIFG_LOG_FILE", "")
BLOWUP_LIMIT = float(os.environ.get("EIFG_BLOWUP_LIMIT", 1e100))
SNAPSHOT_STRIDE = int(os.environ.get("EIFG_SNAPSHOT_STRIDE", 0))
CSV_FLOAT_FORMAT = os.environ.get("EIFG_CSV_FLOAT_FORMAT", "%.6e")
