import os
import logging
from dotenv import load_dotenv

load_dotenv()

# Logging Configuration
LOG_DIR = os.getenv("LOG_DIR", "./logs")
LOG_FILE = os.getenv("LOG_FILE", "robustprod.log")
LOG_LEVEL = getattr(logging, os.getenv("LOG_LEVEL", "INFO").upper(), logging.INFO)
LOG_TO_FILE = os.getenv("LOG_TO_FILE", "false").lower() == "true"

# Graylog is optional, only wired when a host is given
GRAYLOG_HOST = os.getenv("GRAYLOG_HOST")
GRAYLOG_PORT = int(os.getenv("GRAYLOG_PORT", "12201"))

# Decontamination defaults
DEFAULT_ALPHA = float(os.getenv("DEFAULT_ALPHA", "0.95"))
DEFAULT_IQR_SCALE = float(os.getenv("DEFAULT_IQR_SCALE", "1.5"))
DEFAULT_MIN_RUN = int(os.getenv("DEFAULT_MIN_RUN", "4"))

# Estimation defaults
DEFAULT_CF_DEGREE = int(os.getenv("DEFAULT_CF_DEGREE", "2"))
# First-stage partial F below which an instrumented input counts as unidentified
WEAK_INSTRUMENT_F = float(os.getenv("WEAK_INSTRUMENT_F", "10"))

# Input / output
CSV_DELIMITER = os.getenv("CSV_DELIMITER", ",")

# Rows compared per block in the dominance scans (memory ~ chunk * n * p)
CLASSIFY_CHUNK_SIZE = int(os.getenv("CLASSIFY_CHUNK_SIZE", "512"))
