import os
import logging
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

load_dotenv()

OUTPUT_DIR = os.getenv("PSVM_ABC_OUTPUT_DIR", "runs")
THREADS = int(os.getenv("PSVM_ABC_THREADS", "1"))
LOG_LEVEL = os.getenv("PSVM_ABC_LOG_LEVEL", "INFO").upper()
IS_DEBUG = os.getenv("PSVM_ABC_DEBUG", "false").lower() == "true"
