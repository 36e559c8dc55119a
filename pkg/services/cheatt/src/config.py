"""
config.py
⚙️ Configuration Management cho CheAtt Service
"""
import os
from typing import List

from dotenv import load_dotenv

from errors import ConfigError

# Load biến môi trường từ .env (nếu có)
load_dotenv()


def _env_list(name: str, default: str) -> List[int]:
    raw = os.getenv(name, default)
    return [int(part) for part in raw.split(",") if part.strip()]


class Config:
    """Centralized process-level configuration (environment driven)"""

    # ============ LOGGING ============
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

    # ============ OUTPUT ============
    OUTPUT_DIR = os.getenv("CHEATT_OUTPUT_DIR", "outputs")
    SHOW_PROGRESS = os.getenv("CHEATT_PROGRESS", "0") == "1"

    # ============ DATA ============
    CATEGORICAL_THRESHOLD = int(os.getenv("CHEATT_CATEGORICAL_THRESHOLD", "20"))
    TRAIN_RATIO = 0.7
    VAL_RATIO = 0.1
    TEST_RATIO = 0.2
    MASK_PROBABILITY = 0.3

    # ============ EXPERIMENTS ============
    # Run seeds; CHEATT_SEEDS=1,2,3 overrides
    DEFAULT_SEEDS = _env_list("CHEATT_SEEDS", "1,2,3,4,5")
    EARLY_STOPPING_PATIENCE = 20
    SWEEP_ORDERS = [2, 3, 5, 10]
    SWEEP_BASES = ["power", "chebyshev", "legendre", "jacobi"]

    # ============ CHECKPOINT ============
    CHECKPOINT_FORMAT_VERSION = 1

    @staticmethod
    def validate():
        """Validate configuration"""
        errors = []

        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if Config.LOG_LEVEL.upper() not in valid_levels:
            errors.append(f"❌ LOG_LEVEL không hợp lệ: {Config.LOG_LEVEL}")

        total_ratio = Config.TRAIN_RATIO + Config.VAL_RATIO + Config.TEST_RATIO
        if abs(total_ratio - 1.0) > 0.01:
            errors.append(f"❌ Split ratios phải = 1.0 (hiện tại: {total_ratio})")

        if Config.CATEGORICAL_THRESHOLD < 1:
            errors.append(f"❌ CATEGORICAL_THRESHOLD must be >= 1 (got {Config.CATEGORICAL_THRESHOLD})")

        if not Config.DEFAULT_SEEDS:
            errors.append("❌ CHEATT_SEEDS is empty")

        if errors:
            raise ConfigError("\n".join(errors))

        return True

    @staticmethod
    def get_summary() -> str:
        """Print configuration summary"""
        return f"""
╔══════════════════════════════════════════════════════════╗
║         CHEATT EXPERIMENT SERVICE CONFIGURATION          ║
╚══════════════════════════════════════════════════════════╝

Output Dir: {Config.OUTPUT_DIR}
Log Level: {Config.LOG_LEVEL}

Data:
  • Split: {Config.TRAIN_RATIO}/{Config.VAL_RATIO}/{Config.TEST_RATIO}
  • Categorical threshold: {Config.CATEGORICAL_THRESHOLD} distinct values
  • Mask probability: {Config.MASK_PROBABILITY}

Experiments:
  • Seeds: {', '.join(str(s) for s in Config.DEFAULT_SEEDS)}
  • Early stopping patience: {Config.EARLY_STOPPING_PATIENCE}
  • Order sweep: {Config.SWEEP_ORDERS}
  • Basis sweep: {', '.join(Config.SWEEP_BASES)}
        """
