"""Configuration module for Noise-Stable MDS."""

import os
from pathlib import Path

import yaml
from dotenv import load_dotenv

CONFIG_DIR = Path(__file__).parent
PROJECT_ROOT = CONFIG_DIR.parent

load_dotenv(PROJECT_ROOT / ".env")

# Load YAML configuration
CONFIG_FILE = Path(os.environ.get("NSMDS_CONFIG", CONFIG_DIR / "settings.yaml"))


def load_config(path: Path = CONFIG_FILE) -> dict:
    """Load configuration from YAML file."""
    with open(path, 'r') as f:
        config = yaml.safe_load(f) or {}
    level = os.environ.get("NSMDS_LOG_LEVEL")
    if level:
        config.setdefault('logging', {})['level'] = level.upper()
    return config


CONFIG = load_config()

# Export commonly used settings
NUMERICS_CONFIG = CONFIG.get('numerics', {})
EIGEN_CONFIG = CONFIG.get('eigensolver', {})
NOISE_CONFIG = CONFIG.get('noise', {})
SAMPLING_CONFIG = CONFIG.get('sampling', {})
GRAPH_CONFIG = CONFIG.get('graph', {})
RECONSTRUCT_CONFIG = CONFIG.get('reconstruct', {})
HARNESS_CONFIG = CONFIG.get('harness', {})
LOGGING_CONFIG = CONFIG.get('logging', {})
