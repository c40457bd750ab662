import logging
import sys
from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables
PROJECT_DIR = Path(__file__).resolve().parent.parent
env_path = PROJECT_DIR / '.env'
load_dotenv(dotenv_path=env_path)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class Settings(BaseSettings):
    """Runtime settings, read from NUMSYM_* environment variables or .env"""

    model_config = SettingsConfigDict(env_prefix="NUMSYM_", extra="ignore")

    log_level: str = "INFO"
    database_url: str = "sqlite:///./numsym.db"

    # Enumeration and group closure limits
    path_limit: int = 100_000
    group_cap: int = 1_000_000

    # Monte Carlo defaults
    default_seed: int = 7
    default_replicas: int = 100
    distinguish_sigmas: float = 3.0
    workers: int = 1


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()


def setup_logging(level: str = "INFO") -> None:
    """Configure root logging on stderr; stdout is reserved for reports."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
