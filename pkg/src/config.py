import os
from typing import Optional

from dotenv import load_dotenv
from pydantic_settings import BaseSettings

load_dotenv()


class Settings(BaseSettings):
    PROJECT_NAME: str = "maghom"
    VERSION: str = "1.0.0"

    # Output conventions
    CSV_HEADER: str = "# maghom-csv v1"
    INFINITY_TOKEN: str = "inf"

    # Computation defaults
    DEFAULT_LMAX: int = int(os.getenv("MAGHOM_LMAX", "5"))
    MAX_BASIS_SIZE: int = int(os.getenv("MAGHOM_MAX_BASIS", "2000000"))
    MORSE_MIN_BASIS: int = int(os.getenv("MAGHOM_MORSE_MIN_BASIS", "64"))
    MODULAR_RANK_CHECK: bool = os.getenv("MAGHOM_MODULAR_CHECK", "false").lower() in (
        "1",
        "true",
        "yes",
    )

    # Experiments
    DEFAULT_SEED: int = int(os.getenv("MAGHOM_SEED", "0"))
    WORKERS: int = int(os.getenv("MAGHOM_WORKERS", str(os.cpu_count() or 1)))

    # Logging
    LOG_LEVEL: str = os.getenv("MAGHOM_LOG_LEVEL", "WARNING")
    LOG_DIR: Optional[str] = os.getenv("MAGHOM_LOG_DIR")

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


settings = Settings()
