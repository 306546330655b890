"""
Configuration settings for the FlexNet solver suite
"""
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional


class Settings(BaseSettings):
    """Application settings loaded from environment variables"""

    # Application Settings
    log_level: str = "INFO"
    log_format: str = "text"  # "text" or "json"
    log_file: Optional[str] = None
    cache_results: bool = False
    results_dir: str = "data/results_cache"

    # Run tracing
    trace_runs: bool = False
    trace_dir: str = "data/run_logs"

    # Desk-scale bounds
    cut_enumeration_bound: int = 20  # vertices
    oracle_edge_bound: int = 26  # edges for opt_flex
    cover_candidate_bound: int = 40  # candidate edges for opt_cover
    separation_q_bound: int = 3  # largest q for separate_general

    # LP Parameters
    lp_feasibility_tol: float = 1e-7
    lp_iteration_cap: int = 10000

    # Instance generation
    generator_attempt_cap: int = 200

    # Batch runs
    max_workers: int = 4

    model_config = SettingsConfigDict(
        env_prefix="FLEXNET_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


# Global settings instance
settings = Settings()
