"""Configuration management for ringlab."""

from pydantic import BaseModel


class Config(BaseModel):
    """Application configuration."""

    # Scalars and presets
    max_prime: int = 251
    max_dim: int = 64  # Largest algebra dimension the catalog builds

    # Enumeration guards
    element_cap: int = 2**20  # |R| = p^dim ceiling for exhaustive element scans
    endomorphism_cap: int = 2**20  # p^{dim End(M)} ceiling for idempotent search
    hom_enumeration_cap: int = 2**16  # p^{dim Hom(M, N)} ceiling in isomorphism search
    inner_inverse_cap: int = 2**16  # ceiling for scanning {x : axa = a}

    # Seeded sampling above the caps
    random_seed: int = 20240229
    random_trials: int = 100_000

    # Workers for exhaustive scans
    jobs: int = 1

    # Property suites
    lemma3_trials: int = 1000

    # Sweep catalog: every preset here has |R| <= 4096
    catalog_presets: list[str] = [
        "M(2,2)",
        "M(3,2)",
        "T(2,2)",
        "T(3,2)",
        "T(2,3)",
        "FpC(2,2)",
        "FpC(3,3)",
        "prod(M(2,2),T(2,2))",
        "M(2,3)",
        "T(4,2)",
    ]


# Global config instance
config = Config()
