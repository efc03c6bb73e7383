import os
from dataclasses import dataclass, replace

"""
Default parameters shared by every suite, plus the SuiteConfig object the
checkers receive. Change the constants here to change the defaults everywhere.
"""

TOOL_VERSION = "0.1.0"
REPORT_SCHEMA = 1

# env var overriding the default seed
SEED_ENV = "OMNILIE_SEED"

# random sampling
seed = 42
samples = 200
coeff_range = 3          # random integer coefficients are drawn from [-3, 3]
poly_degree = 2          # degree of random test polynomials
section_degree = 1       # degree of the coefficients of random sections
np_extra_functions = 3   # random functions added to the Nambu-Poisson generator set
section_samples = 50     # random section triples in the twisted bracket suites
calculus_degree = 3      # degree of random forms in the calculus suite

# polynomial degree cap, operations fail loudly above it
max_degree = 12

# exhaustive ranges of the linearization suites: arity -> largest dimension
exhaustive_dims = {2: 3, 3: 4}

MODES = ("exhaustive", "random")


@dataclass(frozen=True)
class SuiteConfig:
    mode: str = "exhaustive"
    seed: int = seed
    samples: int = samples
    max_degree: int = max_degree
    collect_all: bool = False
    full_range: bool = False     # exhaustive sweeps beyond exhaustive_dims

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.max_degree < 1:
            raise ValueError("max_degree must be at least 1")

    @classmethod
    def from_env(cls, **overrides):
        """Build a config whose default seed can be overridden through OMNILIE_SEED"""
        if "seed" not in overrides and os.environ.get(SEED_ENV):
            overrides["seed"] = int(os.environ[SEED_ENV])
        return cls(**overrides)

    def with_mode(self, mode):
        return replace(self, mode=mode)

    def exhaustive_in_range(self, m, n):
        """True when an exhaustive sweep was asked for and (m, n) is small enough for it, or full_range is set"""
        return self.mode == "exhaustive" and (self.full_range or m <= exhaustive_dims.get(n, 0))

    def to_dict(self):
        return {"mode": self.mode, "seed": self.seed, "samples": self.samples,
                "max_degree": self.max_degree, "collect_all": self.collect_all,
                "full_range": self.full_range}


DEFAULT = SuiteConfig()
