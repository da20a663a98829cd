from dataclasses import asdict, dataclass, fields, replace

import yaml

from quasiminimal.errors import ConfigError


@dataclass
class BudgetSpec:
    length_cap: int = 10**7          # max symbols materialized by substitution iteration
    determinize_cap: int = 2**16     # max subset-construction states
    syndetic_cap: int = 20_000       # max run contexts in the syndeticity fixpoint
    order_budget: int = 8            # diagonal (k, h) search depth for leq_semidecide
    window: int = 10**5              # symbols per construction window
    dyck_depth: int = 3              # materialized Dyck levels
    primorial_levels: int = 2        # exact primorial levels (p(f(2)) >= 29^29 is out of reach)
    toy_primorial_levels: int = 6    # toy-parameter mode levels
    code_horizon: int = 40           # prefix-code search horizon (word length)
    is_factor_top: int = 24          # largest top symbol ruler.is_factor will scan for


@dataclass
class SelftestSpec:
    seed: int = 7
    occurrence_trials: int = 40
    automata_trials: int = 50
    substitution_trials: int = 60
    template_trials: int = 40
    ruler_trials: int = 20
    oracle_tables: int = 5
    outdir: str = "output/outputs"
    figures: bool = False


@dataclass
class PlotSpec:
    ruler_extent: int = 64           # symbols shown in the ruler figure
    gap_substitution: str = "0 -> 00\n1 -> 101"
    gap_letter: str = "1"
    gap_depth: int = 6
    show: bool = False


# Export singletons (imported by main.py)
BUDGET = BudgetSpec()
SELFTEST = SelftestSpec()
PLOTS = PlotSpec()


def _override(spec, section, name):
    if section is None:
        return spec
    if not isinstance(section, dict):
        raise ConfigError(f"section '{name}' must be a mapping")
    known = {f.name for f in fields(spec)}
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"unknown keys in '{name}': {', '.join(sorted(unknown))}")
    return replace(spec, **section)


def load_params(path):
    """Read a YAML file with optional `budget`, `selftest` and `plots` sections."""
    with open(path, encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ConfigError("configuration root must be a mapping")
    unknown = set(data) - {"budget", "selftest", "plots"}
    if unknown:
        raise ConfigError(f"unknown sections: {', '.join(sorted(unknown))}")
    return (
        _override(BUDGET, data.get("budget"), "budget"),
        _override(SELFTEST, data.get("selftest"), "selftest"),
        _override(PLOTS, data.get("plots"), "plots"),
    )


def apply_params(budget=None, selftest=None, plots=None):
    """Copy loaded specs into the exported singletons, which every module reads at call time."""
    for target, source in ((BUDGET, budget), (SELFTEST, selftest), (PLOTS, plots)):
        if source is not None:
            for name, value in asdict(source).items():
                setattr(target, name, value)
