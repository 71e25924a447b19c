"""Layout scoring: raw hardware quantities, the rescaled complexity score,
logical efficiency, and the TSV-chain fidelity estimate."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

from .routing import RoutedLayout


@dataclass(frozen=True)
class HardwareParams:
    q_tiers: int
    q_length: float
    q_bumps: float
    q_tsvs: float

    def as_tuple(self):
        return (self.q_tiers, self.q_length, self.q_bumps, self.q_tsvs)


@dataclass(frozen=True)
class ComplexityModel:
    baselines: tuple = (1.0, 1.0, 0.0, 0.0)
    optimistic: tuple = (5.0, 10.0, 4.0, 3.0)
    weights: tuple = (1.0, 1.0, 1.0, 1.0)

    def __post_init__(self):
        if any(p == b for p, b in zip(self.optimistic, self.baselines)):
            raise ValueError("optimistic values must differ from baselines")
        if any(w < 0 for w in self.weights) or not any(self.weights):
            raise ValueError("weights must be nonnegative and not all zero")


PARAM_NAMES = ("tiers", "length", "bumps", "tsvs")


@dataclass(frozen=True)
class CodeReport:
    family: str
    n: int
    k: int
    d: int
    efficiency: float
    params: HardwareParams
    components: tuple
    c_hw: float
    runtime_seconds: float
    seed: int


@dataclass(frozen=True)
class FidelityEstimate:
    n_tsv: int
    q_tsv: float
    omega_cplr: float
    t_g: float
    q_cplr: float
    t1_cplr: float
    f_2qb: float


def extract_params(routed: RoutedLayout) -> HardwareParams:
    """The four raw quantities of a finished layout: tier count, mean
    higher-tier edge length in units of the shortest edge, worst per-tier
    mean bump count, and mean TSVs per higher-tier edge."""
    all_edges = list(routed.routed_edges.values())
    if not all_edges:
        raise ValueError("empty layout")
    q_tiers = len(routed.tiers)
    min_len = min(re.length for re in all_edges if re.length > 0)
    higher = [re for re in all_edges if re.tier_index >= 1]
    q_length = (sum(re.length for re in higher) / len(higher) / min_len) if higher else 1.0
    q_bumps = 0.0
    for tier in routed.tiers:
        if tier.edges:
            q_bumps = max(q_bumps, sum(re.bumps for re in tier.edges) / len(tier.edges))
    q_tsvs = sum(re.tsvs for re in higher) / len(higher) if higher else 0.0
    return HardwareParams(q_tiers, q_length, q_bumps, q_tsvs)


def rescale(params: HardwareParams, model: ComplexityModel) -> tuple:
    """c_i = (q_i - b_i) / (p_i - b_i), unclamped in both directions."""
    return tuple((q - b) / (p - b) for q, b, p in
                 zip(params.as_tuple(), model.baselines, model.optimistic))


def complexity(components, weights) -> float:
    """C_hw = 1 + weighted mean of the rescaled components."""
    wsum = sum(weights)
    if wsum == 0:
        raise ValueError("weights sum to zero")
    return 1.0 + sum(w * c for w, c in zip(weights, components)) / wsum


def score(routed: RoutedLayout, model: ComplexityModel = ComplexityModel()) -> tuple:
    params = extract_params(routed)
    comps = rescale(params, model)
    return params, comps, complexity(comps, model.weights)


def logical_efficiency(n: int, k: int, d: int) -> float:
    """eta_L = k d^2 / n, the overhead improvement over the surface code."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return round(k * d * d / n, 2)


def tsv_fidelity_estimate(n_tsv: int, q_tsv: float, omega_cplr: float,
                          t_g: float) -> FidelityEstimate:
    """Worst-case two-qubit fidelity when a coupler is loaded by n_tsv TSVs
    of quality factor q_tsv: the chain quality divides down to
    q_cplr = q_tsv / n_tsv, giving T1 = q_cplr / omega and an error
    4/5 * t_g / T1."""
    if min(n_tsv, q_tsv, omega_cplr, t_g) <= 0:
        raise ValueError("all fidelity inputs must be positive")
    q_cplr = q_tsv / n_tsv
    t1 = q_cplr / omega_cplr
    f = 1.0 - (4.0 * t_g / 5.0) / t1
    if f < 0.0:
        warnings.warn("gate time exceeds coupler lifetime budget; fidelity clamped to 0")
        f = 0.0
    return FidelityEstimate(n_tsv, q_tsv, omega_cplr, t_g, q_cplr, t1, f)


def sweep_model(reports, parameter: str, multipliers,
                model: ComplexityModel = ComplexityModel()) -> dict:
    """Re-score reports under model variants: the named optimistic value is
    multiplied by each factor (raw quantities untouched). parameter may also
    be 'weights:<name>' to isolate one component with unit weight."""
    out = {}
    for mult in multipliers:
        if mult == 0:
            raise ValueError("multiplier must be nonzero")
        variant = vary_model(model, parameter, mult)
        scored = []
        for rep in reports:
            comps = rescale(rep.params, variant)
            scored.append(replace(rep, components=comps,
                                  c_hw=complexity(comps, variant.weights)))
        out[mult] = scored
    return out


def vary_model(model: ComplexityModel, parameter: str, mult: float) -> ComplexityModel:
    if parameter.startswith("weights:"):
        name = parameter.split(":", 1)[1]
        idx = PARAM_NAMES.index(name)
        weights = tuple(mult if i == idx else 0.0 for i in range(4))
        return replace(model, weights=weights)
    idx = PARAM_NAMES.index(parameter)
    optimistic = tuple(p * mult if i == idx else p
                       for i, p in enumerate(model.optimistic))
    return replace(model, optimistic=optimistic)


def isolation_model(parameter: str, model: ComplexityModel = ComplexityModel()) -> ComplexityModel:
    """Weights (…, 1, …) zero elsewhere: C_hw reduces to 1 + c_i."""
    return vary_model(model, f"weights:{parameter}", 1.0)
