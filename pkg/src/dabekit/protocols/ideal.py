"""Trusted two-party computations, modeled as ideal functionalities.

The issuing protocols rely on small joint computations whose real-world
instantiations (garbled circuits, OT-based protocols) are irrelevant to the
algebra being verified.  Here each functionality is a declarative spec:
parties submit named private scalars, prescribed parties receive prescribed
outputs, and nothing else exists — no intermediate values, no leakage, and
transcripts record only the invocation and who got output.

Functionality ids and their contracts (inputs keyed by role):

    HURI     KGC{alpha}, AA{r, beta}            ->  KGC{x = (alpha + r) * beta}
    HURII    CA{gamma, beta}, A{alpha}          ->  A{x = (alpha + gamma) * beta}
    WANG     KA{alpha1, beta}, CSP{alpha2}      ->  CSP{x = (alpha1 + alpha2) * beta}
    LIN1     KA{q, tau}, CS{alpha}              ->  CS{x = (alpha/q + tau) / q}
    LIN2     CS{r1, pi1}, KA{r2, pi2}           ->  DU{cpk3 = (r1+r2)/(pi1*pi2)},
                                                    CS{y = (r1+r2)*pi1*pi2},
                                                    KA{y = (r1+r2)*pi1*pi2}
    SECURED  KGC{alpha1, beta}, AA{alpha2, r}   ->  KGC{x = (alpha1+alpha2+r) / beta}
"""

from __future__ import annotations

from typing import Callable

from ..groups import InversionOfZero, Scalar
from .common import DivisionByZero, MissingInput

Inputs = dict[str, dict[str, Scalar]]
Outputs = dict[str, dict[str, Scalar]]


def _need(inputs: Inputs, role: str, name: str) -> Scalar:
    try:
        return inputs[role][name]
    except KeyError:
        raise MissingInput(f"functionality input {role}.{name} is missing") from None


def _huri(inputs: Inputs) -> Outputs:
    alpha = _need(inputs, "KGC", "alpha")
    r = _need(inputs, "AA", "r")
    beta = _need(inputs, "AA", "beta")
    return {"KGC": {"x": (alpha + r) * beta}}


def _hurii(inputs: Inputs) -> Outputs:
    gamma = _need(inputs, "CA", "gamma")
    beta = _need(inputs, "CA", "beta")
    alpha = _need(inputs, "A", "alpha")
    return {"A": {"x": (alpha + gamma) * beta}}


def _wang(inputs: Inputs) -> Outputs:
    alpha1 = _need(inputs, "KA", "alpha1")
    beta = _need(inputs, "KA", "beta")
    alpha2 = _need(inputs, "CSP", "alpha2")
    return {"CSP": {"x": (alpha1 + alpha2) * beta}}


def _lin1(inputs: Inputs) -> Outputs:
    q = _need(inputs, "KA", "q")
    tau = _need(inputs, "KA", "tau")
    alpha = _need(inputs, "CS", "alpha")
    return {"CS": {"x": (alpha / q + tau) / q}}


def _lin2(inputs: Inputs) -> Outputs:
    r1 = _need(inputs, "CS", "r1")
    pi1 = _need(inputs, "CS", "pi1")
    r2 = _need(inputs, "KA", "r2")
    pi2 = _need(inputs, "KA", "pi2")
    y = (r1 + r2) * pi1 * pi2
    cpk3 = (r1 + r2) / (pi1 * pi2)
    return {"DU": {"cpk3": cpk3}, "CS": {"y": y}, "KA": {"y": y}}


def _secured(inputs: Inputs) -> Outputs:
    alpha1 = _need(inputs, "KGC", "alpha1")
    beta = _need(inputs, "KGC", "beta")
    alpha2 = _need(inputs, "AA", "alpha2")
    r = _need(inputs, "AA", "r")
    return {"KGC": {"x": (alpha1 + alpha2 + r) / beta}}


FUNCTIONALITIES: dict[str, Callable[[Inputs], Outputs]] = {
    "HURI": _huri,
    "HURII": _hurii,
    "WANG": _wang,
    "LIN1": _lin1,
    "LIN2": _lin2,
    "SECURED": _secured,
}


def ideal_two_party(spec: str, inputs: Inputs, rng=None) -> Outputs:
    """Run one trusted computation.  ``rng`` is accepted for interface
    uniformity; none of the functionalities sample."""
    try:
        fn = FUNCTIONALITIES[spec]
    except KeyError:
        raise MissingInput(f"unknown functionality {spec!r}") from None
    try:
        return fn(inputs)
    except InversionOfZero as e:
        raise DivisionByZero(f"functionality {spec} divided by zero: {e}") from e
