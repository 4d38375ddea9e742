"""Model "wang": a key authority (KA) and a cloud service provider (CSP)
jointly issue weighted keys of the form

    SK = { D = g^(alpha1 + alpha2 + r*beta),  L = g^r,
           per attribute j: D_j = H(j)^(r * w_j) }

Setup:
    KA:  alpha1, beta <- Z_p, publishes {g^beta, e(g,g)^alpha1} and the
         public per-attribute weights w_j.
    CSP: alpha2 <- Z_p, publishes e(g,g)^alpha2.
    Combined public key: g^beta and e(g,g)^(alpha1 + alpha2).

Key generation:
    1  DU -> KA    request
    2  KA chooses the user's unique r; trusted computation F outputs
       x = (alpha1 + alpha2) * beta to CSP
    3  CSP -> KA   X_1 = g^(x / rho1)
    4  KA -> CSP   Y_1 = X_1^(theta/beta),  Y_2 = g^(r*beta*theta)
    5  CSP -> KA   X_2 = (Y_1^(rho1) * Y_2)^(rho2)
    6  KA -> CSP   Y_3 = X_2^(1/theta)
    7  CSP -> DU   D = Y_3^(1/rho2)
    8  KA -> DU    L = g^r and the D_j components

LSSS-style encryption for this key shape is out of scope here; issued keys
are verified against the pairing identity

    e(D, g) = e(g,g)^(alpha1+alpha2) * e(L, g^beta)

and against a legitimate protocol run under matched randomness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..groups import GElem, GroupContext, GtElem, Scalar, pair
from .common import EVERYONE, ModelConfig, PartyId, PartyState, Transcript
from .ideal import ideal_two_party

MODEL = "wang"

TI = PartyId("TI", "TI")
KA = PartyId("KA", "KA")
CSP = PartyId("CSP", "CSP")


@dataclass(frozen=True)
class WangPublicKey:
    h: GElem                  # g^beta
    egg_alpha: GtElem         # e(g,g)^(alpha1 + alpha2)
    weights: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class WatersKey:
    D: GElem                             # g^(alpha1 + alpha2 + r*beta)
    L: GElem                             # g^r
    components: dict[str, GElem]         # attr -> H(attr)^(r * w)
    weights: dict[str, Scalar] = field(default_factory=dict)

    @property
    def attributes(self) -> set[str]:
        return set(self.components)


def key_is_valid(ctx: GroupContext, pk: WangPublicKey, key: WatersKey) -> bool:
    """Public pairing identity every honestly issued key satisfies."""
    return pair(key.D, ctx.g) == pk.egg_alpha * pair(key.L, pk.h)


def setup(ctx: GroupContext, config: ModelConfig, rng,
          seed: int | None = None) -> tuple[dict[str, PartyState], WangPublicKey, Transcript]:
    tr = Transcript(model=MODEL, seed=seed)
    tr.send(TI, EVERYONE, "setup:TI", {"g": ctx.g})

    alpha1 = ctx.random_nonzero(rng)
    beta = ctx.random_nonzero(rng)
    h = ctx.g ** beta
    egg_a1 = ctx.egg ** alpha1
    ka = PartyState(KA, MODEL, secrets={"alpha1": alpha1, "beta": beta},
                    public={"g^beta": h, "e(g,g)^alpha1": egg_a1},
                    registry=config.registry)
    tr.send(KA, EVERYONE, "setup:KA", {"g^beta": h, "e(g,g)^alpha1": egg_a1})

    alpha2 = ctx.random_nonzero(rng)
    egg_a2 = ctx.egg ** alpha2
    csp = PartyState(CSP, MODEL, secrets={"alpha2": alpha2},
                     public={"e(g,g)^alpha2": egg_a2})
    tr.send(CSP, EVERYONE, "setup:CSP", {"e(g,g)^alpha2": egg_a2})

    weights = {a: e.weight for a, e in config.registry.entries.items()}
    pk = WangPublicKey(h=h, egg_alpha=egg_a1 * egg_a2, weights=weights)
    return {"KA": ka, "CSP": csp}, pk, tr


def keygen(ctx: GroupContext, states: dict[str, PartyState], attrs, rng,
           du_label: str = "DU", seed: int | None = None) -> tuple[WatersKey, Transcript]:
    ka, csp = states["KA"], states["CSP"]
    du = PartyId("DU", du_label)
    registry = ka.registry
    attrs = sorted(set(attrs))
    for a in attrs:
        registry.require(a)

    tr = Transcript(model=MODEL, seed=seed)
    tr.send(du, KA, "1:request")

    r = ctx.random_nonzero(rng)
    ka.run = {"r": r}
    tr.send(KA, CSP, "2:2pc")
    tr.invoke_ideal("WANG", ("CSP",))
    x = ideal_two_party("WANG", {
        "KA": {"alpha1": ka.secrets["alpha1"], "beta": ka.secrets["beta"]},
        "CSP": {"alpha2": csp.secrets["alpha2"]},
    })["CSP"]["x"]
    csp.run = {"x": x}

    rho1 = ctx.random_nonzero(rng)
    csp.run["rho1"] = rho1
    x1 = ctx.g ** (x / rho1)
    tr.send(CSP, KA, "3:X_1", {"X_1": x1})
    ka.run["X_1"] = x1

    beta = ka.secrets["beta"]
    theta = ctx.random_nonzero(rng)
    ka.run["theta"] = theta
    y1 = x1 ** (theta / beta)
    y2 = ctx.g ** (r * beta * theta)
    tr.send(KA, CSP, "4:Y_1,Y_2", {"Y_1": y1, "Y_2": y2})

    rho2 = ctx.random_nonzero(rng)
    csp.run["rho2"] = rho2
    x2 = (y1 ** rho1 * y2) ** rho2
    tr.send(CSP, KA, "5:X_2", {"X_2": x2})

    y3 = x2 ** theta.inv()
    tr.send(KA, CSP, "6:Y_3", {"Y_3": y3})

    d = y3 ** rho2.inv()
    tr.send(CSP, du, "7:D", {"D": d})

    l_elem = ctx.g ** r
    components = {}
    weights = {}
    payload = {"L": l_elem}
    for j in attrs:
        w_j = ctx.scalar(registry.weight_of(j))
        weights[j] = w_j
        d_j = ctx.hash_to_group(j) ** (r * w_j)
        components[j] = d_j
        payload[f"D_{j}"] = d_j
    tr.send(KA, du, "8:L,D_j", payload)

    key = WatersKey(D=d, L=l_elem, components=components, weights=weights)
    tr.final_outputs = {du_label: {"D": d, "L": l_elem,
                                   **{f"D_{j}": c for j, c in components.items()}}}
    return key, tr
