"""Model "hur2": one central authority (CA) plus m attribute authorities A_i.

Setup:
    CA:  beta <- Z_p^*, publishes g^beta.
    A_i: alpha_i <- Z_p^*, publishes e(g,g)^(alpha_i).
    Combined public key: h = g^beta, e(g,g)^alpha with alpha = sum(alpha_i).

Key generation:
    1  DU -> CA    request
    2  CA chooses gamma_i in Z_p^* per A_i (their sum is the user's r_t) and
       engages each A_i in a trusted computation F(gamma_i, beta; alpha_i)
       that outputs x_i = (alpha_i + gamma_i) * beta to A_i
    3  A_i -> CA   T = g^(x_i / tau_i)   (tau_i fresh at A_i)
    4  CA -> A_i   B = T^(1/beta^2)
    5  A_i -> DU   D_i = B^(tau_i) = g^((alpha_i + gamma_i)/beta)
       DU multiplies: D = prod D_i = g^((sum alpha_i + r_t)/beta)
    6  CA -> DU    g^(r')            (r' fresh at CA)
    7  CA -> A_i   g^(r_t - r')
    8  A_i -> DU   per managed attribute j:
                   D_j = g^(r_t - r') * H(j)^(r_j),  D'_j = g^(r_j)
       DU finalizes D_j <- g^(r') * D_j = g^(r_t) * H(j)^(r_j).

The issued key is the single-authority form with alpha = sum(alpha_i) and
r = r_t.  Steps 2..5 run once per authority, in index order.
"""

from __future__ import annotations

import re

from ..cpabe import PublicKey, SecretKey
from ..groups import GroupContext
from .common import (EVERYONE, ModelConfig, PartyId, PartyState, Transcript,
                     UnassignedAttribute)
from .ideal import ideal_two_party

MODEL = "hur2"

TI = PartyId("TI", "TI")
CA = PartyId("CA", "CA")


def _auth_id(i: int) -> PartyId:
    return PartyId("A", f"A{i}")


def setup(ctx: GroupContext, config: ModelConfig, rng,
          seed: int | None = None) -> tuple[dict[str, PartyState], PublicKey, Transcript]:
    tr = Transcript(model=MODEL, seed=seed)
    tr.send(TI, EVERYONE, "setup:TI", {"g": ctx.g})

    beta = ctx.random_nonzero(rng)
    h = ctx.g ** beta
    ca = PartyState(CA, MODEL, secrets={"beta": beta}, public={"g^beta": h},
                    registry=config.registry)
    tr.send(CA, EVERYONE, "setup:CA", {"g^beta": h})

    states: dict[str, PartyState] = {"CA": ca}
    egg_alpha = ctx.gt_identity
    for i in range(1, config.m + 1):
        alpha_i = ctx.random_nonzero(rng)
        pk_i = ctx.egg ** alpha_i
        egg_alpha = egg_alpha * pk_i
        auth = PartyState(_auth_id(i), MODEL, secrets={"alpha": alpha_i},
                          public={"e(g,g)^alpha_i": pk_i}, registry=config.registry)
        states[f"A{i}"] = auth
        tr.send(auth.party, EVERYONE, f"setup:A{i}", {"e(g,g)^alpha_i": pk_i})

    pk = PublicKey(h=h, egg_alpha=egg_alpha)
    return states, pk, tr


def keygen(ctx: GroupContext, states: dict[str, PartyState], attrs, rng,
           du_label: str = "DU", seed: int | None = None) -> tuple[SecretKey, Transcript]:
    ca = states["CA"]
    auth_labels = sorted((k for k in states if re.fullmatch(r"A\d+", k)),
                         key=lambda k: int(k[1:]))
    auths = [states[k] for k in auth_labels]
    m = len(auths)
    du = PartyId("DU", du_label)
    registry = ca.registry
    attrs = sorted(set(attrs))
    for a in attrs:
        if not 1 <= registry.authority_of(a) <= m:
            raise UnassignedAttribute(
                f"attribute {a!r} is assigned to authority {registry.authority_of(a)}, "
                f"but only {m} authorities exist")

    tr = Transcript(model=MODEL, seed=seed)
    tr.send(du, CA, "1:request")

    gammas = [ctx.random_nonzero(rng) for _ in range(m)]
    r_t = sum(gammas[1:], start=gammas[0])
    ca.run = {"r_t": r_t, "gamma": {auth_labels[i]: gammas[i] for i in range(m)}}

    beta = ca.secrets["beta"]
    inv_beta2 = (beta * beta).inv()
    d = None
    for i, auth in enumerate(auths):
        tr.send(CA, auth.party, f"2:2pc[{auth.party.label}]")
        tr.invoke_ideal("HURII", (auth.party.label,))
        x_i = ideal_two_party("HURII", {
            "CA": {"gamma": gammas[i], "beta": beta},
            "A": {"alpha": auth.secrets["alpha"]},
        })["A"]["x"]
        tau_i = ctx.random_nonzero(rng)
        auth.run = {"x": x_i, "tau": tau_i}
        t_elem = ctx.g ** (x_i / tau_i)
        tr.send(auth.party, CA, f"3:T[{auth.party.label}]", {"T": t_elem})
        b_elem = t_elem ** inv_beta2
        tr.send(CA, auth.party, f"4:B[{auth.party.label}]", {"B": b_elem})
        d_i = b_elem ** tau_i
        tr.send(auth.party, du, f"5:D_i[{auth.party.label}]", {"D_i": d_i})
        d = d_i if d is None else d * d_i

    r_prime = ctx.random_nonzero(rng)
    ca.run["r_prime"] = r_prime
    g_r_prime = ctx.g ** r_prime
    tr.send(CA, du, "6:g^r'", {"g^r'": g_r_prime})

    g_rt_minus = ctx.g ** (r_t - r_prime)
    for auth in auths:
        tr.send(CA, auth.party, f"7:g^(r_t-r')[{auth.party.label}]", {"g^(r_t-r')": g_rt_minus})

    components = {}
    for i, auth in enumerate(auths, start=1):
        managed = registry.attributes_of(i, attrs)
        if not managed:
            continue
        payload = {}
        r_js = {}
        for j in managed:
            r_j = ctx.random_nonzero(rng)
            r_js[j] = r_j
            d_j_partial = g_rt_minus * ctx.hash_to_group(j) ** r_j
            dp_j = ctx.g ** r_j
            payload[f"D_{j}"] = d_j_partial
            payload[f"D'_{j}"] = dp_j
            # DU finalizes: g^(r') * (g^(r_t - r') * H(j)^(r_j)) = g^(r_t) * H(j)^(r_j)
            components[j] = (g_r_prime * d_j_partial, dp_j)
        auth.run["r_j"] = r_js
        tr.send(auth.party, du, f"8:components[{auth.party.label}]", payload)

    sk = SecretKey(gid_r=r_t, D=d, components=components)
    tr.final_outputs = {du_label: {"D": d,
                                   **{f"D_{j}": c[0] for j, c in components.items()},
                                   **{f"D'_{j}": c[1] for j, c in components.items()}}}
    return sk, tr
